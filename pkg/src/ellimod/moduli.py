"""Weighted projective structure of the moduli space and parabolic data."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .errors import ExcludedType
from .rootsys import (
    RootSystem,
    build_root_system,
    casimir_weights,
    identify_cartan,
    wp_weights,
    _components,
)


@dataclass(frozen=True)
class WPSpace:
    weights: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.weights) - 1

    @property
    def is_projective_space(self) -> bool:
        return all(g == 1 for g in self.weights)

    def __str__(self) -> str:
        return "WP(" + ",".join(map(str, self.weights)) + ")"


@dataclass(frozen=True)
class ParabolicData:
    marked_node: int  # 1-based, Bourbaki
    rule: str
    level_counts: dict[int, int]
    levi: tuple[tuple[str, int], ...]  # simple factors of the Levi (the centre C* is implicit)
    d: int | None = None

    @property
    def unipotent_dim(self) -> int:
        return sum(self.level_counts.values())


@dataclass(frozen=True)
class FamilyTable:
    rows: tuple[tuple[int, int], ...]  # (weight g_i, exponent d_i), leading (1, 0)


def wp_space(system: RootSystem) -> WPSpace:
    return WPSpace(wp_weights(system))


def stratum_dim(system: RootSystem, d: int) -> int:
    """Dimension of the locus with Z/d isotropy: #{i : d | g_i}, for d >= 2."""
    if d < 2:
        raise ValueError("stratum_dim needs d >= 2 (the i = 0 convention only matters for d = 1)")
    return sum(1 for g in wp_weights(system) if g % d == 0)


def _marked_node(system: RootSystem, d: int | None) -> tuple[int, str]:
    """0-based marked node and the rule that selected it."""
    r, cartan = system.rank, system.cartan
    if system.kind == "A":
        if d is None or not 1 <= d <= r:
            raise ValueError(f"type A{r} needs 1 <= d <= {r}, got {d}")
        return d - 1, f"A-type-choice d={d}"
    if d is not None:
        raise ValueError(f"d is only meaningful for type A, not {system.name}")
    degree = [sum(1 for j in range(r) if j != i and cartan[i][j]) for i in range(r)]
    if system.kind in "DE":
        trivalent = [i for i in range(r) if degree[i] == 3]
        if system.name == "D3":
            # D3 = A3 has no trivalent vertex; the node where the two spin legs meet is used
            return 0, "trivalent"
        assert len(trivalent) == 1, f"marking rule ambiguous for {system.name}"
        return trivalent[0], "trivalent"
    # node on the long-root side of the multiple edge
    long_side = [
        j for i in range(r) for j in range(r)
        if i != j and cartan[i][j] * cartan[j][i] > 1 and system.lengths[j] > system.lengths[i]
    ]
    assert len(long_side) == 1, f"marking rule ambiguous for {system.name}"
    return long_side[0], "multiple-edge-long-root"


_EXPECTED_LEVI = {
    "B": lambda r: sorted([("A", r - 2), ("A", 1)]) if r > 2 else [("A", 1)],
    "C": lambda r: [("A", r - 1)],
    "F": lambda r: sorted([("A", 1), ("A", 2)]),
    "G": lambda r: [("A", 1)],
}


def parabolic_data(system: RootSystem, d: int | None = None) -> ParabolicData:
    """Marked Dynkin node, Levi type and root counts per level of the unipotent radical."""
    node, rule = _marked_node(system, d)
    r = system.rank
    levels = Counter(b[node] for b in system.positive_roots if b[node] > 0)
    rest = [i for i in range(r) if i != node]
    levi = []
    for comp in _components(system.cartan, rest):
        sub = [[system.cartan[i][j] for j in comp] for i in comp]
        levi.append(identify_cartan(sub))
    levi.sort()
    if system.kind in _EXPECTED_LEVI:
        assert levi == _EXPECTED_LEVI[system.kind](r), (system.name, levi)
    levi_pos = sum(len(build_root_system(k, n).positive_roots) for k, n in levi)
    counts = dict(sorted(levels.items()))
    assert sum(counts.values()) == len(system.positive_roots) - levi_pos
    assert set(counts) == set(range(1, system.marks[node] + 1))
    return ParabolicData(node + 1, rule, counts, tuple(levi), d)


def family_exponent_order(system: RootSystem) -> tuple[int, ...]:
    """Casimir weights in the order paired with the ascending weights g_1 <= ... <= g_r."""
    ds = casimir_weights(system)
    if system.kind == "D":
        n = system.rank
        evens = list(range(2, 2 * n - 1, 2))
        order = evens[:2] + [n] + evens[2:]
        assert sorted(order) == sorted(ds)
        return tuple(order)
    return tuple(sorted(ds))


def family_table(system: RootSystem) -> FamilyTable:
    """Line-bundle exponents and C* weights of the relative parabolic construction."""
    if system.name == "E8":
        raise ExcludedType("E8 is excluded: the relative parabolic construction does not globalize for E8")
    gs = sorted(system.comarks)
    rows = ((1, 0),) + tuple(zip(gs, family_exponent_order(system)))
    return FamilyTable(rows)


def n_P(system: RootSystem, d: int | None = None) -> int:
    """Order of the central subgroup by which the universal bundle is divided to descend."""
    kind, r = system.kind, system.rank
    if kind == "A":
        n = r + 1
        if d is None or not 1 <= d <= r:
            raise ValueError(f"SL({n}) needs 1 <= d <= {r}, got {d}")
        return n // math.gcd(d, n)
    if d is not None:
        raise ValueError(f"d is only meaningful for type A, not {system.name}")
    if kind == "C" or (kind == "B" and r % 2 == 0) or (kind == "D" and r % 2 == 1):
        return 2
    return 1


def center_order(system: RootSystem) -> int:
    """Order of the centre of the simply connected group (= det of the Cartan matrix)."""
    return system.cartan_det
