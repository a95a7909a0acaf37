"""Atiyah bundles, regular representatives for classical groups, adjoint shapes.

Bundles are described by discrete data only: a regular semistable bundle of
degree zero is a multiset of Atiyah summands ``I_d(lambda)``, and the
auxiliary bundles built from the stable ``W_d`` are tracked through
``(rank, degree)`` with Riemann-Roch on a genus-one curve.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .elltorus import ETA, O, ELambdaPoint, EPoint, vanishing_indices, root_values
from .errors import DegreeZeroError, ParseError, SystemMismatch, ValidationError
from .rootsys import RootSystem, build_root_system, casimir_weights, classify_indices

GROUPS = ("SL", "Sp", "SO_even", "SO_odd")


@dataclass(frozen=True, order=True)
class AtiyahSummand:
    """I_d(lambda): the rank-d indecomposable self-extension of lambda."""

    d: int
    lam: EPoint = O

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValidationError(f"Atiyah summand rank must be >= 1, got {self.d}", code="bad_rank")

    def __str__(self) -> str:
        return f"I_{self.d}({self.lam})"


@dataclass(frozen=True)
class BundleDecomp:
    """A direct sum of Atiyah summands together with its structure group."""

    group: str
    summands: tuple[AtiyahSummand, ...]
    n: int | None = None

    def __post_init__(self) -> None:
        if self.group not in GROUPS:
            raise ValidationError(f"unknown group {self.group!r}; expected one of {GROUPS}", code="bad_group")
        object.__setattr__(self, "summands", tuple(sorted(self.summands)))

    @property
    def rank(self) -> int:
        return sum(s.d for s in self.summands)

    def by_twist(self) -> dict[EPoint, list[int]]:
        out: dict[EPoint, list[int]] = defaultdict(list)
        for s in self.summands:
            out[s.lam].append(s.d)
        return {k: sorted(v) for k, v in out.items()}

    def to_json(self) -> dict:
        out = {
            "group": self.group,
            "summands": [{"d": s.d, "lambda": s.lam.to_strings()} for s in self.summands],
        }
        if self.n is not None:
            out["n"] = self.n
        return out

    @classmethod
    def from_json(cls, data: dict) -> BundleDecomp:
        try:
            summands = tuple(
                AtiyahSummand(int(s["d"]), EPoint.from_strings(s.get("lambda", ["0", "0"])))
                for s in data["summands"]
            )
            n = data.get("n")
            return cls(data["group"], summands, None if n is None else int(n))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed bundle JSON: {exc}") from None


def atiyah_hom_dim(a: AtiyahSummand, b: AtiyahSummand) -> int:
    """dim Hom(I_a(lambda), I_b(lambda')) = min(a, b) if lambda = lambda' else 0."""
    return min(a.d, b.d) if a.lam == b.lam else 0


# --- SL(n) -----------------------------------------------------------------

def _expected_rank(v: BundleDecomp) -> int | None:
    if v.n is None:
        return None
    return {"SL": v.n, "Sp": 2 * v.n, "SO_even": 2 * v.n, "SO_odd": 2 * v.n + 1}[v.group]


def _check_group(v: BundleDecomp, *groups: str) -> None:
    if v.group not in groups:
        raise ValidationError(f"expected a {'/'.join(groups)} bundle, got {v.group}", code="wrong_group")
    expected = _expected_rank(v)
    if expected is not None and expected != v.rank:
        raise ValidationError(
            f"summand ranks add up to {v.rank}, but {v.group} with n={v.n} has rank {expected}",
            code="rank_mismatch",
            clause="sum of ranks equals the rank of the standard representation",
        )


def sl_classify(v: BundleDecomp) -> dict:
    """Regularity and automorphism dimension of an SL(n) bundle."""
    _check_group(v, "SL")
    det = O
    for s in v.summands:
        det = det + s.d * s.lam
    if not det.is_zero:
        raise ValidationError(
            f"determinant sum d_i*lambda_i = {det} is not trivial",
            code="nontrivial_determinant",
            clause="lambda_1^d_1 ... lambda_r^d_r = O",
        )
    end_dim = sum(atiyah_hom_dim(a, b) for a in v.summands for b in v.summands)
    aut_dim = end_dim - 1
    twists = [s.lam for s in v.summands]
    regular = len(set(twists)) == len(twists)
    assert regular == (aut_dim == v.rank - 1)
    return {"is_regular": regular, "aut_dim": aut_dim}


# --- Sp(2n) and SO(m) ------------------------------------------------------

def _pair_non_two_torsion(groups: dict[EPoint, list[int]]) -> int:
    """Check the lambda / lambda^-1 pairing of the non-two-torsion blocks; return sum of d_i."""
    total = 0
    # two passes so the reported code does not depend on iteration order
    for lam, ds in sorted(groups.items()):
        if not lam.is_two_torsion and len(ds) > 1:
            raise ValidationError(
                f"twist {lam} carries {len(ds)} blocks {ds}",
                code="repeated_lambda",
                clause="lambda_i != lambda_j^(+-1) for i != j",
            )
    for lam, ds in groups.items():
        if lam.is_two_torsion:
            continue
        partner = groups.get(-lam)
        if partner is None or partner != ds:
            raise ValidationError(
                f"I_{ds[0]}({lam}) has no matching partner I_{ds[0]}({-lam})",
                code="unpaired_summand",
                clause="summands come in pairs I_d(lambda) + I_d(lambda^-1)",
            )
        total += ds[0]
    return total // 2


def sp_validate(v: BundleDecomp) -> int:
    """Check the shape of a regular Sp(2n) bundle; return n."""
    _check_group(v, "Sp")
    groups = v.by_twist()
    n = _pair_non_two_torsion(groups)
    for eta in ETA:
        ds = groups.get(eta)
        if not ds:
            continue
        if any(d % 2 for d in ds):
            raise ValidationError(
                f"odd block I_{[d for d in ds if d % 2][0]}({eta}) at a two-torsion twist",
                code="odd_block_at_two_torsion",
                clause="I_m carries an alternating form only for m even",
            )
        if len(ds) > 1:
            raise ValidationError(
                f"two-torsion twist {eta} carries {len(ds)} blocks",
                code="repeated_lambda",
                clause="at most one block I_2a(eta_j) per two-torsion point",
            )
        n += ds[0] // 2
    if v.rank % 2:
        raise ValidationError(f"odd total rank {v.rank}", code="rank_mismatch")
    assert 2 * n == v.rank
    return n


def so_validate(v: BundleDecomp) -> int:
    """Check the shape of a regular liftable SO(2n) / SO(2n+1) bundle; return n."""
    _check_group(v, "SO_even", "SO_odd")
    odd = v.group == "SO_odd"
    if v.rank % 2 != int(odd):
        raise ValidationError(f"rank {v.rank} has the wrong parity for {v.group}", code="rank_mismatch")
    groups = v.by_twist()
    _pair_non_two_torsion(groups)
    shapes = {eta: groups.get(eta, []) for eta in ETA}

    single_odd = [eta for eta, ds in shapes.items() if len(ds) == 1 and ds[0] % 2]
    for eta, ds in shapes.items():
        if any(d % 2 == 0 for d in ds):
            raise ValidationError(
                f"even block at two-torsion twist {eta}: {ds}",
                code="parity_violation",
                clause="I_m carries a symmetric form only for m odd",
            )
    if not odd and len(single_odd) == 4:
        raise ValidationError(
            "all four two-torsion twists carry a lone odd block; such a bundle does not lift to Spin(2n)",
            code="non_liftable",
            clause="the pattern I_(2a0+1) + I_(2a1+1)(eta1) + I_(2a2+1)(eta2) + I_(2a3+1)(eta3) is not liftable",
        )
    if odd:
        ds0 = shapes[ETA[0]]
        if not ds0:
            raise ValidationError(
                "no untwisted odd block I_(2a0+1)",
                code="missing_odd_block",
                clause="the odd rank summand I_(2a0+1) must always be present",
            )
        if len(ds0) > 1:
            raise ValidationError(
                f"untwisted blocks {ds0}: exactly one block I_(2a0+1) is allowed",
                code="outside_shape",
                clause="the untwisted part is the single odd summand I_(2a0+1)",
            )
    for eta, ds in shapes.items():
        if not ds or (odd and eta == ETA[0]):
            continue
        if len(ds) == 1:
            raise ValidationError(
                f"lone odd block I_{ds[0]}({eta}); it must come with a companion line {eta}",
                code="parity_violation",
                clause="blocks at eta_j have the form I_(2a_j+1)(eta_j) + eta_j",
            )
        if len(ds) != 2 or ds[0] != 1:
            raise ValidationError(
                f"blocks {ds} at {eta} are outside the allowed shape I_(2a+1)(eta) + eta",
                code="outside_shape",
                clause="blocks at eta_j have the form I_(2a_j+1)(eta_j) + eta_j",
            )
    return v.rank // 2


# --- adjoint bundles -------------------------------------------------------

@dataclass(frozen=True)
class AdjointShape:
    unipotent_blocks: tuple[int, ...]
    line_summands: tuple[EPoint, ...] = field(default=())

    @property
    def rank(self) -> int:
        return sum(self.unipotent_blocks) + len(self.line_summands)


def split_adjoint(mu: ELambdaPoint) -> AdjointShape:
    """ad xi_0 = O^r + sum over roots of lambda_{alpha(mu)}."""
    return AdjointShape((1,) * mu.system.rank, tuple(sorted(root_values(mu))))


def regular_adjoint_blocks(mu: ELambdaPoint) -> AdjointShape:
    """Unipotent blocks I_(2d-1) of the regular representative's adjoint bundle."""
    system = mu.system
    report = classify_indices(system, vanishing_indices(mu))
    blocks = []
    for comp in report.components:
        blocks.extend(2 * d - 1 for d in casimir_weights(build_root_system(comp.kind, comp.rank)))
    blocks.extend([1] * (system.rank - report.total_rank))
    return AdjointShape(tuple(sorted(blocks)))


# --- from mu to bundles ----------------------------------------------------

def _lift_a(mu: ELambdaPoint) -> list[EPoint]:
    """e_1..e_n with sum zero, from coroot coordinates (alpha_i^vee = e_i - e_(i+1))."""
    c = list(mu.coords)
    return [c[0]] + [c[i] - c[i - 1] for i in range(1, len(c))] + [-c[-1]]


def _lift_c(mu: ELambdaPoint) -> list[EPoint]:
    """e_1..e_n from C_n coroot coordinates (alpha_i^vee = e_i - e_(i+1), alpha_n^vee = e_n)."""
    c = list(mu.coords)
    return [c[0]] + [c[i] - c[i - 1] for i in range(1, len(c))]


def lifted_coordinates(mu: ELambdaPoint) -> list[EPoint]:
    kind = mu.system.kind
    if kind == "A":
        return _lift_a(mu)
    if kind == "C":
        return _lift_c(mu)
    raise SystemMismatch(f"no epsilon model implemented for {mu.system.name}")


def sl_class_from_mu(mu: ELambdaPoint) -> BundleDecomp:
    """Regular SL(n) bundle S-equivalent to the split bundle of mu (type A_(n-1))."""
    if mu.system.kind != "A":
        raise SystemMismatch(f"sl_class_from_mu needs type A, got {mu.system.name}")
    counts = Counter(_lift_a(mu))
    summands = tuple(AtiyahSummand(m, lam) for lam, m in counts.items())
    return BundleDecomp("SL", summands, mu.system.rank + 1)


def sp_class_from_mu(mu: ELambdaPoint) -> BundleDecomp:
    """Regular Sp(2n) bundle S-equivalent to the split bundle of mu (type C_n)."""
    if mu.system.kind != "C":
        raise SystemMismatch(f"sp_class_from_mu needs type C, got {mu.system.name}")
    counts: Counter[EPoint] = Counter()
    for e in _lift_c(mu):
        counts[e if e.is_two_torsion else min(e, -e)] += 1
    summands = []
    for lam, m in counts.items():
        if lam.is_two_torsion:
            summands.append(AtiyahSummand(2 * m, lam))
        else:
            summands += [AtiyahSummand(m, lam), AtiyahSummand(m, -lam)]
    return BundleDecomp("Sp", tuple(summands), mu.system.rank)


# --- symbolic bundles and Riemann-Roch ------------------------------------

@dataclass(frozen=True)
class BundleExpr:
    """Formal expression over stable and semistable building blocks.

    ``op`` is one of ``W`` (stable W_d, det O(p0)), ``O`` (line bundle O(k p0)),
    ``ss`` (a semistable bundle of given rank and degree, e.g. Q4), ``dual``,
    ``tensor``, ``sym2``, ``wedge2``, ``sum``.
    """

    op: str
    args: tuple = ()
    rank_: int = 0
    degree_: int = 0
    label: str = ""

    # constructors
    @staticmethod
    def W(d: int) -> BundleExpr:
        if d < 1:
            raise ValueError("W_d needs d >= 1")
        return BundleExpr("W", (), d, 1, f"W_{d}")

    @staticmethod
    def line(k: int = 0) -> BundleExpr:
        return BundleExpr("O", (), 1, k, f"O({k}p0)")

    @staticmethod
    def semistable(rank: int, degree: int, label: str) -> BundleExpr:
        return BundleExpr("ss", (), rank, degree, label)

    def dual(self) -> BundleExpr:
        return BundleExpr("dual", (self,))

    def __matmul__(self, other: BundleExpr) -> BundleExpr:
        return BundleExpr("tensor", (self, other))

    def __add__(self, other: BundleExpr) -> BundleExpr:
        return BundleExpr("sum", (self, other))

    def sym2(self) -> BundleExpr:
        return BundleExpr("sym2", (self,))

    def wedge2(self) -> BundleExpr:
        return BundleExpr("wedge2", (self,))

    def __str__(self) -> str:
        if self.op in ("W", "O", "ss"):
            return self.label
        if self.op == "dual":
            return f"({self.args[0]})*"
        if self.op == "tensor":
            return f"({self.args[0]} (x) {self.args[1]})"
        if self.op == "sum":
            return f"({self.args[0]} + {self.args[1]})"
        return f"{'Sym2' if self.op == 'sym2' else 'Wedge2'}({self.args[0]})"

    def constituents(self) -> list[tuple[int, int]]:
        """Semistable pieces (rank, degree) whose direct sum is this bundle."""
        if self.op in ("W", "O", "ss"):
            return [(self.rank_, self.degree_)]
        parts = [a.constituents() for a in self.args]
        if self.op == "dual":
            return [(r, -d) for r, d in parts[0]]
        if self.op == "sum":
            return parts[0] + parts[1]
        if self.op == "tensor":
            return [(r1 * r2, r1 * d2 + r2 * d1) for r1, d1 in parts[0] for r2, d2 in parts[1]]
        pieces = parts[0]
        out = []
        for k, (r, d) in enumerate(pieces):
            if self.op == "sym2":
                out.append((r * (r + 1) // 2, (r + 1) * d))
            elif r > 1:
                out.append((r * (r - 1) // 2, (r - 1) * d))
            for r2, d2 in pieces[k + 1:]:
                out.append((r * r2, r * d2 + r2 * d))
        return out

    @property
    def rank(self) -> int:
        return sum(r for r, _ in self.constituents())

    @property
    def degree(self) -> int:
        return sum(d for _, d in self.constituents())


Q4 = BundleExpr.semistable(4, 0, "Q4")  # O + eta_1 + eta_2 + eta_3
Q3 = BundleExpr.semistable(3, 0, "Q3")  # eta_1 + eta_2 + eta_3


def bundle_calculus(expr: BundleExpr) -> dict:
    """rank, degree, h0, h1 of a bundle built from semistable pieces of nonzero degree."""
    pieces = expr.constituents()
    for r, d in pieces:
        if d == 0:
            raise DegreeZeroError(
                f"constituent of rank {r} has degree 0; degree-zero case requires explicit decomposition"
            )
    h0 = sum(max(d, 0) for _, d in pieces)
    h1 = sum(max(-d, 0) for _, d in pieces)
    rank = sum(r for r, _ in pieces)
    degree = sum(d for _, d in pieces)
    assert h0 - h1 == degree
    return {"rank": rank, "degree": degree, "h0": h0, "h1": h1}
