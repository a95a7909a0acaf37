"""Spectral-cover combinatorics for SL(n) and Sp(2n)."""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .bundles import BundleDecomp, sl_classify, sp_validate
from .elltorus import O, EPoint
from .errors import OrbitBoundExceeded
from .rootsys import RootSystem, fundamental_coweight, orbit_bound


@dataclass(frozen=True)
class SpectralFiber:
    points: tuple[tuple[EPoint, int], ...]
    degree: int
    involution_fixed: tuple[EPoint, ...] | None = None

    @property
    def multiset(self) -> Counter:
        return Counter({p: m for p, m in self.points})

    def involution(self) -> SpectralFiber:
        """Image under p -> -p."""
        pts = Counter()
        for p, m in self.points:
            pts[-p] += m
        return SpectralFiber(_ordered(pts), self.degree, self.involution_fixed)

    def to_json(self) -> dict:
        out = {
            "degree": self.degree,
            "points": [{"e": p.to_strings(), "mult": m} for p, m in self.points],
        }
        if self.involution_fixed is not None:
            out["involution_fixed"] = [p.to_strings() for p in self.involution_fixed]
        return out


def _ordered(counts: Counter) -> tuple[tuple[EPoint, int], ...]:
    return tuple(sorted(counts.items()))


def sl_spectral_fiber(v: BundleDecomp) -> SpectralFiber:
    """Fiber of the degree-n cover over the class of ``v``: the divisor sum d_i (lambda_i)."""
    sl_classify(v)
    pts: Counter[EPoint] = Counter()
    for s in v.summands:
        pts[s.lam] += s.d
    total = O
    for p, m in pts.items():
        total = total + m * p
    assert total.is_zero
    return SpectralFiber(_ordered(pts), v.rank)


def sp_spectral_fiber(v: BundleDecomp) -> SpectralFiber:
    """Fiber of the degree-2n cover; closed under p -> -p, fixed points two-torsion."""
    sp_validate(v)
    pts: Counter[EPoint] = Counter()
    for s in v.summands:
        pts[s.lam] += s.d
    fiber = SpectralFiber(_ordered(pts), v.rank)
    fixed = tuple(p for p, _ in fiber.points if -p == p)
    assert fiber.involution().points == fiber.points
    assert all(p.is_two_torsion for p in fixed)
    return SpectralFiber(fiber.points, fiber.degree, fixed)


def cover_index(system: RootSystem, vector: Sequence[int | Fraction], bound: int | None = None) -> int:
    """[W : W_0] for W_0 the stabiliser of ``vector`` (coroot coordinates): its orbit size."""
    bound = orbit_bound() if bound is None else bound
    vec = tuple(Fraction(x) for x in vector)
    if len(vec) != system.rank:
        raise ValueError(f"{system.name} needs a vector of length {system.rank}")
    scale = math.lcm(*(x.denominator for x in vec))
    start = tuple(int(x * scale) for x in vec)
    mats = system.reflection_matrices
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for m in mats:
            w = tuple(sum(a * b for a, b in zip(row, v)) for row in m)
            if w not in seen:
                seen.add(w)
                if len(seen) > bound:
                    raise OrbitBoundExceeded(f"orbit of {vector} in {system.name} exceeds {bound}")
                queue.append(w)
    return len(seen)


def standard_cover_vector(system: RootSystem) -> tuple[Fraction, ...]:
    """Vector whose stabiliser gives the standard cover: e_n for A_(n-1), e_1 for C_n."""
    if system.kind == "A":
        return fundamental_coweight(system, system.rank - 1)
    if system.kind == "C":
        return (Fraction(1),) * system.rank  # e_1 = alpha_1^vee + ... + alpha_n^vee
    raise ValueError(f"no standard spectral cover for {system.name}")
