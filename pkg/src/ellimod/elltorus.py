"""Torsion points of E and points of E (x) Lambda with the Weyl action.

A point of E = C/(Z + tau Z) is stored as a pair of rationals ``(a, b)``
reduced to [0, 1), meaning ``a + b tau``.  Only the group structure of
Pic^0(E) = E enters, so torsion points suffice and everything is exact.

Canonical forms
---------------
The representative of a W-orbit is its lexicographic minimum, comparing the
flattened tuple ``(a_1, b_1, a_2, b_2, ..., a_r, b_r)`` of simple-coroot
coordinates.  It is found by a search along the chain of parabolic
subgroups ``W = W_0 > W_1 > ... > W_r = 1`` where ``W_l`` is generated by the
simple reflections ``s_l, ..., s_{r-1}``.  Coordinate ``l`` of ``w mu`` is
``<w^{-1} omega_l, mu>`` and ``W_{l+1}`` is the stabiliser of ``omega_l`` in
``W_l``, so at level ``l`` it is enough to scan the ``W_l``-orbit of the
fundamental weight ``omega_l``.  Ties are followed exhaustively, with path
multiplicities, which also yields the stabiliser order.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from collections import deque
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError, RootNotInSystem, SystemMismatch
from .rootsys import RootSystem, WeylElement, build_root_system

ZERO = Fraction(0)
HALF = Fraction(1, 2)


@dataclass(frozen=True, order=True)
class EPoint:
    """The point a + b*tau of E, with a, b rational and reduced mod 1."""

    a: Fraction = ZERO
    b: Fraction = ZERO

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", Fraction(self.a) % 1)
        object.__setattr__(self, "b", Fraction(self.b) % 1)

    def __add__(self, other: EPoint) -> EPoint:
        return EPoint(self.a + other.a, self.b + other.b)

    def __sub__(self, other: EPoint) -> EPoint:
        return EPoint(self.a - other.a, self.b - other.b)

    def __neg__(self) -> EPoint:
        return EPoint(-self.a, -self.b)

    def __mul__(self, k: int) -> EPoint:
        return EPoint(k * self.a, k * self.b)

    __rmul__ = __mul__

    @property
    def order(self) -> int:
        return math.lcm(self.a.denominator, self.b.denominator)

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def is_two_torsion(self) -> bool:
        return self.order <= 2

    def to_strings(self) -> list[str]:
        return [str(self.a), str(self.b)]

    def __str__(self) -> str:
        return f"{self.a},{self.b}"

    def __repr__(self) -> str:
        return f"EPoint({self.a}, {self.b})"

    @classmethod
    def parse(cls, text: str) -> EPoint:
        parts = [p.strip() for p in text.split(",")]
        if len(parts) == 1:
            parts.append("0")
        if len(parts) != 2:
            raise ParseError(f"cannot parse point {text!r}: expected 'a,b'")
        try:
            return cls(Fraction(parts[0]), Fraction(parts[1]))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"cannot parse point {text!r}: {exc}") from None

    @classmethod
    def from_strings(cls, pair: Sequence[str]) -> EPoint:
        if len(pair) != 2:
            raise ParseError(f"point must be a pair of rational strings, got {pair!r}")
        try:
            return cls(Fraction(pair[0]), Fraction(pair[1]))
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise ParseError(f"bad rational in {pair!r}: {exc}") from None


O = EPoint()
#: eta_0 = O and the three points of exact order two
ETA = (EPoint(0, 0), EPoint(HALF, 0), EPoint(0, HALF), EPoint(HALF, HALF))


def add(p: EPoint, q: EPoint) -> EPoint:
    return p + q


def neg(p: EPoint) -> EPoint:
    return -p


def int_scale(k: int, p: EPoint) -> EPoint:
    return k * p


@dataclass(frozen=True)
class ELambdaPoint:
    """mu = sum_i coords[i] (x) alpha_i^vee in E (x) Lambda."""

    system: RootSystem
    coords: tuple[EPoint, ...]

    def __post_init__(self) -> None:
        coords = tuple(self.coords)
        if len(coords) != self.system.rank:
            raise SystemMismatch(f"{self.system.name} needs {self.system.rank} coordinates, got {len(coords)}")
        object.__setattr__(self, "coords", coords)

    def flat(self) -> tuple[Fraction, ...]:
        return tuple(x for p in self.coords for x in (p.a, p.b))

    def __str__(self) -> str:
        return format_mu(self)

    @property
    def denominator(self) -> int:
        return math.lcm(*(x.denominator for x in self.flat()))

    def as_int_array(self) -> tuple[int, np.ndarray]:
        """(N, array of shape (r, 2)) with coords = array / N."""
        n = self.denominator
        vals = [[int(p.a * n), int(p.b * n)] for p in self.coords]
        return n, np.array(vals, dtype=_dtype_for(self.system, n))

    @classmethod
    def from_int_array(cls, system: RootSystem, n: int, arr: np.ndarray) -> ELambdaPoint:
        return cls(system, tuple(EPoint(Fraction(int(x), n), Fraction(int(y), n)) for x, y in arr))

    @classmethod
    def zero(cls, system: RootSystem) -> ELambdaPoint:
        return cls(system, (O,) * system.rank)


def _dtype_for(system: RootSystem, n: int):
    # entries of Weyl matrices and orbit weights are bounded by the largest root coefficient
    scale = 4 * system.rank * (max(max(b) for b in system.all_roots) + 2) ** 2
    return np.int64 if n * scale < 2**62 else object


def parse_mu(system: RootSystem, text: str) -> ELambdaPoint:
    """Parse ``"a/b,c/d;..."`` (one 'a,b' pair per simple coroot)."""
    parts = [p for p in text.strip().split(";")]
    if len(parts) != system.rank:
        raise ParseError(f"{system.name} needs {system.rank} coordinates separated by ';', got {len(parts)}")
    return ELambdaPoint(system, tuple(EPoint.parse(p) for p in parts))


def format_mu(mu: ELambdaPoint) -> str:
    return ";".join(str(p) for p in mu.coords)


# --- evaluation on roots ---------------------------------------------------

def root_value(mu: ELambdaPoint, root: Sequence[int]) -> EPoint:
    """alpha(mu) = sum_i <alpha, alpha_i^vee> mu_i."""
    system = mu.system
    root = tuple(root)
    if root not in system.root_index:
        raise RootNotInSystem(f"{root} is not a root of {system.name}")
    a = b = ZERO
    for i, c in enumerate(mu.coords):
        k = system.pair(root, i)
        if k:
            a += k * c.a
            b += k * c.b
    return EPoint(a, b)


def _root_values_int(mu: ELambdaPoint) -> tuple[int, np.ndarray]:
    n, arr = mu.as_int_array()
    return n, (mu.system.pairing_matrix.astype(arr.dtype) @ arr) % n


def root_values(mu: ELambdaPoint) -> list[EPoint]:
    """alpha(mu) for every root, in the order of ``system.all_roots``."""
    n, vals = _root_values_int(mu)
    return [EPoint(Fraction(int(x), n), Fraction(int(y), n)) for x, y in vals]


def vanishing_indices(mu: ELambdaPoint) -> frozenset[int]:
    _, vals = _root_values_int(mu)
    return frozenset(np.flatnonzero((vals == 0).all(axis=1)).tolist())


def vanishing_roots(mu: ELambdaPoint) -> list[tuple[int, ...]]:
    """All roots alpha with alpha(mu) = 0."""
    roots = mu.system.all_roots
    return [roots[k] for k in sorted(vanishing_indices(mu))]


def is_regular_class(mu: ELambdaPoint) -> bool:
    return not vanishing_indices(mu)


def aut_dim_split(mu: ELambdaPoint) -> int:
    """h^0(E; ad xi_0) of the split representative: r + #{alpha : alpha(mu) = 0}."""
    return mu.system.rank + len(vanishing_indices(mu))


def fingerprint(mu: ELambdaPoint) -> tuple[EPoint, ...]:
    """The W-invariant multiset {alpha(mu)}, sorted.  Not a complete invariant."""
    return tuple(sorted(root_values(mu)))


# --- Weyl action -----------------------------------------------------------

def weyl_apply(w: WeylElement, mu: ELambdaPoint) -> ELambdaPoint:
    if len(w.matrix) != mu.system.rank:
        raise SystemMismatch("Weyl element and point belong to different systems")
    coords = []
    for row in w.matrix:
        p = O
        for k, c in zip(row, mu.coords):
            if k:
                p = p + k * c
        coords.append(p)
    return ELambdaPoint(mu.system, tuple(coords))


@dataclass(frozen=True)
class OrbitCanonicalForm:
    representative: ELambdaPoint
    stabilizer_order: int

    @property
    def orbit_size(self) -> int:
        return self.representative.system.weyl_order // self.stabilizer_order


@lru_cache(maxsize=None)
def _coset_chain(kind: str, rank: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Per level l: (orbit weights of omega_l under W_l, matching coroot matrices x with x^{-1} omega_l = weight)."""
    system = build_root_system(kind, rank)
    r, cartan = system.rank, system.cartan
    refl = [np.array(m, dtype=np.int64) for m in system.reflection_matrices]
    chain = []
    for level in range(r):
        start = tuple(int(k == level) for k in range(r))
        weights = {start: np.eye(r, dtype=np.int64)}
        queue = deque([start])
        while queue:
            lam = queue.popleft()
            x = weights[lam]
            for j in range(level, r):
                if lam[j]:
                    new = tuple(lam[k] - lam[j] * cartan[k][j] for k in range(r))
                    if new not in weights:
                        weights[new] = x @ refl[j]
                        queue.append(new)
        keys = list(weights)
        w_arr = np.array(keys, dtype=np.int64)
        x_arr = np.array([weights[k] for k in keys], dtype=np.int64)
        w_arr.setflags(write=False)
        x_arr.setflags(write=False)
        chain.append((w_arr, x_arr))
    return tuple(chain)


def _lexmin_rows(vals: np.ndarray) -> tuple[tuple[int, int], np.ndarray]:
    amin = vals[:, 0].min()
    mask = vals[:, 0] == amin
    bmin = vals[mask, 1].min()
    idx = np.flatnonzero(mask & (vals[:, 1] == bmin))
    return (int(amin), int(bmin)), idx


def canonicalize(mu: ELambdaPoint) -> OrbitCanonicalForm:
    """Lexicographically minimal point of the W-orbit of ``mu`` and its stabiliser order."""
    system = mu.system
    n, vec = mu.as_int_array()
    dtype = vec.dtype
    branches: dict[bytes, tuple[np.ndarray, int]] = {vec.tobytes(): (vec, 1)}
    for level, (weights, mats) in enumerate(_coset_chain(system.kind, system.rank)):
        w = weights.astype(dtype)
        x = mats.astype(dtype)
        best = None
        candidates = []
        for p, count in branches.values():
            vals = (w @ p) % n
            key, idx = _lexmin_rows(vals)
            if best is None or key < best:
                best, candidates = key, [(p, count, idx)]
            elif key == best:
                candidates.append((p, count, idx))
        new: dict[bytes, tuple[np.ndarray, int]] = {}
        for p, count, idx in candidates:
            for q in (x[idx] @ p) % n:
                k = q.tobytes()
                if k in new:
                    new[k] = (new[k][0], new[k][1] + count)
                else:
                    new[k] = (q, count)
        branches = new
    assert len(branches) == 1
    (rep, stab), = branches.values()
    return OrbitCanonicalForm(ELambdaPoint.from_int_array(system, n, rep), stab)


def orbit_equal(mu: ELambdaPoint, nu: ELambdaPoint, heuristic: bool = False) -> bool:
    """Do mu and nu lie in the same W-orbit?

    With ``heuristic=True`` only the root-value fingerprints are compared; a
    match is then evidence, not proof.
    """
    if mu.system != nu.system:
        raise SystemMismatch("points belong to different root systems")
    if fingerprint(mu) != fingerprint(nu):
        return False
    if heuristic:
        return True
    return canonicalize(mu).representative == canonicalize(nu).representative


# --- brute force (used as an independent check) -----------------------------

def orbit_scan(mu: ELambdaPoint, matrices: np.ndarray) -> OrbitCanonicalForm:
    """Lex-minimum and stabiliser by applying every group element in ``matrices``."""
    n, vec = mu.as_int_array()
    imgs = (matrices.astype(vec.dtype) @ vec) % n
    flat = imgs.reshape(len(imgs), -1)
    order = np.lexsort(flat.T[::-1])
    best = flat[order[0]]
    stab = int((flat == best).all(axis=1).sum())
    return OrbitCanonicalForm(ELambdaPoint.from_int_array(mu.system, n, best.reshape(-1, 2)), stab)


def orbit_points(mu: ELambdaPoint, matrices: np.ndarray) -> set[tuple[Fraction, ...]]:
    n, vec = mu.as_int_array()
    imgs = (matrices.astype(vec.dtype) @ vec) % n
    return {tuple(Fraction(int(v), n) for v in row.ravel()) for row in imgs}


# --- sampling --------------------------------------------------------------

SMALL_DENOMINATORS = (1, 2, 3, 4, 5, 6)
LARGE_PRIMES = (10007, 10009, 10037, 10039, 10061, 10067, 10069, 10079, 10091, 10093, 10099, 10103)


def random_torsion_point(system: RootSystem, rng: random.Random, denominators: Iterable[int] = SMALL_DENOMINATORS) -> ELambdaPoint:
    """Random point whose coordinates have small denominators (so roots often vanish)."""
    dens = tuple(denominators)
    coords = []
    for _ in range(system.rank):
        q = rng.choice(dens)
        coords.append(EPoint(Fraction(rng.randrange(q), q), Fraction(rng.randrange(q), q) if rng.random() < 0.5 else 0))
    return ELambdaPoint(system, tuple(coords))


def generic_point(system: RootSystem, rng: random.Random) -> ELambdaPoint:
    """Point with large prime-order coordinates; no root vanishes on it in practice."""
    primes = rng.sample(LARGE_PRIMES, 2)
    coords = tuple(
        EPoint(Fraction(rng.randrange(1, primes[0]), primes[0]), Fraction(rng.randrange(1, primes[1]), primes[1]))
        for _ in range(system.rank)
    )
    return ELambdaPoint(system, coords)
