"""Simple root systems, their Weyl groups and numerical invariants.

Conventions
-----------
* Nodes are numbered as in Bourbaki (1-based in user facing output,
  0-based internally).
* ``cartan[i][j] = <alpha_j, alpha_i^vee> = 2 (alpha_i, alpha_j) / (alpha_i, alpha_i)``.
* Roots are integer coefficient vectors over the simple roots, coroots are
  integer coefficient vectors over the simple coroots.  The pairing of a root
  ``beta`` with the simple coroot ``alpha_i^vee`` is ``sum_j beta_j cartan[i][j]``.
* The Weyl group acts on the coroot lattice; ``WeylElement.matrix`` is the
  integer matrix of that action in the simple-coroot basis.
"""

from __future__ import annotations

import math
import os
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import InvalidRootSystem, NotClosed, NotSimplyLaced, OrbitBoundExceeded

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]

KINDS = ("A", "B", "C", "D", "E", "F", "G")
DEFAULT_ORBIT_BOUND = 10**6


def orbit_bound() -> int:
    """Largest orbit / group size the library will enumerate."""
    value = os.environ.get("ELLIMOD_ORBIT_BOUND")
    return int(value) if value else DEFAULT_ORBIT_BOUND


def _check_type(kind: str, rank: int) -> None:
    ok = {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 2,
        "D": rank >= 3,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }.get(kind, False)
    if not ok:
        raise InvalidRootSystem(f"no simple root system of type {kind}{rank}")


def _dynkin(kind: str, rank: int) -> tuple[list[int], list[tuple[int, int]]]:
    """Squared lengths of the simple roots and the edges of the Dynkin diagram."""
    path = [(i, i + 1) for i in range(rank - 1)]
    if kind == "A":
        return [2] * rank, path
    if kind == "B":
        return [4] * (rank - 1) + [2], path
    if kind == "C":
        return [2] * (rank - 1) + [4], path
    if kind == "D":
        return [2] * rank, path[:-1] + [(rank - 3, rank - 1)]
    if kind == "E":
        edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]
        return [2] * rank, [(i, j) for i, j in edges if j < rank]
    if kind == "F":
        return [4, 4, 2, 2], path
    if kind == "G":
        return [2, 6], path
    raise InvalidRootSystem(f"unknown kind {kind!r}")


def _det(matrix: Sequence[Sequence[int]]) -> Fraction:
    m = [[Fraction(x) for x in row] for row in matrix]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if m[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def _matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


# --- exact characteristic polynomial and cyclotomic factorisation -----------

def _charpoly(a: Sequence[Sequence[int]]) -> list[int]:
    """Characteristic polynomial det(xI - A), coefficients low to high (Faddeev-LeVerrier)."""
    n = len(a)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    m = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        m = _matmul(a, m)
        for i in range(n):
            m[i][i] += coeffs[n - k + 1]
        am = _matmul(a, m)
        tr = sum(am[i][i] for i in range(n))
        assert tr % k == 0
        coeffs[n - k] = -tr // k
    return coeffs


def _polydiv(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Division by a monic integer polynomial; returns (quotient, remainder)."""
    num = list(num)
    dn = len(den) - 1
    if len(num) - 1 < dn:
        return [0], num
    q = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        q[i - dn] = c
        if c:
            for j in range(dn + 1):
                num[i - dn + j] -= c * den[j]
    rem = num[:dn] or [0]
    return q, rem


@lru_cache(maxsize=None)
def _cyclotomic(k: int) -> tuple[int, ...]:
    poly = [-1] + [0] * (k - 1) + [1]
    for d in range(1, k):
        if k % d == 0:
            poly, rem = _polydiv(poly, list(_cyclotomic(d)))
            assert not any(rem)
    return tuple(poly)


def _exponents_from_coxeter(cartan: Matrix) -> tuple[int, tuple[int, ...]]:
    """Coxeter number and exponents from the eigenvalues of a Coxeter element."""
    r = len(cartan)
    c = _identity(r)
    for j in range(r):
        c = _matmul(c, _reflection_matrix(cartan, j))
    h, power = 1, [row[:] for row in c]
    ident = _identity(r)
    while power != ident:
        power = _matmul(power, c)
        h += 1
    poly = _charpoly(c)
    exps: list[int] = []
    for k in sorted(d for d in range(2, h + 1) if h % d == 0):
        phi = list(_cyclotomic(k))
        while len(poly) >= len(phi):
            q, rem = _polydiv(poly, phi)
            if any(rem):
                break
            poly = q
            exps.extend(j * h // k for j in range(1, k) if math.gcd(j, k) == 1)
    if poly != [1]:
        raise AssertionError("Coxeter element eigenvalues are not all h-th roots of unity")
    return h, tuple(sorted(exps))


def _reflection_matrix(cartan: Matrix, j: int) -> list[list[int]]:
    """Matrix of s_j on coroot coordinates."""
    r = len(cartan)
    m = _identity(r)
    for i in range(r):
        m[j][i] -= cartan[i][j]
    return m


# --- Weyl group order via parabolic orbit recursion ------------------------

def _components(cartan: Matrix, nodes: Iterable[int]) -> list[list[int]]:
    nodes = list(nodes)
    seen: set[int] = set()
    comps = []
    for start in nodes:
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in nodes:
                if j not in seen and cartan[i][j] != 0:
                    seen.add(j)
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def _weight_orbit_size(cartan: Matrix, nodes: list[int], i: int, cap: int) -> int:
    """Size of the orbit of the fundamental weight omega_i under <s_j : j in nodes>."""
    start = tuple(int(k == i) for k in range(len(cartan)))
    seen = {start}
    queue = deque([start])
    while queue:
        lam = queue.popleft()
        for j in nodes:
            if lam[j]:
                new = tuple(lam[k] - lam[j] * cartan[k][j] for k in range(len(cartan)))
                if new not in seen:
                    seen.add(new)
                    if len(seen) > cap:
                        return cap + 1
                    queue.append(new)
    return len(seen)


def _weyl_order(cartan: Matrix, nodes: Sequence[int]) -> int:
    order = 1
    for comp in _components(cartan, nodes):
        if len(comp) == 1:
            order *= 2
            continue
        leaves = [i for i in comp if sum(1 for j in comp if j != i and cartan[i][j]) == 1]
        best_node, best = None, None
        for i in leaves:
            size = _weight_orbit_size(cartan, comp, i, best if best else 10**8)
            if best is None or size < best:
                best_node, best = i, size
        rest = [j for j in comp if j != best_node]
        order *= best * _weyl_order(cartan, rest)
    return order


# --- data types ------------------------------------------------------------

@dataclass(frozen=True)
class RootSystem:
    """Immutable root-system datum of a simple type."""

    kind: str
    rank: int
    cartan: Matrix
    lengths: Vector
    gram: Matrix
    all_roots: tuple[Vector, ...]
    coroot_map: tuple[Vector, ...]
    marks: Vector
    comarks: Vector
    exponents: Vector
    coxeter_number: int
    weyl_order: int
    cartan_det: int

    @property
    def name(self) -> str:
        return f"{self.kind}{self.rank}"

    @property
    def simple_roots(self) -> tuple[int, ...]:
        return tuple(range(1, self.rank + 1))

    @property
    def dim(self) -> int:
        return self.rank + len(self.all_roots)

    @property
    def is_simply_laced(self) -> bool:
        return self.kind in "ADE"

    @cached_property
    def positive_roots(self) -> tuple[Vector, ...]:
        return tuple(b for b in self.all_roots if sum(b) > 0)

    @cached_property
    def root_index(self) -> dict[Vector, int]:
        return {b: k for k, b in enumerate(self.all_roots)}

    @cached_property
    def highest_root(self) -> Vector:
        return self.marks

    @cached_property
    def pairing_matrix(self) -> np.ndarray:
        """``P[k, i] = <root_k, alpha_i^vee>``."""
        p = np.array(self.all_roots, dtype=np.int64) @ np.array(self.cartan, dtype=np.int64).T
        p.setflags(write=False)
        return p

    @cached_property
    def reflection_matrices(self) -> tuple[Matrix, ...]:
        return tuple(
            tuple(tuple(row) for row in _reflection_matrix(self.cartan, j)) for j in range(self.rank)
        )

    def pair(self, root: Sequence[int], i: int) -> int:
        """<root, alpha_i^vee>."""
        return sum(b * self.cartan[i][j] for j, b in enumerate(root))

    def inner(self, x: Sequence[int], y: Sequence[int]) -> int:
        """Invariant form on root coordinates, normalised so short roots of ADE have length 2."""
        return sum(x[i] * self.gram[i][j] * y[j] for i in range(self.rank) for j in range(self.rank) if x[i] and y[j])

    def reflect_root(self, j: int, root: Sequence[int]) -> Vector:
        c = self.pair(root, j)
        return tuple(b - c if k == j else b for k, b in enumerate(root))

    def __repr__(self) -> str:
        return f"RootSystem({self.name})"


class WeylElement(NamedTuple):
    """A Weyl group element: a word in simple reflections and its coroot matrix."""

    word: tuple[int, ...]
    matrix: Matrix

    def apply_to_root(self, system: RootSystem, root: Sequence[int]) -> Vector:
        out = tuple(root)
        for j in reversed(self.word):
            out = system.reflect_root(j, out)
        return out


class Component(NamedTuple):
    kind: str
    rank: int
    basis: tuple[int, ...]  # indices into all_roots


@dataclass(frozen=True)
class SubsystemReport:
    components: tuple[Component, ...]
    total_rank: int
    num_roots: int


# --- construction ----------------------------------------------------------

def _close_roots(cartan: Matrix) -> tuple[Vector, ...]:
    r = len(cartan)
    simple = [tuple(int(k == i) for k in range(r)) for i in range(r)]
    seen = set(simple)
    queue = deque(simple)
    while queue:
        b = queue.popleft()
        for j in range(r):
            c = sum(b[k] * cartan[j][k] for k in range(r))
            if c:
                new = tuple(x - c if k == j else x for k, x in enumerate(b))
                if new not in seen:
                    seen.add(new)
                    queue.append(new)
    return tuple(sorted(seen, key=lambda v: (-sum(v), tuple(-x for x in v))))


@lru_cache(maxsize=None)
def build_root_system(kind: str, rank: int) -> RootSystem:
    """Construct the root system of type ``kind``/``rank`` (Bourbaki numbering)."""
    kind = str(kind).upper()
    _check_type(kind, rank)
    lengths, edges = _dynkin(kind, rank)
    gram = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        gram[i][i] = lengths[i]
    for i, j in edges:
        gram[i][j] = gram[j][i] = -max(lengths[i], lengths[j]) // 2
    cartan = tuple(tuple(2 * gram[i][j] // lengths[i] for j in range(rank)) for i in range(rank))

    roots = _close_roots(cartan)

    def norm(b: Vector) -> int:
        return sum(b[i] * gram[i][j] * b[j] for i in range(rank) for j in range(rank))

    coroots = []
    for b in roots:
        nb = norm(b)
        cv = []
        for j in range(rank):
            num = b[j] * lengths[j]
            assert num % nb == 0
            cv.append(num // nb)
        coroots.append(tuple(cv))

    positive = [b for b in roots if sum(b) > 0]
    highest = max(positive, key=sum)
    assert all(all(h >= x for h, x in zip(highest, b)) for b in positive)
    hn = norm(highest)
    comarks = tuple(highest[j] * lengths[j] // hn for j in range(rank))

    h, exps = _exponents_from_coxeter(cartan)
    det = _det(cartan)
    assert det.denominator == 1

    return RootSystem(
        kind=kind,
        rank=rank,
        cartan=cartan,
        lengths=tuple(lengths),
        gram=tuple(tuple(row) for row in gram),
        all_roots=roots,
        coroot_map=tuple(coroots),
        marks=tuple(highest),
        comarks=comarks,
        exponents=exps,
        coxeter_number=h,
        weyl_order=_weyl_order(cartan, range(rank)),
        cartan_det=int(det),
    )


def parse_group(label: str) -> RootSystem:
    """Parse labels such as ``"E8"`` or ``"a4"``."""
    label = label.strip()
    if len(label) < 2 or not label[1:].isdigit():
        raise InvalidRootSystem(f"cannot parse group label {label!r}")
    return build_root_system(label[0].upper(), int(label[1:]))


# --- invariants ------------------------------------------------------------

def wp_weights(system: RootSystem) -> tuple[int, ...]:
    """Weights (g_0, g_1, ..., g_r) of the weighted projective moduli space."""
    return (1,) + system.comarks


def casimir_weights(system: RootSystem) -> tuple[int, ...]:
    """Degrees of the basic Weyl invariants, d_i = m_i + 1, ascending."""
    return tuple(m + 1 for m in system.exponents)


def verify_weyl_identity(system: RootSystem) -> bool:
    """Check |W| = r! * prod(g_i) * det(Cartan); only defined for simply-laced types."""
    if not system.is_simply_laced:
        raise NotSimplyLaced(f"{system.name} is not simply laced; the identity is only asserted for A, D, E")
    return system.weyl_order == math.factorial(system.rank) * math.prod(system.comarks) * system.cartan_det


def fundamental_coweight(system: RootSystem, i: int) -> tuple[Fraction, ...]:
    """Coroot coordinates of omega_i^vee (0-based ``i``), i.e. solve Cartan^T c = e_i."""
    r = system.rank
    m = [[Fraction(system.cartan[col][row]) for col in range(r)] + [Fraction(int(row == i))] for row in range(r)]
    for c in range(r):
        p = next(k for k in range(c, r) if m[k][c] != 0)
        m[c], m[p] = m[p], m[c]
        m[c] = [x / m[c][c] for x in m[c]]
        for k in range(r):
            if k != c and m[k][c]:
                f = m[k][c]
                m[k] = [a - f * b for a, b in zip(m[k], m[c])]
    return tuple(row[r] for row in m)


# --- Weyl group ------------------------------------------------------------

def weyl_element(system: RootSystem, word: Sequence[int]) -> WeylElement:
    m = _identity(system.rank)
    for j in word:
        if not 0 <= j < system.rank:
            raise InvalidRootSystem(f"reflection index {j} out of range for {system.name}")
        m = _matmul(m, system.reflection_matrices[j])
    return WeylElement(tuple(word), tuple(tuple(row) for row in m))


def random_weyl_element(system: RootSystem, rng: random.Random, length: int | None = None) -> WeylElement:
    if length is None:
        length = rng.randint(0, 2 * len(system.positive_roots) + 1)
    return weyl_element(system, [rng.randrange(system.rank) for _ in range(length)])


def weyl_group_matrices(system: RootSystem, bound: int | None = None) -> np.ndarray:
    """All elements of W as an array of coroot matrices, shape (|W|, r, r)."""
    bound = orbit_bound() if bound is None else bound
    if system.weyl_order > bound:
        raise OrbitBoundExceeded(f"|W({system.name})| = {system.weyl_order} exceeds the orbit bound {bound}")
    r = system.rank
    gens = np.array(system.reflection_matrices, dtype=np.int64)
    ident = np.eye(r, dtype=np.int64)[None]
    seen = {ident[0].tobytes()}
    found = [ident]
    frontier = ident
    while len(frontier):
        new = np.concatenate([frontier @ g for g in gens])
        keep = []
        for k, m in enumerate(new):
            key = m.tobytes()
            if key not in seen:
                seen.add(key)
                keep.append(k)
        frontier = new[keep]
        if len(frontier):
            found.append(frontier)
    out = np.concatenate(found)
    assert len(out) == system.weyl_order
    return out


# --- subsystems ------------------------------------------------------------

def _isomorphic(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    """Is there a relabelling p with a[p(i)][p(j)] == b[i][j]?"""
    k = len(a)
    if len(b) != k:
        return False
    sig_a = [sorted(row) for row in a]
    sig_b = [sorted(row) for row in b]
    if sorted(map(tuple, sig_a)) != sorted(map(tuple, sig_b)):
        return False
    order, seen = [], set()
    for s in range(k):
        if s in seen:
            continue
        seen.add(s)
        queue = deque([s])
        while queue:
            i = queue.popleft()
            order.append(i)
            for j in range(k):
                if j not in seen and b[i][j]:
                    seen.add(j)
                    queue.append(j)
    assign: dict[int, int] = {}

    def search(pos: int) -> bool:
        if pos == k:
            return True
        i = order[pos]
        used = set(assign.values())
        for cand in range(k):
            if cand in used or sig_a[cand] != sig_b[i]:
                continue
            if all(a[cand][assign[j]] == b[i][j] and a[assign[j]][cand] == b[j][i] for j in assign):
                assign[i] = cand
                if search(pos + 1):
                    return True
                del assign[i]
        return False

    return search(0)


def identify_cartan(cartan: Sequence[Sequence[int]], ambient: RootSystem | None = None) -> tuple[str, int]:
    """Type (kind, rank) of a connected Cartan matrix."""
    k = len(cartan)
    if ambient is not None and ambient.rank == k and _isomorphic(ambient.cartan, cartan):
        return ambient.kind, k
    if k == 1:
        return "A", 1
    adj = [[j for j in range(k) if j != i and cartan[i][j]] for i in range(k)]
    mult = max(cartan[i][j] * cartan[j][i] for i in range(k) for j in adj[i])
    if mult == 3:
        guess = ("G", 2)
    elif mult == 2:
        i, j = next((i, j) for i in range(k) for j in adj[i] if cartan[i][j] == -2)  # i short, j long
        if k == 2:
            guess = (ambient.kind if ambient is not None and ambient.kind in "BC" else "B", 2)
        elif k == 4 and len(adj[i]) == 2 and len(adj[j]) == 2:
            guess = ("F", 4)
        elif len(adj[i]) == 1:
            guess = ("B", k)
        else:
            guess = ("C", k)
    else:
        branch = [i for i in range(k) if len(adj[i]) == 3]
        if not branch:
            guess = ("A", k)
        else:
            t = branch[0]
            arms = []
            for start in adj[t]:
                length, prev, cur = 1, t, start
                while True:
                    nxt = [x for x in adj[cur] if x != prev]
                    if not nxt:
                        break
                    prev, cur = cur, nxt[0]
                    length += 1
                arms.append(length)
            arms.sort()
            if arms[:2] == [1, 1]:
                guess = ("D", k)
            else:
                guess = ("E", k)
    try:
        ref = build_root_system(*guess)
    except InvalidRootSystem:
        raise InvalidRootSystem(f"Cartan matrix {cartan} is not of finite type") from None
    if not _isomorphic(ref.cartan, cartan):
        raise InvalidRootSystem(f"Cartan matrix {cartan} not recognised (guessed {guess[0]}{guess[1]})")
    return guess


@lru_cache(maxsize=65536)
def _classify_indices(kind: str, rank: int, indices: frozenset[int]) -> SubsystemReport:
    system = build_root_system(kind, rank)
    roots = system.all_roots
    index = system.root_index
    members = set(indices)
    for k in members:
        if index[tuple(-x for x in roots[k])] not in members:
            raise NotClosed("subset is not closed under negation")
    mlist = sorted(members)
    for a in range(len(mlist)):
        ra = roots[mlist[a]]
        for b in range(a + 1, len(mlist)):
            s = tuple(x + y for x, y in zip(ra, roots[mlist[b]]))
            k = index.get(s)
            if k is not None and k not in members:
                raise NotClosed(f"subset is not closed: {ra} + {roots[mlist[b]]} = {s} missing")
    pos = [k for k in mlist if sum(roots[k]) > 0]
    pos_set = {roots[k] for k in pos}
    basis = []
    for k in pos:
        b = roots[k]
        decomposable = any(
            tuple(x - y for x, y in zip(b, roots[m])) in pos_set for m in pos if m != k
        )
        if not decomposable:
            basis.append(k)
    c = [
        [2 * system.inner(roots[p], roots[q]) // system.inner(roots[p], roots[p]) for q in basis]
        for p in basis
    ]
    comps = []
    for comp in _components(c, range(len(basis))):
        sub = [[c[i][j] for j in comp] for i in comp]
        ckind, crank = identify_cartan(sub, system)
        comps.append(Component(ckind, crank, tuple(basis[i] for i in comp)))
    comps.sort(key=lambda x: x.basis)
    report = SubsystemReport(tuple(comps), len(basis), len(members))
    assert sum(len(build_root_system(x.kind, x.rank).all_roots) for x in comps) == report.num_roots
    return report


def classify_subsystem(system: RootSystem, roots: Iterable[Sequence[int]]) -> SubsystemReport:
    """Decompose a closed subset of roots into simple components."""
    index = system.root_index
    indices = set()
    for b in roots:
        k = index.get(tuple(b))
        if k is None:
            raise NotClosed(f"{tuple(b)} is not a root of {system.name}")
        indices.add(k)
    return _classify_indices(system.kind, system.rank, frozenset(indices))


def classify_indices(system: RootSystem, indices: Iterable[int]) -> SubsystemReport:
    return _classify_indices(system.kind, system.rank, frozenset(indices))


def all_types(max_rank: int = 8) -> list[tuple[str, int]]:
    """Every simple type of rank <= max_rank (A1..., B2..., C2..., D3..., E, F4, G2)."""
    out = [("A", r) for r in range(1, max_rank + 1)]
    out += [("B", r) for r in range(2, max_rank + 1)]
    out += [("C", r) for r in range(2, max_rank + 1)]
    out += [("D", r) for r in range(3, max_rank + 1)]
    out += [("E", r) for r in (6, 7, 8) if r <= max_rank]
    out += [t for t in (("F", 4), ("G", 2)) if t[1] <= max_rank]
    return out
