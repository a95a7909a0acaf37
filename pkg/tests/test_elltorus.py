import random
from collections import Counter
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ellimod import elltorus, rootsys
from ellimod.elltorus import ELambdaPoint, EPoint, O
from ellimod.errors import ParseError, SystemMismatch
from ellimod.rootsys import build_root_system, weyl_element

from conftest import epoints, points, weyl_words

A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)
C2 = build_root_system("C", 2)
E8 = build_root_system("E", 8)


def pt(system, *pairs):
    return ELambdaPoint(system, tuple(EPoint(F(a), F(b)) for a, b in pairs))


# --- EPoint ------------------------------------------------------------------

def test_group_law_examples():
    assert elltorus.add(EPoint(F(1, 2)), EPoint(F(1, 2))) == O
    assert elltorus.neg(EPoint(F(1, 3))) == EPoint(F(2, 3))
    assert elltorus.int_scale(3, EPoint(F(1, 3), F(2, 3))) == O


def test_reduction_mod_one():
    p = EPoint(F(7, 3), F(-1, 4))
    assert (p.a, p.b) == (F(1, 3), F(3, 4))
    assert p.order == 12
    assert EPoint(F(1, 2), F(1, 2)).is_two_torsion and not EPoint(F(1, 3)).is_two_torsion


@given(epoints(), epoints(), epoints())
def test_group_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p + q == q + p
    assert p + (-p) == O
    assert p - q == p + (-q)
    assert p.order * p == O
    assert all(not (k * p).is_zero for k in range(1, p.order))


@given(epoints(max_den=50))
def test_text_round_trip(p):
    assert EPoint.parse(str(p)) == p
    assert EPoint.from_strings(p.to_strings()) == p


@pytest.mark.parametrize("text", ["", "a,b", "1/0,0", "1,2,3", "1/2;0"])
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        EPoint.parse(text)


def test_mu_format_round_trip():
    mu = elltorus.parse_mu(A2, "1/2,0;0,1/3")
    assert elltorus.format_mu(mu) == "1/2,0;0,1/3"
    with pytest.raises(ParseError):
        elltorus.parse_mu(A2, "1/2,0")


@given(points())
def test_mu_round_trip(mu):
    assert elltorus.parse_mu(mu.system, elltorus.format_mu(mu)) == mu


# --- root values ---------------------------------------------------------------

def test_root_value_examples():
    assert elltorus.root_value(ELambdaPoint.zero(E8), E8.highest_root) == O
    assert elltorus.root_value(pt(A1, (F(1, 2), 0)), (1,)) == O
    assert elltorus.root_value(pt(A2, (F(1, 5), 0), (0, 0)), (1, 1)) == EPoint(F(1, 5))


def test_root_value_rejects_foreign_root():
    from ellimod.errors import RootNotInSystem
    with pytest.raises(RootNotInSystem):
        elltorus.root_value(ELambdaPoint.zero(A2), (1, 2))


@given(points(), st.data())
def test_root_value_is_linear(mu, data):
    nu = ELambdaPoint(mu.system, tuple(data.draw(epoints(6)) for _ in range(mu.system.rank)))
    total = ELambdaPoint(mu.system, tuple(a + b for a, b in zip(mu.coords, nu.coords)))
    for b in mu.system.positive_roots:
        assert elltorus.root_value(total, b) == elltorus.root_value(mu, b) + elltorus.root_value(nu, b)
        assert elltorus.root_value(mu, tuple(-x for x in b)) == -elltorus.root_value(mu, b)


def test_vanishing_examples():
    assert len(elltorus.vanishing_roots(ELambdaPoint.zero(A2))) == 6
    assert sorted(elltorus.vanishing_roots(pt(A1, (F(1, 2), 0)))) == [(-1,), (1,)]
    rng = random.Random(5)
    for kind, rank in [("A", 4), ("D", 5), ("E", 6), ("G", 2)]:
        s = build_root_system(kind, rank)
        assert elltorus.vanishing_roots(elltorus.generic_point(s, rng)) == []


def test_aut_dim_examples():
    assert elltorus.aut_dim_split(ELambdaPoint.zero(E8)) == 248
    assert elltorus.aut_dim_split(pt(A1, (F(1, 2), 0))) == 3
    mu = elltorus.generic_point(build_root_system("F", 4), random.Random(1))
    assert elltorus.is_regular_class(mu) and elltorus.aut_dim_split(mu) == 4


@given(points())
def test_vanishing_set_closed_and_aut_law(mu):
    s = mu.system
    van = set(elltorus.vanishing_roots(mu))
    roots = set(s.all_roots)
    assert all(tuple(-x for x in b) in van for b in van)
    for a in van:
        for b in van:
            c = tuple(x + y for x, y in zip(a, b))
            if c in roots:
                assert c in van
    direct = {b for b in s.all_roots if elltorus.root_value(mu, b).is_zero}
    assert van == direct
    assert elltorus.aut_dim_split(mu) == s.rank + len(van) >= s.rank
    assert elltorus.is_regular_class(mu) == (elltorus.aut_dim_split(mu) == s.rank)


# --- Weyl action -----------------------------------------------------------------

def test_weyl_apply_examples():
    mu = pt(A1, (F(1, 3), 0))
    assert elltorus.weyl_apply(weyl_element(A1, []), mu) == mu
    assert elltorus.weyl_apply(weyl_element(A1, [0]), mu) == pt(A1, (F(2, 3), 0))
    zero = ELambdaPoint.zero(E8)
    assert elltorus.weyl_apply(rootsys.random_weyl_element(E8, random.Random(0)), zero) == zero


def test_weyl_apply_system_mismatch():
    with pytest.raises(SystemMismatch):
        elltorus.weyl_apply(weyl_element(A2, [0]), pt(A1, (0, 0)))
    with pytest.raises(SystemMismatch):
        elltorus.orbit_equal(ELambdaPoint.zero(A2), ELambdaPoint.zero(C2))


@given(st.data())
def test_weyl_equivariance(data):
    mu = data.draw(points())
    s = mu.system
    w = weyl_element(s, data.draw(weyl_words(s)))
    wmu = elltorus.weyl_apply(w, mu)
    for b in s.all_roots:
        assert elltorus.root_value(wmu, w.apply_to_root(s, b)) == elltorus.root_value(mu, b)
    assert set(elltorus.vanishing_roots(wmu)) == {w.apply_to_root(s, b) for b in elltorus.vanishing_roots(mu)}
    assert elltorus.fingerprint(wmu) == elltorus.fingerprint(mu)


# --- canonical forms ---------------------------------------------------------------

def test_canonical_examples():
    z = elltorus.canonicalize(ELambdaPoint.zero(E8))
    assert z.representative == ELambdaPoint.zero(E8) and z.stabilizer_order == E8.weyl_order
    c = elltorus.canonicalize(pt(A1, (F(2, 3), 0)))
    assert elltorus.format_mu(c.representative) == "1/3,0" and c.stabilizer_order == 1
    mu = pt(C2, (F(1, 2), 0), (0, 0))
    brute = elltorus.orbit_scan(mu, rootsys.weyl_group_matrices(C2))
    assert elltorus.canonicalize(mu) == brute
    assert C2.weyl_order % brute.stabilizer_order == 0


@given(st.data())
def test_canonical_invariance(data):
    mu = data.draw(points())
    w = weyl_element(mu.system, data.draw(weyl_words(mu.system)))
    assert elltorus.canonicalize(elltorus.weyl_apply(w, mu)) == elltorus.canonicalize(mu)


SMALL_W = [t for t in rootsys.all_types(6) if build_root_system(*t).weyl_order <= 10**5]


@pytest.mark.parametrize("kind,rank", SMALL_W)
def test_orbit_stabilizer_by_enumeration(kind, rank):
    s = build_root_system(kind, rank)
    mats = rootsys.weyl_group_matrices(s)
    rng = random.Random(rank)
    for _ in range(5):
        mu = elltorus.random_torsion_point(s, rng)
        c = elltorus.canonicalize(mu)
        n, vec = mu.as_int_array()
        images = ((mats.astype(vec.dtype) @ vec) % n).reshape(len(mats), -1)
        orbit = np.unique(images, axis=0)
        assert len(orbit) * c.stabilizer_order == s.weyl_order
        assert tuple(F(int(x), n) for x in orbit[0]) == c.representative.flat()
        assert c == elltorus.orbit_scan(mu, mats)


def test_orbit_points_small():
    mu = pt(A2, (F(1, 3), 0), (0, 0))
    orbit = elltorus.orbit_points(mu, rootsys.weyl_group_matrices(A2))
    assert len(orbit) == A2.weyl_order // elltorus.canonicalize(mu).stabilizer_order


def test_canonical_e8_is_fast_for_special_points():
    mu = elltorus.parse_mu(E8, "1/2,0;0,0;0,0;0,0;0,0;0,0;0,0;1/3,0")
    c = elltorus.canonicalize(mu)
    assert E8.weyl_order % c.stabilizer_order == 0
    w = rootsys.random_weyl_element(E8, random.Random(3))
    assert elltorus.canonicalize(elltorus.weyl_apply(w, mu)) == c


def test_orbit_equal_examples():
    rng = random.Random(2)
    s = build_root_system("B", 3)
    mu = elltorus.random_torsion_point(s, rng)
    w = rootsys.random_weyl_element(s, rng)
    assert elltorus.orbit_equal(mu, elltorus.weyl_apply(w, mu))
    bumped = ELambdaPoint(s, (mu.coords[0] + EPoint(F(1, 10007)),) + mu.coords[1:])
    assert not elltorus.orbit_equal(mu, bumped)
    assert elltorus.orbit_equal(pt(A1, (F(1, 3), 0)), pt(A1, (F(2, 3), 0)))
    assert elltorus.orbit_equal(pt(A1, (F(1, 3), 0)), pt(A1, (F(2, 3), 0)), heuristic=True)


@given(points(types=[("A", 2), ("B", 2), ("G", 2), ("A", 3)]), points(types=[("A", 2), ("B", 2), ("G", 2), ("A", 3)]))
def test_fingerprint_is_necessary_condition(mu, nu):
    if mu.system != nu.system:
        return
    if elltorus.orbit_equal(mu, nu):
        assert elltorus.fingerprint(mu) == elltorus.fingerprint(nu)


def test_split_fingerprint_counts_roots():
    rng = random.Random(9)
    mu = elltorus.random_torsion_point(A2, rng)
    assert len(elltorus.fingerprint(mu)) == 6
    assert Counter(elltorus.fingerprint(mu))[O] == len(elltorus.vanishing_roots(mu))
