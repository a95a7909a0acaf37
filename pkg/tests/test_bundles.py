import random
from collections import Counter
from fractions import Fraction as F

import jsonschema
import pytest
from hypothesis import given, strategies as st

from ellimod import bundles, elltorus
from ellimod.bundles import AtiyahSummand as I, BundleDecomp, BundleExpr
from ellimod.elltorus import ELambdaPoint, EPoint, ETA, O
from ellimod.errors import DegreeZeroError, SystemMismatch, ValidationError
from ellimod.rootsys import all_types, build_root_system, casimir_weights
from ellimod.verify import commutant_dim, random_sl_decomp

from conftest import epoints, load_schema, points

ETA0, ETA1, ETA2, ETA3 = ETA
L5 = EPoint(F(1, 5))
L3 = EPoint(F(1, 3))


def code_of(fn, v):
    with pytest.raises(ValidationError) as err:
        fn(v)
    return err.value.code


# --- SL(n) -------------------------------------------------------------------

@pytest.mark.parametrize("n", range(1, 9))
def test_sl_single_block(n):
    assert bundles.sl_classify(BundleDecomp("SL", (I(n),), n)) == {"is_regular": True, "aut_dim": n - 1}


def test_sl_examples():
    assert bundles.sl_classify(BundleDecomp("SL", (I(1), I(1)), 2)) == {"is_regular": False, "aut_dim": 3}
    assert bundles.sl_classify(BundleDecomp("SL", (I(1, L3), I(1, -L3)), 2)) == {"is_regular": True, "aut_dim": 1}


def test_sl_errors():
    assert code_of(bundles.sl_classify, BundleDecomp("SL", (I(2),), 3)) == "rank_mismatch"
    assert code_of(bundles.sl_classify, BundleDecomp("SL", (I(1, L3), I(1)), 2)) == "nontrivial_determinant"
    assert code_of(bundles.sl_classify, BundleDecomp("Sp", (I(2),), 1)) == "wrong_group"


def test_sl_hom_dimension_vs_commutant():
    rng = random.Random(4)
    for n in range(2, 7):
        for _ in range(15):
            v = random_sl_decomp(n, rng)
            assert bundles.sl_classify(v)["aut_dim"] == commutant_dim(list(v.summands)) - 1


def test_atiyah_hom():
    assert bundles.atiyah_hom_dim(I(3, L5), I(5, L5)) == 3
    assert bundles.atiyah_hom_dim(I(3, L5), I(5, L3)) == 0


def test_bad_summand_rank():
    with pytest.raises(ValidationError):
        I(0)


# --- Sp(2n) -------------------------------------------------------------------

def test_sp_examples():
    assert bundles.sp_validate(BundleDecomp("Sp", (I(2),), 1)) == 1
    assert bundles.sp_validate(BundleDecomp("Sp", (I(1, L5), I(1, -L5)), 1)) == 1
    assert code_of(bundles.sp_validate, BundleDecomp("Sp", (I(3, ETA1), I(1, L5), I(1, -L5)))) == "odd_block_at_two_torsion"


def test_sp_error_codes():
    assert code_of(bundles.sp_validate, BundleDecomp("Sp", (I(1, L5), I(1, -L5), I(1, L5), I(1, -L5)))) == "repeated_lambda"
    assert code_of(bundles.sp_validate, BundleDecomp("Sp", (I(1, L5), I(1, L3)))) == "unpaired_summand"
    assert code_of(bundles.sp_validate, BundleDecomp("Sp", (I(2, L5), I(1, -L5)))) == "unpaired_summand"
    assert code_of(bundles.sp_validate, BundleDecomp("Sp", (I(2),), 2)) == "rank_mismatch"
    assert code_of(bundles.sp_validate, BundleDecomp("Sp", (I(2, ETA2), I(2, ETA2)))) == "repeated_lambda"


def test_sp_full_shape():
    v = BundleDecomp("Sp", (I(2, L5), I(2, -L5), I(1, L3), I(1, -L3), I(4), I(2, ETA1), I(2, ETA3)), 7)
    assert bundles.sp_validate(v) == 7


# --- SO(m) -------------------------------------------------------------------

def test_so_examples():
    assert bundles.so_validate(BundleDecomp("SO_even", (I(1), I(1), I(1, ETA1), I(1, ETA1)), 2)) == 2
    assert bundles.so_validate(BundleDecomp("SO_odd", (I(3),), 1)) == 1
    bad = BundleDecomp("SO_even", (I(3), I(1, ETA1), I(1, ETA2), I(1, ETA3)))
    assert code_of(bundles.so_validate, bad) == "non_liftable"


def test_so_error_codes():
    assert code_of(bundles.so_validate, BundleDecomp("SO_odd", (I(1, ETA1), I(1, ETA1), I(1, L5)))) == "unpaired_summand"
    assert code_of(bundles.so_validate, BundleDecomp("SO_odd", (I(1, ETA1), I(1, ETA1), I(1, ETA2)))) == "missing_odd_block"
    assert code_of(bundles.so_validate, BundleDecomp("SO_even", (I(1), I(1), I(1, ETA2), I(3, ETA3)))) == "parity_violation"
    assert code_of(bundles.so_validate, BundleDecomp("SO_odd", (I(1), I(1, L5), I(1, -L5), I(1, ETA1), I(1, ETA2)))) == "parity_violation"
    assert code_of(bundles.so_validate, BundleDecomp("SO_odd", (I(1), I(2, L5), I(2, -L5), I(1, ETA1), I(1, ETA3)))) \
        == "parity_violation"
    assert code_of(bundles.so_validate, BundleDecomp("SO_odd", (I(2, L5), I(2, -L5), I(1, ETA2)))) \
        == "missing_odd_block"
    assert code_of(bundles.so_validate, BundleDecomp("SO_even", (I(2), I(2)))) == "parity_violation"
    assert code_of(bundles.so_validate, BundleDecomp("SO_even", (I(3), I(3)))) == "outside_shape"
    assert code_of(bundles.so_validate, BundleDecomp("SO_even", (I(2),))) == "parity_violation"
    assert code_of(bundles.so_validate, BundleDecomp("SO_odd", (I(3), I(1), I(1)))) == "outside_shape"
    assert code_of(bundles.so_validate, BundleDecomp("SO_even", (I(1, L5), I(1, L5), I(1, -L5), I(1, -L5)))) == "repeated_lambda"
    assert code_of(bundles.so_validate, BundleDecomp("SO_even", (I(3),))) == "rank_mismatch"


def test_so_full_shapes():
    even = BundleDecomp("SO_even", (I(3), I(1), I(5, ETA2), I(1, ETA2), I(2, L3), I(2, -L3)), 7)
    assert bundles.so_validate(even) == 7
    odd = BundleDecomp("SO_odd", (I(5), I(3, ETA1), I(1, ETA1), I(1, L5), I(1, -L5)), 5)
    assert bundles.so_validate(odd) == 5


# --- validator invariances --------------------------------------------------------

@st.composite
def sp_decomps(draw):
    lams = draw(st.lists(epoints(10).filter(lambda p: not p.is_two_torsion), max_size=3))
    summands = []
    for lam in lams:
        d = draw(st.integers(1, 3))
        summands += [I(d, lam), I(d, -lam)]
    for eta in ETA:
        if draw(st.booleans()):
            summands.append(I(2 * draw(st.integers(1, 2)), eta))
    if draw(st.booleans()) and summands:
        # a random corruption
        k = draw(st.integers(0, len(summands) - 1))
        s = summands[k]
        summands[k] = I(s.d + 1, s.lam)
    if not summands:
        summands = [I(2)]
    return BundleDecomp("Sp", tuple(draw(st.permutations(summands))))


@st.composite
def so_decomps(draw):
    group = draw(st.sampled_from(["SO_even", "SO_odd"]))
    summands = []
    for lam in draw(st.lists(epoints(10).filter(lambda p: not p.is_two_torsion), max_size=2)):
        d = draw(st.integers(1, 2))
        summands += [I(d, lam), I(d, -lam)]
    for eta in ETA:
        if group == "SO_odd" and eta == ETA0:
            summands.append(I(2 * draw(st.integers(0, 2)) + 1))
        elif draw(st.booleans()):
            summands += [I(2 * draw(st.integers(0, 2)) + 1, eta), I(1, eta)]
    if draw(st.booleans()) and summands:
        k = draw(st.integers(0, len(summands) - 1))
        summands.pop(k)
    return BundleDecomp(group, tuple(draw(st.permutations(summands))))


def _outcome(fn, v):
    try:
        return fn(v)
    except ValidationError as exc:
        return exc.code


def _negate(v):
    return BundleDecomp(v.group, tuple(I(s.d, -s.lam) for s in v.summands), v.n)


@given(sp_decomps(), st.randoms())
def test_sp_validate_invariances(v, r):
    if v.rank % 2:
        return
    shuffled = list(v.summands)
    r.shuffle(shuffled)
    base = _outcome(bundles.sp_validate, v)
    assert _outcome(bundles.sp_validate, BundleDecomp("Sp", tuple(shuffled))) == base
    assert _outcome(bundles.sp_validate, _negate(v)) == base


@given(so_decomps(), st.randoms())
def test_so_validate_invariances(v, r):
    shuffled = list(v.summands)
    r.shuffle(shuffled)
    base = _outcome(bundles.so_validate, v)
    assert _outcome(bundles.so_validate, BundleDecomp(v.group, tuple(shuffled))) == base
    assert _outcome(bundles.so_validate, _negate(v)) == base


# --- adjoint bundles ------------------------------------------------------------

def test_split_adjoint_examples():
    rng = random.Random(1)
    a2 = build_root_system("A", 2)
    shape = bundles.split_adjoint(elltorus.generic_point(a2, rng))
    assert shape.unipotent_blocks == (1, 1)
    pts = Counter(shape.line_summands)
    assert len(shape.line_summands) == 6 and O not in pts
    assert all(pts[p] == pts[-p] for p in pts)
    zero = bundles.split_adjoint(ELambdaPoint.zero(a2))
    assert zero.unipotent_blocks == (1, 1) and zero.line_summands == (O,) * 6
    a1 = build_root_system("A", 1)
    half = bundles.split_adjoint(ELambdaPoint(a1, (EPoint(F(1, 2)),)))
    assert half.unipotent_blocks == (1,) and half.line_summands == (O, O)


def test_regular_adjoint_examples():
    a1 = build_root_system("A", 1)
    assert bundles.regular_adjoint_blocks(ELambdaPoint.zero(a1)).unipotent_blocks == (3,)
    a2 = build_root_system("A", 2)
    assert bundles.regular_adjoint_blocks(elltorus.generic_point(a2, random.Random(0))).unipotent_blocks == (1, 1)
    # alpha_1 vanishes, nothing else does
    mu = ELambdaPoint(a2, (EPoint(F(1, 7)), EPoint(F(2, 7))))
    assert sorted(elltorus.vanishing_roots(mu)) == [(-1, 0), (1, 0)]
    assert bundles.regular_adjoint_blocks(mu).unipotent_blocks == (1, 3)


@pytest.mark.parametrize("kind,rank", all_types(8))
def test_trivial_class_adjoint(kind, rank):
    s = build_root_system(kind, rank)
    shape = bundles.regular_adjoint_blocks(ELambdaPoint.zero(s))
    assert shape.unipotent_blocks == tuple(sorted(2 * d - 1 for d in casimir_weights(s)))
    assert sum(shape.unipotent_blocks) == s.dim


@given(points())
def test_adjoint_block_laws(mu):
    r = mu.system.rank
    aut = elltorus.aut_dim_split(mu)
    reg = bundles.regular_adjoint_blocks(mu)
    split = bundles.split_adjoint(mu)
    assert len(reg.unipotent_blocks) == r and sum(reg.unipotent_blocks) == aut
    assert all(b % 2 for b in reg.unipotent_blocks)
    assert r + Counter(split.line_summands)[O] == aut
    nonzero = sum(1 for p in split.line_summands if not p.is_zero)
    assert split.rank == reg.rank + nonzero == mu.system.dim


# --- from mu --------------------------------------------------------------------

def test_from_mu_examples():
    for n in range(2, 6):
        a = build_root_system("A", n - 1)
        assert bundles.sl_class_from_mu(ELambdaPoint.zero(a)).summands == (I(n),)
    a2 = build_root_system("A", 2)
    e = EPoint(F(1, 7), F(3, 7))
    # coroot coordinates of (e, -e, 0): c_1 = e, c_2 = e + (-e) = 0
    v = bundles.sl_class_from_mu(ELambdaPoint(a2, (e, O)))
    assert Counter(v.summands) == Counter([I(1, e), I(1, -e), I(1)])
    assert bundles.sl_classify(v)["is_regular"]
    c2 = build_root_system("C", 2)
    g = EPoint(F(1, 11))
    w = bundles.sp_class_from_mu(ELambdaPoint(c2, (ETA1, ETA1 + g)))
    assert Counter(w.summands) == Counter([I(2, ETA1), I(1, g), I(1, -g)])
    assert bundles.sp_validate(w) == 2


def test_from_mu_wrong_system():
    with pytest.raises(SystemMismatch):
        bundles.sl_class_from_mu(ELambdaPoint.zero(build_root_system("C", 2)))
    with pytest.raises(SystemMismatch):
        bundles.sp_class_from_mu(ELambdaPoint.zero(build_root_system("A", 2)))


@given(points(types=[("A", r) for r in range(1, 8)]))
def test_sl_round_trip_and_split_consistency(mu):
    n = mu.system.rank + 1
    v = bundles.sl_class_from_mu(mu)
    assert bundles.sl_classify(v) == {"is_regular": True, "aut_dim": n - 1}
    mults = Counter()
    for s in v.summands:
        mults[s.lam] += s.d
    assert sum(m * m for m in mults.values()) - 1 == (n - 1) + len(elltorus.vanishing_roots(mu))


@given(points(types=[("C", r) for r in range(2, 7)]))
def test_sp_round_trip(mu):
    assert bundles.sp_validate(bundles.sp_class_from_mu(mu)) == mu.system.rank


# --- JSON -------------------------------------------------------------------------

@given(sp_decomps())
def test_bundle_json_round_trip(v):
    data = v.to_json()
    jsonschema.validate(data, load_schema("bundle_decomp"))
    assert BundleDecomp.from_json(data) == v


def test_bundle_json_example():
    data = {"group": "Sp", "n": 3, "summands": [{"d": 2, "lambda": ["1/2", "0"]}, {"d": 4, "lambda": ["0", "0"]}]}
    v = BundleDecomp.from_json(data)
    assert bundles.sp_validate(v) == 3
    assert v.to_json() == {"group": "Sp", "n": 3, "summands": [{"d": 2, "lambda": ["1/2", "0"]}, {"d": 4, "lambda": ["0", "0"]}]}


# --- Riemann-Roch -----------------------------------------------------------------

W = BundleExpr.W


@pytest.mark.parametrize("n", range(3, 13))
def test_dimension_counts(n):
    sym = bundles.bundle_calculus(W(n).sym2().dual())
    assert sym == {"rank": n * (n + 1) // 2, "degree": -(n + 1), "h0": 0, "h1": n + 1}
    for d in range(1, n):
        assert bundles.bundle_calculus((W(n - d) @ W(d)).dual())["h1"] == n
    assert bundles.bundle_calculus(bundles.Q4 @ W(n - 2).dual())["h1"] == 4
    if n > 3:
        assert bundles.bundle_calculus(W(n - 2).wedge2().dual())["h1"] == n - 3


def test_degree_zero_refused():
    with pytest.raises(DegreeZeroError):
        bundles.bundle_calculus(W(3) @ W(3).dual())
    with pytest.raises(DegreeZeroError):
        bundles.bundle_calculus(bundles.Q4)


def test_rank_degree_rules():
    e = (W(3) + BundleExpr.line(2)).sym2()
    assert e.rank == 10 and e.degree == 5 * 3
    assert W(4).wedge2().rank == 6 and W(4).wedge2().degree == 3


@st.composite
def line_sum_exprs(draw, depth=3):
    """Expression over sums of line bundles O(k p0) together with its explicit degree multiset."""
    if depth == 0 or draw(st.integers(0, 3)) == 0:
        k = draw(st.integers(-3, 3))
        return BundleExpr.line(k), [k]
    op = draw(st.sampled_from(["dual", "tensor", "sum", "sym2", "wedge2"]))
    a, da = draw(line_sum_exprs(depth - 1))
    if op == "dual":
        return a.dual(), [-x for x in da]
    if op == "sym2":
        return a.sym2(), [da[i] + da[j] for i in range(len(da)) for j in range(i, len(da))]
    if op == "wedge2":
        if len(da) < 2:
            return a, da
        return a.wedge2(), [da[i] + da[j] for i in range(len(da)) for j in range(i + 1, len(da))]
    b, db = draw(line_sum_exprs(depth - 1))
    if op == "sum":
        return a + b, da + db
    return a @ b, [x + y for x in da for y in db]


@given(line_sum_exprs())
def test_calculus_vs_line_bundle_expansion(pair):
    expr, degrees = pair
    assert expr.rank == len(degrees)
    assert expr.degree == sum(degrees)
    if 0 in degrees:
        with pytest.raises(DegreeZeroError):
            bundles.bundle_calculus(expr)
    else:
        out = bundles.bundle_calculus(expr)
        assert out["h0"] == sum(k for k in degrees if k > 0)
        assert out["h1"] == sum(-k for k in degrees if k < 0)
