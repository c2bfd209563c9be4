import itertools
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import ASSOCIATIVE, load_fixture
from deforma.deformations import BadOrder, TruncatedDeformation, maurer_cartan_residual
from deforma.graded import GradedMultilinearMap, GradedSpace, antisymmetrize, basis_tuples, desuspend_map, evaluate
from deforma.homotopy import (AInfinityStructure, FlavorMismatch, LInfinityStructure, MCElementSeries,
                              NotAntisymmetric, SourceNotMC, TruncationTooSmall, WeakMorphism,
                              a_infinity_defect, ainf_corestrictions, check_a_infinity, check_coderivation,
                              check_l_infinity, check_weak_morphism_linear, cochain_to_vector,
                              coderivation_bracket, direct_sum, extract_corestrictions,
                              generalized_mc_residual, hochschild_dg_lie, l_infinity_defect,
                              lift_to_coderivation, linf_corestrictions, mc_pushforward, mc_residuals)
from strategies import ainf_structures, cochains, graded_maps, graded_spaces, linf_structures, tables

LIE3 = GradedSpace.from_dims({0: 3})


def lie_brackets(dim=3, elements=st.integers(-1, 1)):
    """Antisymmetric bracket tables br[i][j] (ungraded)."""
    pairs = list(itertools.combinations(range(dim), 2))
    return st.lists(st.lists(elements, min_size=dim, max_size=dim), min_size=len(pairs),
                    max_size=len(pairs)).map(lambda vs: _bracket(dim, pairs, vs))


def _bracket(dim, pairs, vs):
    br = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for (i, j), v in zip(pairs, vs):
        br[i][j] = [Fraction(x) for x in v]
        br[j][i] = [-Fraction(x) for x in v]
    return br


def lie_structure(br):
    d = len(br)
    space = GradedSpace.from_dims({0: d})
    entries = {((0, i), (0, j)): {(0, k): c for k, c in enumerate(br[i][j])}
               for i, j in itertools.product(range(d), repeat=2)}
    return LInfinityStructure(space, {2: GradedMultilinearMap.build(2, 0, space, space, entries)})


def defect_map(space, n, degree, fn):
    entries = {}
    for t in basis_tuples(space, n):
        v = fn(t)
        if v:
            entries[t] = v
    return GradedMultilinearMap.build(n, degree, space, space, entries)


def flip(m):
    """The same map on the space with all degrees negated."""
    def neg(space):
        return GradedSpace.from_dims({-d: n for d, n in space.components})
    coeffs = {tuple((-d, i) for d, i in t): {(-d, i): c for (d, i), c in v.items()} for t, v in m.coeffs.items()}
    return GradedMultilinearMap.build(m.arity, -m.degree, neg(m.domain), neg(m.codomain), coeffs)


def same(a, b):
    return (a - b).is_zero()


# -- fixtures ---------------------------------------------------------------------

@pytest.mark.parametrize("name", ["sl2", "dgl_sl2"])
def test_dg_lie_fixtures_pass(name):
    assert check_l_infinity(load_fixture(name), 6) == (True, None)


def test_hochschild_dg_lie_passes():
    assert check_l_infinity(load_fixture("hochschild_dual_numbers"), 3) == (True, None)
    assert check_l_infinity(load_fixture("hochschild_dual_numbers_plus_dgl_sl2"), 3) == (True, None)


def test_nonjacobi_fails_at_three():
    L = load_fixture("nonjacobi")
    assert check_l_infinity(L, 2) == (True, None)
    assert check_l_infinity(L, 6) == (False, (3, ((0, 0), (0, 1), (0, 2))))
    ok, (n, t) = check_l_infinity(L, 3, exhaustive=True)
    assert not ok and n == 3 and t == ((0, 0), (0, 1), (0, 2))


@pytest.mark.parametrize("name", ASSOCIATIVE)
def test_associative_fixtures_pass_a6(name):
    assert check_a_infinity(AInfinityStructure.from_algebra(load_fixture(name)), 6) == (True, None)


def test_nonassoc_fails_at_three():
    A = AInfinityStructure.from_algebra(load_fixture("nonassoc"))
    assert check_a_infinity(A, 6) == (False, (3, ((0, 0), (0, 0), (0, 1))))


def test_non_antisymmetric_rejected():
    entries = {((0, 0), (0, 1)): {(0, 2): 1}}
    L = LInfinityStructure(LIE3, {2: GradedMultilinearMap.build(2, 0, LIE3, LIE3, entries)})
    with pytest.raises(NotAntisymmetric):
        check_l_infinity(L, 3)
    P = LInfinityStructure.from_ops(LIE3, L.ops)
    assert P.projected and evaluate(P.ops[2], [(0, 0), (0, 1)]) == {(0, 2): Fraction(1, 2)}
    assert not LInfinityStructure.from_ops(LIE3, P.ops).projected


# -- checkers against independent oracles -------------------------------------------

@given(lie_brackets())
def test_l3_is_jacobi(br):
    assert check_l_infinity(lie_structure(br), 4)[0] == oracles.jacobi_holds(br)


@given(st.integers(1, 3).flatmap(tables))
def test_a3_is_associativity(a):
    assert check_a_infinity(AInfinityStructure.from_algebra(a), 4)[0] == oracles.is_associative(oracles.table_of(a))


# -- coderivation correspondence --------------------------------------------------------

@given(st.integers(1, 3).flatmap(tables))
def test_tensor_square_vanishes_iff_associative(a):
    lift = lift_to_coderivation(ainf_corestrictions(AInfinityStructure.from_algebra(a)), "tensor", 4)
    assert lift.square_vanishes == oracles.is_associative(oracles.table_of(a))
    assert lift.square_vanishes == lift.square.is_zero()
    if not lift.square_vanishes:
        assert lift.first_nonzero_length == 3


@given(lie_brackets())
def test_symmetric_square_vanishes_iff_jacobi(br):
    lift = lift_to_coderivation(linf_corestrictions(lie_structure(br)), "symmetric", 4)
    assert lift.square_vanishes == oracles.jacobi_holds(br)


@settings(max_examples=30)
@given(linf_structures())
def test_linf_square_is_signed_defect(L):
    lift = lift_to_coderivation(linf_corestrictions(L), "symmetric", 4)
    W = L.space.shifted("down")
    for n in range(1, 5):
        D = defect_map(L.space, n, 3 - n, lambda t: l_infinity_defect(L, t))
        s = -1 if comb(n, 2) % 2 else 1
        got = lift.square.corestrictions.get(n, GradedMultilinearMap.zero(n, 2, W))
        assert same(got, desuspend_map(D).scaled(-s))


@settings(max_examples=30)
@given(ainf_structures())
def test_ainf_square_is_signed_defect(A):
    lift = lift_to_coderivation(ainf_corestrictions(A), "tensor", 4)
    for n in range(1, 5):
        D = desuspend_map(flip(defect_map(A.space, n, n - 3, lambda t: a_infinity_defect(A, t))))
        s = -1 if comb(n + 1, 2) % 2 else 1
        got = lift.square.corestrictions.get(n, GradedMultilinearMap.zero(n, 2, D.domain))
        assert same(got, D.scaled(s))


@settings(max_examples=30)
@given(linf_structures(), st.sampled_from(["symmetric", "tensor"]))
def test_lift_is_coderivation_and_round_trips(L, flavor):
    cores = {k: v for k, v in linf_corestrictions(L).items() if not v.is_zero()}
    theta = lift_to_coderivation(cores, flavor, 3).theta
    assert check_coderivation(theta) == (True, None)
    back = extract_corestrictions(theta)
    assert set(back) == set(cores)
    assert all(same(back[k], cores[k]) for k in back)


@settings(max_examples=25)
@given(st.data())
def test_coderivation_bracket_axioms(data):
    space = data.draw(graded_spaces(max_total=2))
    flavor = data.draw(st.sampled_from(["tensor", "symmetric"]))
    W = space.shifted("down")

    def table(deg):
        maps = {k: data.draw(graded_maps(W, k, deg)) for k in (1, 2)}
        if flavor == "symmetric":
            # symmetric on W means antisymmetric on V
            from deforma.graded import suspend_map
            maps = {k: desuspend_map(antisymmetrize(suspend_map(m))) for k, m in maps.items()}
        maps = {k: m for k, m in maps.items() if not m.is_zero()} or {1: GradedMultilinearMap.zero(1, deg, W)}
        return lift_to_coderivation(maps, flavor, 3).theta

    a, b, c = (table(data.draw(st.integers(-1, 1))) for _ in range(3))
    ab, ba = coderivation_bracket(a, b), coderivation_bracket(b, a)
    sab = -1 if (a.degree * b.degree) % 2 else 1
    for w in ab.words():
        assert ab(w) == {u: -sab * x for u, x in ba(w).items()}
    assert check_coderivation(ab) == (True, None)
    # graded Jacobi: [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|} [b,[a,c]]
    lhs = coderivation_bracket(a, coderivation_bracket(b, c))
    r1 = coderivation_bracket(ab, c)
    r2 = coderivation_bracket(b, coderivation_bracket(a, c))
    for w in lhs.words():
        want = dict(r1(w))
        for u, x in r2(w).items():
            want[u] = want.get(u, 0) + sab * x
        assert lhs(w) == {u: x for u, x in want.items() if x}


def test_coderivation_errors():
    L = load_fixture("sl2")
    with pytest.raises(TruncationTooSmall):
        lift_to_coderivation(linf_corestrictions(L), "symmetric", 1)
    with pytest.raises(FlavorMismatch):
        lift_to_coderivation(linf_corestrictions(L), "exterior", 3)
    t = lift_to_coderivation(linf_corestrictions(L), "symmetric", 3).theta
    u = lift_to_coderivation(linf_corestrictions(L), "tensor", 3).theta
    with pytest.raises(FlavorMismatch):
        coderivation_bracket(t, u)


def test_dgl_square_is_zero():
    lift = lift_to_coderivation(linf_corestrictions(load_fixture("dgl_sl2")), "symmetric", 4)
    assert lift.square_vanishes and lift.first_nonzero is None


# -- Maurer-Cartan ---------------------------------------------------------------------

@settings(max_examples=20)
@given(st.sampled_from(["dual_numbers", "nc2"]), st.data())
def test_hochschild_mc_residual_is_deformation_residual(name, data):
    a = load_fixture(name)
    L = hochschild_dg_lie(a)
    n = data.draw(st.integers(1, 3))
    d = TruncatedDeformation(a, tuple(data.draw(cochains(2, a.dim, st.integers(-1, 1))) for _ in range(n)))
    s = MCElementSeries(tuple(cochain_to_vector(d.mu(k)) for k in range(1, n + 1)))
    for k in range(1, n + 1):
        assert generalized_mc_residual(L, s, k) == cochain_to_vector(maurer_cartan_residual(d, k))


def test_mc_series_fixture():
    L, s = load_fixture("hochschild_dual_numbers"), load_fixture("dual_numbers_mc_series")
    assert s.order == 4 and all(s.terms)
    assert not any(mc_residuals(L, s))
    with pytest.raises(BadOrder):
        generalized_mc_residual(L, s, 5)


def test_mc_residual_by_hand():
    # dgl_sl2: s = x t with x = e (x) dt has residual l_1(x) + 1/2 [x, x] at t^1 only
    L = load_fixture("dgl_sl2")
    for b in L.space.basis(1):
        s = MCElementSeries(({b: 1}, {}))
        want = evaluate(L.ops[1], [b]) if 1 in L.ops else {}
        assert generalized_mc_residual(L, s, 1) == want
        half = {k: v / 2 for k, v in evaluate(L.ops[2], [b, b]).items()} if 2 in L.ops else {}
        assert generalized_mc_residual(L, s, 2) == {k: v for k, v in half.items() if v}


def test_pushforward_identity_and_inclusion():
    s = load_fixture("dual_numbers_mc_series")
    ident = load_fixture("hochschild_dual_numbers_identity")
    res = mc_pushforward(ident, s)
    assert res.target_is_mc and res.series == s
    inc = load_fixture("hochschild_dual_numbers_inclusion")
    res = mc_pushforward(inc, s)
    assert res.target_is_mc and len(res.target_residuals) == 4
    emb = {b: next(iter(v)) for (b,), v in inc.components[1].coeffs.items()}
    for k in range(1, 5):
        assert res.series.term(k) == {emb[b]: c for b, c in s.term(k).items()}


def test_pushforward_into_direct_sum():
    L1, L2 = load_fixture("hochschild_dual_numbers"), load_fixture("dgl_sl2")
    S, left, right = direct_sum(L1, L2)
    assert check_l_infinity(S, 3) == (True, None)
    s = load_fixture("dual_numbers_mc_series")
    f = WeakMorphism.inclusion(L1, S, left)
    assert check_weak_morphism_linear(f) == (True, None)
    res = mc_pushforward(f, s)
    assert res.target_is_mc
    for k in range(1, 5):
        assert res.series.term(k) == {left[b]: c for b, c in s.term(k).items()}


def test_pushforward_rejects_non_mc():
    L = load_fixture("hochschild_dual_numbers")
    bad = MCElementSeries(({(1, 5): 1},))  # mu_1(x, 1) = x is not a cocycle
    assert generalized_mc_residual(L, bad, 1)
    with pytest.raises(SourceNotMC) as e:
        mc_pushforward(WeakMorphism.identity(L), bad)
    assert e.value.order == 1


# -- weak morphisms ------------------------------------------------------------------

def m2_oracle(f):
    """(M_1) and (M_2) written directly on V; returns the first failing tuple."""
    S, T = f.source, f.target
    f1, f2 = f.components.get(1), f.components.get(2)

    def ap(m, *args):
        if m is None or any(not a for a in args):
            return {}
        return evaluate(m, list(args))

    def add(*terms):
        out = {}
        for c, v in terms:
            for b, x in v.items():
                out[b] = out.get(b, 0) + c * x
        return {b: x for b, x in out.items() if x}

    for u in S.space.basis():
        if add((1, ap(f1, ap(S.op(1), u)))) != add((1, ap(T.op(1), ap(f1, u)))):
            return False, (1, (u,))
    for u, v in basis_tuples(S.space, 2):
        lhs = add((1, ap(f1, ap(S.op(2), u, v))), (-1, ap(T.op(2), ap(f1, u), ap(f1, v))))
        rhs = add((1, ap(T.op(1), ap(f2, u, v))), (1, ap(f2, ap(S.op(1), u), {v: 1})),
                  (-1 if u[0] % 2 else 1, ap(f2, {u: 1}, ap(S.op(1), v))))
        if lhs != rhs:
            return False, (2, (u, v))
    return True, None


@settings(max_examples=60)
@given(st.data())
def test_weak_morphism_check_matches_v_level_oracle(data):
    V1, V2 = (data.draw(graded_spaces((0, 1), max_total=3)) for _ in range(2))
    S = data.draw(linf_structures(2, V1, allow_empty=True))
    T = data.draw(linf_structures(2, V2, allow_empty=True))
    comps = {1: data.draw(graded_maps(V1, 1, 0, V2))}
    if data.draw(st.booleans()):
        comps[2] = antisymmetrize(data.draw(graded_maps(V1, 2, -1, V2)))
    f = WeakMorphism(S, T, comps)
    assert check_weak_morphism_linear(f) == m2_oracle(f)


@pytest.mark.parametrize("name", ["sl2", "dgl_sl2", "hochschild_dual_numbers"])
def test_identity_is_a_morphism(name):
    L = load_fixture(name)
    assert check_weak_morphism_linear(WeakMorphism.identity(L)) == (True, None)


def test_pushforward_into_right_summand():
    # the Hochschild algebra as the right-hand summand
    L1, L2 = load_fixture("dgl_sl2"), load_fixture("hochschild_dual_numbers")
    S, left, right = direct_sum(L1, L2)
    f = WeakMorphism.inclusion(L2, S, right)
    s = load_fixture("dual_numbers_mc_series")
    res = mc_pushforward(f, s)
    assert res.target_is_mc
    assert res.series.term(1) == {right[b]: c for b, c in s.term(1).items()}


@settings(max_examples=40)
@given(st.data())
def test_twisting_by_f2_gives_a_morphism(data):
    # f = (id, h) is a morphism onto the structure with
    # l''_2(u,v) = l'_2(u,v) - l'_1 h(u,v) - h(l'_1 u, v) - (-1)^|u| h(u, l'_1 v)
    V = data.draw(graded_spaces((0, 1), max_total=3))
    S = data.draw(linf_structures(2, V, allow_empty=True))
    h = antisymmetrize(data.draw(graded_maps(V, 2, -1)))
    l1, l2 = S.op(1), S.op(2)

    def ev(m, *args):
        return evaluate(m, list(args)) if m is not None and all(args) else {}

    entries = {}
    for u, v in basis_tuples(V, 2):
        out = {}
        for c, vec in ((1, ev(l2, u, v)), (-1, ev(l1, ev(h, u, v))), (-1, ev(h, ev(l1, u), {v: 1})),
                       (1 if u[0] % 2 else -1, ev(h, {u: 1}, ev(l1, v)))):
            for b, x in vec.items():
                out[b] = out.get(b, 0) + c * x
        entries[(u, v)] = {b: x for b, x in out.items() if x}
    ops = dict(S.ops)
    ops[2] = GradedMultilinearMap.build(2, 0, V, V, entries)
    T = LInfinityStructure.from_ops(V, ops)
    assert not T.projected
    f = WeakMorphism(S, T, {1: GradedMultilinearMap.identity(V), 2: h})
    assert check_weak_morphism_linear(f) == (True, None)
    if not h.is_zero() and l1 is not None:
        # flipping the sign of f_2 generally breaks it
        g = WeakMorphism(S, T, {1: GradedMultilinearMap.identity(V), 2: -h})
        assert check_weak_morphism_linear(g) == m2_oracle(g)
