"""Regenerate the JSON fixtures shipped in src/deforma/fixtures.

Run from the repository root: python3 scripts/make_fixtures.py
"""
import itertools
import os
from fractions import Fraction

from deforma import io
from deforma.deformations import (GaugeElement, TruncatedDeformation, cohomology, extend,
                                  gauge_apply, validate_deformation)
from deforma.graded import GradedMultilinearMap, GradedSpace
from deforma.hochschild import AlgebraStructure, Cochain
from deforma.homotopy import (LInfinityStructure, MCElementSeries, WeakMorphism, cochain_to_vector,
                              direct_sum, hochschild_dg_lie, mc_residuals)

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "deforma", "fixtures")


def table(d, products):
    """products: {(i, j): {l: c}} -> d x d table of coordinate vectors."""
    t = [[[0] * d for _ in range(d)] for _ in range(d)]
    for (i, j), vec in products.items():
        for l, c in vec.items():
            t[i][j][l] = c
    return t


def algebras():
    out = {}
    out["dual_numbers"] = AlgebraStructure.from_table(
        table(2, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}), ["1", "x"])
    out["truncated_x3"] = AlgebraStructure.from_table(
        table(3, {(i, j): {i + j: 1} for i in range(3) for j in range(3) if i + j < 3}),
        ["1", "x", "x2"])
    # E_ij E_kl = delta_jk E_il, basis index 2i + j
    m2 = {}
    for i, j, l in itertools.product(range(2), repeat=3):
        m2[(2 * i + j, 2 * j + l)] = {2 * i + l: 1}
    out["m2"] = AlgebraStructure.from_table(table(4, m2), ["E11", "E12", "E21", "E22"])
    out["nc2"] = AlgebraStructure.from_table(
        table(2, {(0, 0): {0: 1}, (0, 1): {1: 1}}), ["e1", "e2"])
    # monomials 1, x, y, xy with x^2 = y^2 = 0
    mono = [(0, 0), (1, 0), (0, 1), (1, 1)]
    xy = {}
    for a, b in itertools.product(range(4), repeat=2):
        e = (mono[a][0] + mono[b][0], mono[a][1] + mono[b][1])
        if e in mono:
            xy[(a, b)] = {mono.index(e): 1}
    out["xy"] = AlgebraStructure.from_table(table(4, xy), ["1", "x", "y", "xy"])
    out["nonassoc"] = AlgebraStructure.from_table(
        table(2, {(0, 0): {1: 1}, (1, 1): {0: 1}}), ["e1", "e2"])
    return out


def lie(space, brackets, degree_of=lambda i: 0):
    entries = {}
    for (i, j), vec in brackets.items():
        entries[((degree_of(i), i), (degree_of(j), j))] = vec
    return GradedMultilinearMap.build(2, 0, space, space, entries)


def sl2():
    sp = GradedSpace.from_dims({0: 3}, {0: ["e", "f", "h"]})
    br = {}
    for (i, j), (l, c) in {(0, 1): (2, 1), (2, 0): (0, 2), (2, 1): (1, -2)}.items():
        br[(i, j)] = {(0, l): c}
        br[(j, i)] = {(0, l): -c}
    return LInfinityStructure.from_ops(sp, {2: lie(sp, br)})


def nonjacobi():
    sp = GradedSpace.from_dims({0: 3}, {0: ["e1", "e2", "e3"]})
    br = {}
    for (i, j), (l, c) in {(0, 1): (2, 1), (1, 2): (0, 1), (2, 0): (0, 1)}.items():
        br[(i, j)] = {(0, l): c}
        br[(j, i)] = {(0, l): -c}
    return LInfinityStructure.from_ops(sp, {2: lie(sp, br)})


def dgl_sl2():
    """sl2 tensor B, B = span{1, t, dt} with t^2 = t dt = 0 and d t = dt.

    Degree 0: g x 1 (0..2), g x t (3..5); degree 1: g x dt (0..2).
    """
    L = sl2()
    g = L.ops[2].coeffs
    sp = GradedSpace.from_dims({0: 6, 1: 3})
    l1 = {((0, 3 + i),): {(1, i): Fraction(1)} for i in range(3)}
    l2 = {}
    for ((_, i), (_, j)), vec in g.items():
        for (_, l), c in vec.items():
            # 1.1 = 1, 1.t = t, 1.dt = dt; other products vanish
            l2.setdefault(((0, i), (0, j)), {})[(0, l)] = c
            l2.setdefault(((0, i), (0, 3 + j)), {})[(0, 3 + l)] = c
            l2.setdefault(((0, 3 + i), (0, j)), {})[(0, 3 + l)] = c
            l2.setdefault(((0, i), (1, j)), {})[(1, l)] = c
            l2.setdefault(((1, i), (0, j)), {})[(1, l)] = c
    ops = {1: GradedMultilinearMap.build(1, 1, sp, sp, l1),
           2: GradedMultilinearMap.build(2, 0, sp, sp, l2)}
    return LInfinityStructure.from_ops(sp, ops)


def extend_to(d, order):
    while d.order < order:
        nxt = extend(d)
        assert nxt is not None, "obstructed"
        d = nxt
    return d


def deformations(alg):
    out = {}
    dual = alg["dual_numbers"]
    # x * x = t : Q[x]/(x^2 - t)
    mu1 = Cochain.from_values(2, 2, table(2, {(1, 1): {0: 1}}))
    out["dual_numbers_deformation"] = extend_to(TruncatedDeformation(dual, (mu1,)), 3)
    x3 = alg["truncated_x3"]
    rep = cohomology(x3, 2).representatives[0]
    out["truncated_x3_deformation"] = extend_to(TruncatedDeformation(x3, (rep,)), 2)
    # cup product of the commuting derivations x d/dx and y d/dy, which
    # preserve (x^2, y^2); its antisymmetrization is a Poisson bracket
    xy = alg["xy"]
    mono = [(0, 0), (1, 0), (0, 1), (1, 1)]

    def cup(a, b):
        vec = [0] * 4
        e = (mono[a][0] + mono[b][0], mono[a][1] + mono[b][1])
        if e in mono:
            vec[mono.index(e)] = mono[a][0] * mono[b][1]
        return vec

    out["xy_poisson_deformation"] = extend_to(
        TruncatedDeformation(xy, (Cochain.from_function(2, 4, cup),)), 2)
    m2 = alg["m2"]
    x = GaugeElement(4, tuple(Cochain.from_function(1, 4, lambda i, k=k: [(i + k + j) % 3 - 1 for j in range(4)])
                              for k in range(3)))
    out["m2_gauge_deformation"] = gauge_apply(x, TruncatedDeformation.trivial(m2, 3))
    for name, d in out.items():
        assert validate_deformation(d)[0], name
    return out


def main():
    os.makedirs(OUT, exist_ok=True)
    alg = algebras()
    files = dict(alg)
    files.update(sl2=sl2(), nonjacobi=nonjacobi(), dgl_sl2=dgl_sl2())
    defs = deformations(alg)
    files.update(defs)

    # Maurer-Cartan series in the Hochschild dg-Lie algebra of the dual numbers
    dual = alg["dual_numbers"]
    hoch = hochschild_dg_lie(dual)
    d = extend_to(defs["dual_numbers_deformation"], 4)
    # a gauge transform fills in every order of the series
    x = GaugeElement(2, tuple(Cochain.from_values(1, 2, [[k, 1], [0, -k]]) for k in range(1, 5)))
    d = gauge_apply(x, d)
    series = MCElementSeries(tuple(cochain_to_vector(m) for m in d.terms))
    assert not any(mc_residuals(hoch, series))
    files["hochschild_dual_numbers"] = hoch
    files["dual_numbers_mc_series"] = series
    total, left, _ = direct_sum(hoch, dgl_sl2())
    files["hochschild_dual_numbers_plus_dgl_sl2"] = total
    refs = {
        "hochschild_dual_numbers_identity": (WeakMorphism.identity(hoch), "hochschild_dual_numbers",
                                             "hochschild_dual_numbers"),
        "hochschild_dual_numbers_inclusion": (WeakMorphism.inclusion(hoch, total, left),
                                              "hochschild_dual_numbers",
                                              "hochschild_dual_numbers_plus_dgl_sl2"),
    }

    for name, value in files.items():
        io.save(os.path.join(OUT, f"{name}.json"), value)
        print("wrote", name)
    for name, (f, src, tgt) in refs.items():
        obj = io.to_json(f)
        # structures are referenced by relative path instead of inlined
        obj["source"], obj["target"] = f"{src}.json", f"{tgt}.json"
        io.write_json(os.path.join(OUT, f"{name}.json"), obj)
        assert io.load(os.path.join(OUT, f"{name}.json")).components == f.components
        print("wrote", name)


if __name__ == "__main__":
    main()
