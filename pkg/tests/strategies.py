"""Hypothesis strategies shared by the test modules."""
import itertools
from fractions import Fraction

import numpy as np
from hypothesis import assume, strategies as st

from deforma.deformations import GaugeElement, TruncatedDeformation, extend
from deforma.hochschild import AlgebraStructure, Cochain, cohomology

small_ints = st.integers(-3, 3)
rationals = st.builds(Fraction, st.integers(-6, 6), st.sampled_from([1, 1, 1, 2, 3]))


def matrices(max_rows=6, max_cols=6, elements=rationals):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(elements, min_size=c, max_size=c), min_size=r, max_size=r)))


def tables(dim, elements=st.integers(-1, 1)):
    return st.lists(elements, min_size=dim ** 3, max_size=dim ** 3).map(
        lambda xs: AlgebraStructure.from_gamma(np.array(xs, dtype=object).reshape(dim, dim, dim)))


def cochains(arity, dim, elements=small_ints):
    return st.lists(elements, min_size=dim ** (arity + 1), max_size=dim ** (arity + 1)).map(
        lambda xs: Cochain.from_vector(arity, dim, xs))


def change_basis(a: AlgebraStructure, P) -> AlgebraStructure:
    """Structure constants of ``a`` in the basis f_i = sum_j P[i][j] e_j."""
    import sympy
    d = a.dim
    Pm = sympy.Matrix(P)
    Q = Pm.inv()
    g = a.gamma
    out = np.empty((d, d, d), dtype=object)
    for i, j in itertools.product(range(d), repeat=2):
        # f_i f_j in e coordinates, then convert to f coordinates
        v = [sum(Fraction(P[i][p]) * Fraction(P[j][q]) * g[p, q, r] for p in range(d) for q in range(d))
             for r in range(d)]
        for l in range(d):
            out[i, j, l] = sum(v[r] * Fraction(int(Q[r, l].p), int(Q[r, l].q)) for r in range(d))
    return AlgebraStructure(d, out)


def unimodular(dim):
    """Products of elementary integer matrices: invertible over the integers."""
    ops = st.tuples(st.integers(0, dim - 1), st.integers(0, dim - 1), st.integers(-2, 2))

    def build(steps):
        m = [[int(i == j) for j in range(dim)] for i in range(dim)]
        for i, j, c in steps:
            if i != j:
                m[i] = [x + c * y for x, y in zip(m[i], m[j])]
        return m

    return st.lists(ops, max_size=4).map(build)


def cocycle_combo(a, n, coeffs):
    rep = cohomology(a, n)
    vec = [Fraction(0)] * a.dim ** (n + 1)
    for c, z in zip(coeffs, rep.cocycles.vectors):
        for i, x in enumerate(z):
            vec[i] += c * x
    return Cochain.from_vector(n, a.dim, vec)


@st.composite
def deformations(draw, a: AlgebraStructure, max_order=3, order=None):
    """Validated deformations: canonical extension plus a random 2-cocycle per order.

    Returns None if an obstruction stops the construction early.
    """
    n = order if order is not None else draw(st.integers(1, max_order))
    dz = cohomology(a, 2).dim_cocycles
    d = TruncatedDeformation(a, ())
    for _ in range(n):
        nxt = extend(d)
        if nxt is None:
            return None
        z = cocycle_combo(a, 2, draw(st.lists(st.integers(-1, 1), min_size=dz, max_size=dz)))
        d = TruncatedDeformation(a, nxt.terms[:-1] + (nxt.terms[-1] + z,))
    return d


def gauge_elements(dim, order, elements=small_ints):
    return st.lists(cochains(1, dim, elements), min_size=order, max_size=order).map(
        lambda xs: GaugeElement(dim, tuple(xs)))


# -- graded objects ------------------------------------------------------------------

@st.composite
def graded_spaces(draw, degrees=(-1, 0, 1, 2), max_total=3):
    """Small graded spaces with at least one basis vector."""
    from deforma.graded import GradedSpace
    degs = draw(st.lists(st.sampled_from(degrees), min_size=1, max_size=3, unique=True))
    dims, left = {}, max_total
    for d in degs:
        if left == 0:
            break
        dims[d] = draw(st.integers(1, min(2, left)))
        left -= dims[d]
    return GradedSpace.from_dims(dims)


@st.composite
def graded_maps(draw, space, arity, degree, codomain=None, elements=st.integers(-1, 1), density=0.5):
    """Random homogeneous map; each basis tuple gets a random output of the right degree."""
    from deforma.graded import GradedMultilinearMap, basis_tuples
    codomain = space if codomain is None else codomain
    entries = {}
    for t in basis_tuples(space, arity):
        target = sum(b[0] for b in t) + degree
        outs = codomain.basis(target) if target in codomain.degrees else []
        if not outs or not draw(st.booleans()):
            continue
        vec = {b: draw(elements) for b in outs}
        entries[t] = vec
    return GradedMultilinearMap.build(arity, degree, space, codomain, entries)


@st.composite
def linf_structures(draw, max_arity=3, space=None, allow_empty=False):
    """Random (usually non-)L-infinity structures with ops l_1..l_max_arity."""
    from deforma.homotopy import LInfinityStructure
    space = draw(graded_spaces()) if space is None else space
    ops = {k: draw(graded_maps(space, k, 2 - k)) for k in range(1, max_arity + 1)}
    L = LInfinityStructure.from_ops(space, ops)
    assume(allow_empty or L.ops)
    return L


@st.composite
def ainf_structures(draw, max_arity=3, space=None):
    from deforma.homotopy import AInfinityStructure
    space = draw(graded_spaces()) if space is None else space
    ops = {k: draw(graded_maps(space, k, k - 2)) for k in range(1, max_arity + 1)}
    A = AInfinityStructure(space, {k: v for k, v in ops.items() if not v.is_zero()})
    assume(A.ops)
    return A
