"""Independent reference implementations for the test-suite.

Plain nested loops over dicts and Fractions, written from the defining
formulas without touching the package's array code.
"""
import itertools
from fractions import Fraction
from math import factorial

import sympy


def table_of(a):
    """gamma as nested lists of Fractions."""
    d = a.dim
    return [[[Fraction(a.gamma[i, j, l]) for l in range(d)] for j in range(d)] for i in range(d)]


def mult(g, x, y):
    d = len(g)
    out = [Fraction(0)] * d
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if not yj:
                continue
            for l in range(d):
                out[l] += xi * yj * g[i][j][l]
    return out


def unit(d, i):
    v = [Fraction(0)] * d
    v[i] = Fraction(1)
    return v


def cochain_dict(c):
    """{index tuple: output vector} for a package Cochain."""
    d = c.dim
    return {idx: [Fraction(x) for x in c.values[idx]] for idx in itertools.product(range(d), repeat=c.arity)}


def apply_multi(f, d, vecs):
    """Multilinear extension of a cochain dict to arbitrary vectors."""
    out = [Fraction(0)] * d
    supports = [[(i, x) for i, x in enumerate(v) if x] for v in vecs]
    for combo in itertools.product(*supports):
        c = Fraction(1)
        for _, x in combo:
            c *= x
        val = f[tuple(i for i, _ in combo)]
        for l in range(d):
            out[l] += c * val[l]
    return out


def delta(g, f, n):
    """The Hochschild coboundary, term by term from its defining formula."""
    d = len(g)
    out = {}
    for idx in itertools.product(range(d), repeat=n + 1):
        a = [unit(d, i) for i in idx]
        acc = [Fraction(0)] * d
        s = (-1) ** (n + 1)
        t = mult(g, a[0], apply_multi(f, d, a[1:]))
        acc = [x + s * y for x, y in zip(acc, t)]
        t = mult(g, apply_multi(f, d, a[:n]), a[n])
        acc = [x + y for x, y in zip(acc, t)]
        for i in range(n):
            args = a[:i] + [mult(g, a[i], a[i + 1])] + a[i + 2:]
            t = apply_multi(f, d, args)
            s = (-1) ** (i + n)
            acc = [x + s * y for x, y in zip(acc, t)]
        out[idx] = acc
    return out


def circ_i(f, p, g, q, i, d):
    """(f o_i g)(x_1..x_(p+q-1)) = f(x_1..x_(i-1), g(x_i..x_(i+q-1)), ...)."""
    out = {}
    for idx in itertools.product(range(d), repeat=p + q - 1):
        inner = g[idx[i - 1:i - 1 + q]]
        args = [unit(d, k) for k in idx[:i - 1]] + [inner] + [unit(d, k) for k in idx[i - 1 + q:]]
        out[idx] = apply_multi(f, d, args)
    return out


def bracket(f, p, g, q, d):
    """[f,g] = f o g - (-1)^(mn) g o f with f o g = sum_i (-1)^(n(i+1)) f o_i g."""
    m, n = p - 1, q - 1
    res = {idx: [Fraction(0)] * d for idx in itertools.product(range(d), repeat=p + q - 1)}
    for i in range(1, p + 1):
        s = (-1) ** ((n * (i + 1)) % 2)
        for k, v in circ_i(f, p, g, q, i, d).items():
            res[k] = [x + s * y for x, y in zip(res[k], v)]
    sgn = (-1) ** ((m * n) % 2)
    for i in range(1, q + 1):
        s = -sgn * (-1) ** ((m * (i + 1)) % 2)
        for k, v in circ_i(g, q, f, p, i, d).items():
            res[k] = [x + s * y for x, y in zip(res[k], v)]
    return res


def is_associative(g):
    d = len(g)
    for i, j, k in itertools.product(range(d), repeat=3):
        ei, ej, ek = unit(d, i), unit(d, j), unit(d, k)
        if mult(g, mult(g, ei, ej), ek) != mult(g, ei, mult(g, ej, ek)):
            return False
    return True


def is_commutative(g):
    d = len(g)
    return all(g[i][j] == g[j][i] for i in range(d) for j in range(d))


def jacobi_holds(br):
    """br[i][j] is the coordinate vector of [e_i, e_j] (ungraded)."""
    d = len(br)
    for i, j, k in itertools.combinations_with_replacement(range(d), 3):
        ei, ej, ek = unit(d, i), unit(d, j), unit(d, k)
        s = [Fraction(0)] * d
        for x, y, z in ((ei, ej, ek), (ej, ek, ei), (ek, ei, ej)):
            t = mult(br, mult(br, x, y), z)
            s = [u + v for u, v in zip(s, t)]
        if any(s):
            return False
    return True


def rank(rows):
    if not rows:
        return 0
    return sympy.Matrix(rows).rank()


def delta_matrix(g, n):
    """Columns are delta of the basis cochains of arity n (row-major order)."""
    d = len(g)
    cols = []
    for flat in range(d ** (n + 1)):
        f = {}
        for k, idx in enumerate(itertools.product(range(d), repeat=n)):
            f[idx] = [Fraction(1) if k * d + l == flat else Fraction(0) for l in range(d)]
        df = delta(g, f, n)
        cols.append([x for idx in itertools.product(range(d), repeat=n + 1) for x in df[idx]])
    return [list(r) for r in zip(*cols)]


def betti(g, n):
    d = len(g)
    dim_c = d ** (n + 1)
    ker = dim_c - rank(delta_matrix(g, n))
    im = rank(delta_matrix(g, n - 1)) if n >= 1 else 0
    return ker - im


def derivation_dim(g):
    """dim {D : D(xy) = D(x)y + xD(y)} by solving the linear system directly."""
    d = len(g)
    D = sympy.Matrix(d, d, lambda i, j: sympy.Symbol(f"D{i}_{j}"))
    eqs = []
    for i, j in itertools.product(range(d), repeat=2):
        prod = [sympy.Rational(g[i][j][l]) for l in range(d)]
        lhs = [sum(prod[k] * D[k, l] for k in range(d)) for l in range(d)]
        di = [D[i, k] for k in range(d)]
        dj = [D[j, k] for k in range(d)]
        rhs = [sum(di[k] * g[k][j][l] for k in range(d)) + sum(dj[k] * g[i][k][l] for k in range(d))
               for l in range(d)]
        eqs.extend(sympy.expand(x - y) for x, y in zip(lhs, rhs))
    syms = list(D)
    A, _ = sympy.linear_eq_to_matrix(eqs, syms)
    return len(syms) - A.rank()


def center_dim(g):
    d = len(g)
    rows = []
    for i in range(d):
        for l in range(d):
            # coefficient of m_k in (m e_i - e_i m)_l
            rows.append([g[k][i][l] - g[i][k][l] for k in range(d)])
    return d - rank(rows)


def mat_series_exp(X, order):
    """exp of sum_k X_k t^k with sympy matrices, truncated at t^order."""
    d = X[0].shape[0]
    t = sympy.Symbol("t")
    S = sum((X[k] * t ** (k + 1) for k in range(len(X))), sympy.zeros(d, d))
    out = sympy.eye(d)
    power = sympy.eye(d)
    for n in range(1, order + 1):
        power = (power * S).applyfunc(lambda e: _trunc(e, t, order))
        out = out + power / factorial(n)
    return [out.applyfunc(lambda e: sympy.expand(e).coeff(t, k)) for k in range(order + 1)]


def _trunc(e, t, order):
    e = sympy.expand(e)
    return sum((e.coeff(t, k) * t ** k for k in range(order + 1)), sympy.Integer(0))


def deformation_defect(terms, k, d):
    """(D_k): sum_{i+j=k} mu_i(mu_j(a,b),c) - mu_i(a,mu_j(b,c)) on all basis triples."""
    out = {}
    for a, b, c in itertools.product(range(d), repeat=3):
        acc = [Fraction(0)] * d
        for i in range(k + 1):
            mi, mj = terms[i], terms[k - i]
            left = apply_multi(mi, d, [mj[(a, b)], unit(d, c)])
            right = apply_multi(mi, d, [unit(d, a), mj[(b, c)]])
            acc = [x + y - z for x, y, z in zip(acc, left, right)]
        out[(a, b, c)] = acc
    return out
