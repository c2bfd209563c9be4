"""Truncated formal deformations of an associative algebra.

A deformation of order n is mu_0 + mu_1 t + ... + mu_n t^n taken modulo
t^(n+1), where mu_0 is the base multiplication.  Linear maps (arity-1
cochains) act on row vectors: ``f(e_i) = sum_j F[i, j] e_j``, so the
composite g o f has matrix ``F @ G``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _tensor, linalg
from .hochschild import (
    AlgebraStructure,
    Cochain,
    DimMismatch,
    NotAssociative,
    cohomology,
    differential_matrix,
    gerstenhaber_bracket,
    hochschild_differential,
    is_associative,
)

__all__ = [
    "NotAssociativeBase",
    "InvalidDeformation",
    "NotACocycle",
    "BadConstantTerm",
    "OrderMismatch",
    "BaseMismatch",
    "BadOrder",
    "BaseNotCommutative",
    "OrderTooLow",
    "TruncatedDeformation",
    "GaugeElement",
    "FormalAutomorphism",
    "ObstructionClass",
    "RigidityReport",
    "PoissonCheckReport",
    "GaugeSearchResult",
    "associativity_defect",
    "validate_deformation",
    "obstruction",
    "extend",
    "classify_infinitesimal",
    "rigidity_report",
    "gauge_exp",
    "gauge_log",
    "gauge_apply",
    "gauge_equivalent",
    "gauge_search",
    "maurer_cartan_residual",
    "poisson_limit",
]


class NotAssociativeBase(NotAssociative):
    pass


class InvalidDeformation(ValueError):
    pass


class NotACocycle(ValueError):
    pass


class BadConstantTerm(ValueError):
    pass


class OrderMismatch(ValueError):
    pass


class BaseMismatch(ValueError):
    pass


class BadOrder(ValueError):
    pass


class BaseNotCommutative(ValueError):
    pass


class OrderTooLow(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TruncatedDeformation:
    base: AlgebraStructure
    terms: tuple = ()  # mu_1 .. mu_n, arity-2 cochains

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for k, m in enumerate(self.terms, 1):
            if not isinstance(m, Cochain) or m.arity != 2:
                raise DimMismatch(f"term mu_{k} must be an arity-2 cochain")
            if m.dim != self.base.dim:
                raise DimMismatch(f"term mu_{k} lives on dim {m.dim}, base has dim {self.base.dim}")

    @classmethod
    def trivial(cls, base: AlgebraStructure, order: int) -> "TruncatedDeformation":
        return cls(base, tuple(Cochain.zero(2, base.dim) for _ in range(order)))

    @property
    def order(self) -> int:
        return len(self.terms)

    @property
    def dim(self) -> int:
        return self.base.dim

    def mu(self, k: int) -> Cochain:
        return self.base.mu if k == 0 else self.terms[k - 1]

    def truncate(self, n: int) -> "TruncatedDeformation":
        if n > self.order:
            raise BadOrder(f"cannot truncate order {self.order} to {n}")
        return TruncatedDeformation(self.base, self.terms[:n])

    def extended_by(self, term: Cochain) -> "TruncatedDeformation":
        return TruncatedDeformation(self.base, self.terms + (term,))

    def __eq__(self, other):
        if not isinstance(other, TruncatedDeformation):
            return NotImplemented
        return self.base == other.base and self.terms == other.terms

    def __hash__(self):
        return hash((self.base, self.terms))


# -- (D_k) -----------------------------------------------------------------------

def associativity_defect(d: TruncatedDeformation, k: int) -> np.ndarray:
    """Array of sum_{i+j=k} mu_i(mu_j(a,b),c) - mu_i(a,mu_j(b,c)) indexed (a,b,c,r).

    Evaluated by plain tensor contraction, independently of the bracket code.
    """
    out = 0
    for i in range(k + 1):
        mi, mj = d.mu(i).values, d.mu(k - i).values
        out = out + _tensor.einsum("abx,xcr->abcr", mj, mi) - _tensor.einsum("bcx,axr->abcr", mj, mi)
    return out


def _first_nonzero(arr: np.ndarray):
    for idx in itertools.product(*(range(s) for s in arr.shape[:-1])):
        if any(arr[idx]):
            return idx
    return None


def validate_deformation(d: TruncatedDeformation) -> tuple[bool, tuple | None]:
    """Check (D_k) for 1 <= k <= order on all basis triples.

    Returns (True, None) or (False, (k, (a, b, c))) for the first failure.
    """
    ok, w = is_associative(d.base)
    if not ok:
        raise NotAssociativeBase(f"base is not associative at (i,j,k,r)={w}")
    for k in range(1, d.order + 1):
        bad = _first_nonzero(associativity_defect(d, k))
        if bad is not None:
            return False, (k, bad)
    return True, None


def _require_valid(d: TruncatedDeformation):
    ok, w = validate_deformation(d)
    if not ok:
        raise InvalidDeformation(f"(D_k) fails at k={w[0]} on basis triple {w[1]}")


def maurer_cartan_residual(d: TruncatedDeformation, k: int) -> Cochain:
    """delta mu_k + 1/2 sum_{i+j=k, i,j>=1} [mu_i, mu_j]."""
    if not 1 <= k <= d.order:
        raise BadOrder(f"order {k} outside 1..{d.order}")
    out = hochschild_differential(d.base, d.mu(k))
    half = Fraction(1, 2)
    for i in range(1, k):
        out = out + gerstenhaber_bracket(d.mu(i), d.mu(k - i)) * half
    return out


# -- obstructions ------------------------------------------------------------------

@dataclass(frozen=True)
class ObstructionClass:
    cochain: Cochain
    is_cocycle: bool
    class_coords: tuple
    vanishes_in_cohomology: bool
    extension_term: Cochain | None = None


@lru_cache(maxsize=32)
def _solver(a: AlgebraStructure, n: int):
    return linalg.solver(differential_matrix(a, n))


def obstruction_cochain(d: TruncatedDeformation) -> Cochain:
    """O_n(a,b,c) = sum_{i+j=n+1, i,j>0} mu_i(a, mu_j(b,c)) - mu_i(mu_j(a,b), c)."""
    n = d.order
    out = 0
    for i in range(1, n + 1):
        j = n + 1 - i
        mi, mj = d.mu(i).values, d.mu(j).values
        out = out + _tensor.einsum("bcx,axr->abcr", mj, mi) - _tensor.einsum("abx,xcr->abcr", mj, mi)
    if n == 0:
        return Cochain.zero(3, d.dim)
    return Cochain(3, d.dim, out)


def obstruction(d: TruncatedDeformation) -> ObstructionClass:
    _require_valid(d)
    a = d.base
    o = obstruction_cochain(d)
    is_cocycle = hochschild_differential(a, o).is_zero()
    if not is_cocycle:
        # cannot happen for a valid deformation; reported rather than raised
        return ObstructionClass(o, False, (), False, None)
    coords = cohomology(a, 3).class_coordinates(o)
    vanishes = not any(coords)
    term = None
    if vanishes:
        x = _solver(a, 2)(o.to_vector())
        term = Cochain.from_vector(2, a.dim, x)
    return ObstructionClass(o, True, coords, vanishes, term)


def extend(d: TruncatedDeformation) -> TruncatedDeformation | None:
    ob = obstruction(d)
    if ob.extension_term is None:
        return None
    return d.extended_by(ob.extension_term)


# -- classification ----------------------------------------------------------------

def classify_infinitesimal(a: AlgebraStructure, mu1: Cochain) -> tuple:
    """Coordinates of [mu_1] in H^2(A, A)."""
    report = cohomology(a, 2)
    if mu1.arity != 2 or mu1.dim != a.dim:
        raise DimMismatch("mu_1 must be an arity-2 cochain on the base")
    if not report.is_cocycle(mu1):
        raise NotACocycle("mu_1 is not a Hochschild 2-cocycle")
    return report.class_coordinates(mu1)


@dataclass(frozen=True)
class RigidityReport:
    betti2: int
    betti3: int
    rigid: bool
    witness: Cochain | None
    note: str

    @property
    def verdict(self) -> str:
        return "infinitesimally rigid" if self.rigid else "not rigid"


def rigidity_report(a: AlgebraStructure) -> RigidityReport:
    h2 = cohomology(a, 2)
    h3 = cohomology(a, 3)
    rigid = h2.betti == 0
    witness = None if rigid else h2.representatives[0]
    if h3.betti == 0:
        note = "H^3 = 0: every obstruction vanishes, all truncated deformations extend"
    else:
        note = f"H^3 has dimension {h3.betti}: obstructions may be nonzero"
    return RigidityReport(h2.betti, h3.betti, rigid, witness, note)


# -- gauge group ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GaugeElement:
    """x = x_1 t + ... + x_n t^n with each x_k an arity-1 cochain."""

    dim: int
    terms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for k, x in enumerate(self.terms, 1):
            if x.arity != 1 or x.dim != self.dim:
                raise DimMismatch(f"gauge term x_{k} must be a linear map on dim {self.dim}")

    @classmethod
    def zero(cls, dim: int, order: int) -> "GaugeElement":
        return cls(dim, tuple(Cochain.zero(1, dim) for _ in range(order)))

    @property
    def order(self) -> int:
        return len(self.terms)

    def __neg__(self):
        return GaugeElement(self.dim, tuple(-x for x in self.terms))

    def __eq__(self, other):
        if not isinstance(other, GaugeElement):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, self.terms))


@dataclass(frozen=True, eq=False)
class FormalAutomorphism:
    """u = phi_0 + phi_1 t + ... + phi_n t^n; ``terms`` holds phi_0..phi_n."""

    dim: int
    terms: tuple

    @property
    def order(self) -> int:
        return len(self.terms) - 1

    def matrices(self) -> list:
        return [c.values for c in self.terms]

    def __eq__(self, other):
        if not isinstance(other, FormalAutomorphism):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, self.terms))


def _zero_mat(d):
    return Cochain.zero(1, d).values.copy()


def _eye(d):
    return Cochain.identity(d).values.copy()


def _stack(series: Sequence, shape) -> np.ndarray:
    out = np.empty((len(series),) + tuple(shape), dtype=object)
    for k, m in enumerate(series):
        out[k] = m
    return out


def _compose(U: Sequence, V: Sequence, n: int) -> list:
    """Coefficients of U o V mod t^(n+1) (apply V first)."""
    d = U[0].shape[0]
    return list(_tensor.series_einsum("ij,jk->ik", _stack(V, (d, d)), _stack(U, (d, d)), order=n))


def _series_exp(X: Sequence, n: int) -> list:
    """exp of a series with zero constant term."""
    d = X[0].shape[0]
    out = [_eye(d)] + [_zero_mat(d) for _ in range(n)]
    power = [_eye(d)] + [_zero_mat(d) for _ in range(n)]
    for m in range(1, n + 1):
        power = _compose(power, X, n)
        c = Fraction(1, 1)
        for j in range(2, m + 1):
            c /= j
        for k in range(n + 1):
            out[k] = out[k] + power[k] * c
    return out


def gauge_exp(x: GaugeElement, order: int | None = None) -> FormalAutomorphism:
    n = x.order if order is None else order
    d = x.dim
    X = [_zero_mat(d)] + [x.terms[k - 1].values if k <= x.order else _zero_mat(d)
                          for k in range(1, n + 1)]
    U = _series_exp(X, n)
    return FormalAutomorphism(d, tuple(Cochain(1, d, m) for m in U))


def gauge_log(u: FormalAutomorphism) -> GaugeElement:
    d, n = u.dim, u.order
    U = u.matrices()
    if not np.all(U[0] == _eye(d)):
        raise BadConstantTerm("constant term of a gauge automorphism must be the identity")
    Y = [_zero_mat(d)] + [U[k] for k in range(1, n + 1)]  # u - 1
    out = [_zero_mat(d) for _ in range(n + 1)]
    power = [_eye(d)] + [_zero_mat(d) for _ in range(n)]
    for m in range(1, n + 1):
        power = _compose(power, Y, n)
        c = Fraction((-1) ** (m + 1), m)
        for k in range(n + 1):
            out[k] = out[k] + power[k] * c
    return GaugeElement(d, tuple(Cochain(1, d, out[k]) for k in range(1, n + 1)))


def _transport(mu: Sequence, U: Sequence, V: Sequence, W: Sequence, n: int) -> list:
    """Coefficients of W o mu o (U x V) mod t^(n+1); mu is a list of gamma arrays."""
    d = mu[0].shape[0]
    inner = _tensor.series_einsum("ai,bj,ijr->abr", _stack(U, (d, d)), _stack(V, (d, d)),
                                  _stack(mu, (d, d, d)), order=n)
    return list(_tensor.series_einsum("abx,xr->abr", inner, _stack(W, (d, d)), order=n))


def gauge_apply(x: GaugeElement, d: TruncatedDeformation) -> TruncatedDeformation:
    """mu'' = u o mu' o (u^-1 x u^-1) with u = exp(x), truncated at the order of d.

    To first order mu''_1 = mu'_1 - delta x_1.
    """
    _require_valid(d)
    if x.dim != d.dim:
        raise DimMismatch("gauge element and deformation live on different dimensions")
    new = _apply(x, d)
    return TruncatedDeformation(d.base, tuple(Cochain(2, d.dim, new[k]) for k in range(1, d.order + 1)))


@dataclass(frozen=True)
class GaugeSearchResult:
    """Outcome of an order-by-order search for u with u o mu' = mu'' o (u x u)."""

    found: bool
    element: GaugeElement | None
    failed_order: int | None = None


def _apply(x: GaugeElement, d: TruncatedDeformation) -> list:
    n = d.order
    U = gauge_exp(x, n).matrices()
    Uinv = gauge_exp(-x, n).matrices()
    mu = [d.mu(k).values for k in range(n + 1)]
    return _transport(mu, Uinv, Uinv, U, n)


def gauge_search(d1: TruncatedDeformation, d2: TruncatedDeformation) -> GaugeSearchResult:
    """Find x with gauge_apply(x, d1) == d2, one order at a time.

    At order k the unknowns are x_k and a shift of x_(k-1) by a derivation
    (a 1-cocycle).  The shift leaves orders < k untouched and enters order k
    linearly, so each order is one exact linear solve.  Each accepted order
    is re-verified exactly; the search does not backtrack further, so on
    algebras with H^2 != 0 it can miss an existing equivalence.
    """
    if d1.base != d2.base:
        raise BaseMismatch("deformations have different base algebras")
    if d1.order != d2.order:
        raise OrderMismatch(f"orders {d1.order} and {d2.order} differ")
    _require_valid(d1)
    _require_valid(d2)
    a, n, dim = d1.base, d1.order, d1.dim
    delta = -differential_matrix(a, 1).data
    derivations = [Cochain.from_vector(1, dim, z) for z in cohomology(a, 1).cocycles.vectors]
    xs: list = []

    def discrepancy(terms, k):
        g = GaugeElement(dim, tuple(terms) + (Cochain.zero(1, dim),) * (k - len(terms)))
        return _apply(g, d1.truncate(k))[k] - d2.mu(k).values

    for k in range(1, n + 1):
        base = discrepancy(xs, k).ravel()
        cols = [delta]
        shifts = derivations if k >= 2 else []
        for z in shifts:
            moved = xs[:-1] + [xs[-1] + z]
            cols.append((discrepancy(moved, k).ravel() - base).reshape(-1, 1))
        sol = linalg.solve_particular(linalg.RatMatrix(np.hstack(cols)), tuple(-base))
        if sol is None:
            return GaugeSearchResult(False, None, k)
        for c, z in zip(sol[dim * dim:], shifts):
            if c:
                xs[-1] = xs[-1] + z * c
        xs.append(Cochain.from_vector(1, dim, sol[: dim * dim]))
        if any(discrepancy(xs, k).ravel()):
            return GaugeSearchResult(False, None, k)
    return GaugeSearchResult(True, GaugeElement(dim, tuple(xs)), None)


def gauge_equivalent(d1: TruncatedDeformation, d2: TruncatedDeformation) -> GaugeElement | None:
    """A gauge element x with gauge_apply(x, d1) == d2, or None.

    See ``gauge_search`` for the method and for the failing order.
    """
    return gauge_search(d1, d2).element


# -- classical limit -------------------------------------------------------------------

@dataclass(frozen=True)
class PoissonCheckReport:
    bracket: Cochain
    antisymmetry_ok: bool
    jacobi_ok: bool
    leibniz_ok: bool
    antisymmetry_witness: tuple | None = None
    jacobi_witness: tuple | None = None
    leibniz_witness: tuple | None = None

    @property
    def all_ok(self) -> bool:
        return self.antisymmetry_ok and self.jacobi_ok and self.leibniz_ok


def poisson_limit(d: TruncatedDeformation) -> PoissonCheckReport:
    """{a,b} = mu_1(a,b) - mu_1(b,a), checked exhaustively on basis tuples."""
    if not d.base.is_commutative():
        raise BaseNotCommutative("the classical limit needs a commutative base")
    if d.order < 2:
        raise OrderTooLow(f"order {d.order} < 2")
    m1 = d.mu(1).values
    P = m1 - m1.transpose(1, 0, 2)
    g = d.base.gamma
    bracket = Cochain(2, d.dim, P)

    anti = P + P.transpose(1, 0, 2)
    # {{a,b},c} + {{b,c},a} + {{c,a},b}
    pp = _tensor.einsum("abx,xcr->abcr", P, P)
    jac = pp + pp.transpose(1, 2, 0, 3) + pp.transpose(2, 0, 1, 3)
    # {u, vw} - {u,v}w - v{u,w}
    lhs = _tensor.einsum("vwx,uxr->uvwr", g, P)
    r1 = _tensor.einsum("uvx,xwr->uvwr", P, g)
    r2 = _tensor.einsum("uwx,vxr->uvwr", P, g)
    leib = lhs - r1 - r2

    wa, wj, wl = _first_nonzero(anti), _first_nonzero(jac), _first_nonzero(leib)
    return PoissonCheckReport(bracket, wa is None, wj is None, wl is None, wa, wj, wl)
