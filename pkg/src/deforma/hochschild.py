"""Hochschild cochains of a finite-dimensional algebra with coefficients in itself.

A cochain of arity n is a dense object array of Fractions with shape
``(d,)*n + (d,)``: ``values[i1, ..., in, j]`` is the e_j coordinate of
f(e_i1, ..., e_in).  Its Lie degree for the Gerstenhaber bracket is n - 1.

Structure constants follow the same layout: ``gamma[i, j, l]`` is the e_l
coordinate of e_i e_j.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Callable, Sequence

import numpy as np

from . import _tensor, linalg
from .linalg import RatMatrix, SubspaceBasis, to_rational

__all__ = [
    "DimMismatch",
    "NotAssociative",
    "BadPosition",
    "AlgebraStructure",
    "Cochain",
    "CohomologyReport",
    "is_associative",
    "hochschild_differential",
    "differential_matrix",
    "cohomology",
    "circ_i",
    "circ",
    "gerstenhaber_bracket",
    "bracket_square_test",
]


class DimMismatch(ValueError):
    pass


class NotAssociative(ValueError):
    pass


class BadPosition(ValueError):
    pass


def _frac_zeros(shape) -> np.ndarray:
    a = np.empty(shape, dtype=object)
    a.fill(Fraction(0))
    return a


def _as_frac_array(values, shape=None) -> np.ndarray:
    arr = np.array(values, dtype=object)
    if shape is not None:
        arr = arr.reshape(shape)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = to_rational(x)
    return out


@dataclass(frozen=True, eq=False)
class Cochain:
    arity: int
    dim: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        expected = (self.dim,) * (self.arity + 1)
        if self.values.shape != expected:
            raise DimMismatch(f"values have shape {self.values.shape}, expected {expected}")
        self.values.flags.writeable = False

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, arity: int, dim: int) -> "Cochain":
        return cls(arity, dim, _frac_zeros((dim,) * (arity + 1)))

    @classmethod
    def from_values(cls, arity: int, dim: int, values) -> "Cochain":
        return cls(arity, dim, _as_frac_array(values, (dim,) * (arity + 1)))

    @classmethod
    def from_vector(cls, arity: int, dim: int, vec: Sequence) -> "Cochain":
        if len(vec) != dim ** (arity + 1):
            raise DimMismatch(f"vector of length {len(vec)} for C^{arity} of a dim-{dim} algebra")
        return cls.from_values(arity, dim, list(vec))

    @classmethod
    def from_function(cls, arity: int, dim: int, fn: Callable) -> "Cochain":
        """``fn(*basis_indices)`` returns the output coordinate vector."""
        vals = _frac_zeros((dim,) * (arity + 1))
        for idx in itertools.product(range(dim), repeat=arity):
            vals[idx] = [to_rational(x) for x in fn(*idx)]
        return cls(arity, dim, vals)

    @classmethod
    def basis_element(cls, arity: int, dim: int, flat_index: int) -> "Cochain":
        vec = [0] * dim ** (arity + 1)
        vec[flat_index] = 1
        return cls.from_vector(arity, dim, vec)

    @classmethod
    def identity(cls, dim: int) -> "Cochain":
        vals = _frac_zeros((dim, dim))
        for i in range(dim):
            vals[i, i] = Fraction(1)
        return cls(1, dim, vals)

    # views -----------------------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree in the Gerstenhaber dg-Lie algebra C^(*+1)."""
        return self.arity - 1

    def to_vector(self) -> tuple:
        return tuple(self.values.ravel())

    def __call__(self, *indices) -> tuple:
        return tuple(self.values[tuple(indices)])

    def is_zero(self) -> bool:
        return not any(self.values.ravel())

    def nonzero_count(self) -> int:
        return sum(1 for x in self.values.ravel() if x)

    def matrix(self) -> np.ndarray:
        """Arity-1 only: the d x d array m with f(e_i) = sum_j m[i, j] e_j."""
        if self.arity != 1:
            raise DimMismatch("only arity-1 cochains are linear maps")
        return self.values

    # arithmetic --------------------------------------------------------------
    def _check(self, other: "Cochain"):
        if not isinstance(other, Cochain):
            raise TypeError("expected a Cochain")
        if self.dim != other.dim:
            raise DimMismatch(f"base dimensions {self.dim} and {other.dim} differ")
        if self.arity != other.arity:
            raise DimMismatch(f"arities {self.arity} and {other.arity} differ")

    def __add__(self, other):
        self._check(other)
        return Cochain(self.arity, self.dim, self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return Cochain(self.arity, self.dim, self.values - other.values)

    def __neg__(self):
        return Cochain(self.arity, self.dim, -self.values)

    def __mul__(self, a):
        a = to_rational(a)
        return Cochain(self.arity, self.dim, self.values * a)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self.arity, self.dim) == (other.arity, other.dim) and bool(
            np.all(self.values == other.values))

    def __hash__(self):
        return hash((self.arity, self.dim, self.to_vector()))


@dataclass(frozen=True, eq=False)
class AlgebraStructure:
    """Structure constants of a finite-dimensional, possibly non-unital algebra."""

    dim: int
    gamma: np.ndarray = field(repr=False)
    labels: tuple = ()

    def __post_init__(self):
        if self.gamma.shape != (self.dim,) * 3:
            raise DimMismatch(f"gamma has shape {self.gamma.shape}, expected {(self.dim,) * 3}")
        self.gamma.flags.writeable = False
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i + 1}" for i in range(self.dim)))

    @classmethod
    def from_gamma(cls, gamma, labels: Sequence[str] = ()) -> "AlgebraStructure":
        arr = np.array(gamma, dtype=object)
        d = arr.shape[0]
        return cls(d, _as_frac_array(arr, (d, d, d)), tuple(labels))

    @classmethod
    def from_table(cls, table, labels: Sequence[str] = ()) -> "AlgebraStructure":
        """``table[i][j]`` is the coordinate vector of e_i e_j."""
        return cls.from_gamma(table, labels)

    @classmethod
    def from_cochain(cls, kappa: Cochain, labels: Sequence[str] = ()) -> "AlgebraStructure":
        if kappa.arity != 2:
            raise DimMismatch("a multiplication is an arity-2 cochain")
        return cls(kappa.dim, kappa.values.copy(), tuple(labels))

    @property
    def mu(self) -> Cochain:
        return Cochain(2, self.dim, self.gamma.copy())

    @property
    def key(self) -> tuple:
        return (self.dim, tuple(self.gamma.ravel()))

    def multiply(self, x: Sequence, y: Sequence) -> tuple:
        x = np.array([to_rational(a) for a in x], dtype=object)
        y = np.array([to_rational(a) for a in y], dtype=object)
        return tuple(_tensor.tensordot(_tensor.tensordot(x, self.gamma, axes=([0], [0])), y, axes=([0], [0])))

    def is_commutative(self) -> bool:
        return bool(np.all(self.gamma == self.gamma.transpose(1, 0, 2)))

    def __eq__(self, other):
        if not isinstance(other, AlgebraStructure):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)


# -- associativity -----------------------------------------------------------

def is_associative(a: AlgebraStructure) -> tuple[bool, tuple | None]:
    """Check the d^4 equations sum_l G_il^r G_jk^l = sum_l G_ij^l G_lk^r.

    Returns (True, None) or (False, (i, j, k, r)) for the lexicographically
    first violated equation.
    """
    g = a.gamma
    d = a.dim
    # left[i,j,k,r] = (e_i e_j) e_k,  right[i,j,k,r] = e_i (e_j e_k)
    left = _tensor.tensordot(g, g, axes=([2], [0]))
    right = _tensor.tensordot(g, g, axes=([1], [2])).transpose(0, 2, 3, 1)
    diff = left - right
    for idx in itertools.product(range(d), repeat=4):
        if diff[idx]:
            return False, idx
    return True, None


# -- differential --------------------------------------------------------------

def _left_mult(gamma, f: np.ndarray, n: int) -> np.ndarray:
    """(a_0, a_1..a_n) -> a_0 . f(a_1..a_n), on integer arrays."""
    t = np.tensordot(gamma, f, axes=([1], [n]))  # (a0, r, a1..an)
    return np.moveaxis(t, 1, -1)


def _right_mult(f: np.ndarray, gamma, n: int) -> np.ndarray:
    """(a_0..a_n) -> f(a_0..a_{n-1}) . a_n, on integer arrays."""
    return np.tensordot(f, gamma, axes=([n], [0]))


def _insert(f: np.ndarray, p: int, g: np.ndarray, q: int, i: int) -> np.ndarray:
    """f o_i g as integer arrays; f of arity p, g of arity q, 1 <= i <= p."""
    t = np.tensordot(g, f, axes=([q], [i - 1]))
    perm = list(range(q, q + i - 1)) + list(range(q)) + list(range(q + i - 1, t.ndim))
    return t.transpose(perm)


def _pair(f: np.ndarray, g: np.ndarray, terms: int):
    """Clear denominators of two operands for ``terms`` summed products.

    Returns (f ints, g ints, common denominator of the products).
    """
    fi, fd, fb = _tensor.cleared(f)
    gi, gd, gb = _tensor.cleared(g)
    summed = max(f.shape[0], 1)
    dtype = _tensor.safe_dtype(max(fb, 1) * max(gb, 1) * summed * max(terms, 1))
    return fi.astype(dtype), gi.astype(dtype), fd * gd


def hochschild_differential(a: AlgebraStructure, f: Cochain) -> Cochain:
    """delta f(a_0..a_n) = (-1)^(n+1) a_0 f(a_1..a_n) + f(a_0..a_(n-1)) a_n
    + sum_i (-1)^(i+n) f(a_0..a_i a_(i+1)..a_n)."""
    if f.dim != a.dim:
        raise DimMismatch(f"cochain on dim {f.dim}, algebra of dim {a.dim}")
    n = f.arity
    fi, g, den = _pair(f.values, a.gamma, n + 2)
    out = _left_mult(g, fi, n) * (-1) ** (n + 1) + _right_mult(fi, g, n)
    for i in range(n):
        out = out + _insert(fi, n, g, 2, i + 1) * (-1) ** (i + n)
    return Cochain(n + 1, a.dim, _tensor.back(out, den))


_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def _integer_gamma(a: AlgebraStructure) -> tuple[np.ndarray, int]:
    den = 1
    for x in a.gamma.ravel():
        den = lcm(den, x.denominator)
    ints = np.array([int(x * den) for x in a.gamma.ravel()], dtype=object).reshape(a.gamma.shape)
    if ints.size and max(abs(int(x)) for x in ints.ravel()) < 1 << 40:
        ints = ints.astype(np.int64)
    return ints, den


def _integer_differential(a: AlgebraStructure, n: int) -> tuple[np.ndarray, int]:
    """den * (matrix of delta: C^n -> C^(n+1)) as an integer array.

    Rows index (a_0..a_n, r), columns index (b_1..b_n, s), both row-major, so
    column c is delta of the c-th basis cochain.
    """
    d = a.dim
    G, den = _integer_gamma(a)
    eye = np.eye(d, dtype=G.dtype if G.dtype != object else object)
    if G.dtype == object:
        eye = np.array([[int(i == j) for j in range(d)] for i in range(d)], dtype=object)
    A = _LETTERS[: n + 1]  # a_0..a_n
    r = _LETTERS[n + 1]
    B = _LETTERS[n + 2: 2 * n + 2]  # b_1..b_n  (b_k pairs with slot k-1)
    s = _LETTERS[2 * n + 2]
    out_idx = A + r + B + s
    shape = (d,) * (2 * n + 3)
    M = np.zeros(shape, dtype=G.dtype)

    def add(sign, factors):
        ops, subs = zip(*factors)
        M.__iadd__(sign * np.einsum(",".join(subs) + "->" + out_idx, *ops))

    def deltas(pairs):
        return [(eye, x + y) for x, y in pairs]

    # (-1)^(n+1) a_0 f(a_1..a_n): gamma[a0, s, r] * [a_1..a_n == b]
    add((-1) ** (n + 1), [(G, A[0] + s + r)] + deltas(zip(A[1:], B)))
    # f(a_0..a_(n-1)) a_n: gamma[s, a_n, r] * [a_0..a_(n-1) == b]
    add(1, [(G, s + A[n] + r)] + deltas(zip(A[:n], B)))
    # (-1)^(i+n) f(.., a_i a_(i+1), ..): gamma[a_i, a_(i+1), b_i] [r == s] ...
    for i in range(n):
        pairs = list(zip(A[:i], B[:i])) + list(zip(A[i + 2:], B[i + 1:])) + [(r, s)]
        add((-1) ** (i + n), [(G, A[i] + A[i + 1] + B[i])] + deltas(pairs))
    return M.reshape(d ** (n + 2), d ** (n + 1)), den


@lru_cache(maxsize=64)
def _cached_integer_differential(a: AlgebraStructure, n: int):
    M, den = _integer_differential(a, n)
    M.flags.writeable = False
    return M, den


def differential_matrix(a: AlgebraStructure, n: int) -> RatMatrix:
    """Matrix of delta: C^n -> C^(n+1) in the row-major cochain bases."""
    M, den = _cached_integer_differential(a, n)
    out = np.empty(M.shape, dtype=object)
    for idx, x in np.ndenumerate(M):
        out[idx] = Fraction(int(x), den)
    return RatMatrix(out)


# -- cohomology ----------------------------------------------------------------

@dataclass(frozen=True)
class CohomologyReport:
    degree: int
    dim_cochains: int
    dim_cocycles: int
    dim_coboundaries: int
    representatives: tuple  # of Cochain
    cocycles: SubspaceBasis = field(repr=False)
    coboundaries: SubspaceBasis = field(repr=False)
    quotient: linalg.Quotient = field(repr=False)
    base_dim: int = 0

    @property
    def betti(self) -> int:
        return self.dim_cocycles - self.dim_coboundaries

    def class_coordinates(self, f: Cochain) -> tuple:
        """Coordinates of [f] along the representatives; f must be a cocycle."""
        if f.arity != self.degree:
            raise DimMismatch(f"arity-{f.arity} cochain in degree-{self.degree} cohomology")
        return self.quotient.coords_of(f.to_vector())

    def is_cocycle(self, f: Cochain) -> bool:
        return self.cocycles.contains(f.to_vector())

    def is_coboundary(self, f: Cochain) -> bool:
        return self.coboundaries.contains(f.to_vector())

    def cochain_of(self, coords: Sequence) -> Cochain:
        return Cochain.from_vector(self.degree, self.base_dim, self.quotient.lift(coords))


@lru_cache(maxsize=32)
def _cohomology(a: AlgebraStructure, n: int) -> CohomologyReport:
    d = a.dim
    M, _ = _cached_integer_differential(a, n)
    Z = linalg._integer_kernel(M)
    if n == 0:
        B = SubspaceBasis(d)
    else:
        Bm, _ = _cached_integer_differential(a, n - 1)
        B = linalg._integer_image(Bm)
    q = linalg.quotient_basis(B, Z)
    reps = tuple(Cochain.from_vector(n, d, v) for v in q.representatives)
    return CohomologyReport(n, d ** (n + 1), Z.dim, B.dim, reps, Z, B, q, d)


def cohomology(a: AlgebraStructure, n: int) -> CohomologyReport:
    """H^n(A, A) with canonical representatives."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    ok, witness = is_associative(a)
    if not ok:
        raise NotAssociative(f"associativity fails at (i,j,k,r)={witness}")
    return _cohomology(a, n)


# -- Gerstenhaber structure ------------------------------------------------------

def circ_i(f: Cochain, g: Cochain, i: int) -> Cochain:
    """f o_i g := f(id^(i-1) x g x id^(m-i+1))."""
    if f.dim != g.dim:
        raise DimMismatch(f"base dimensions {f.dim} and {g.dim} differ")
    if not 1 <= i <= f.arity:
        raise BadPosition(f"position {i} outside 1..{f.arity}")
    fi, gi, den = _pair(f.values, g.values, 1)
    vals = _insert(fi, f.arity, gi, g.arity, i)
    return Cochain(f.arity + g.arity - 1, f.dim, _tensor.back(vals, den))


def _circ_ints(fi, p: int, gi, q: int, n: int):
    out = 0
    for i in range(1, p + 1):
        term = _insert(fi, p, gi, q, i)
        out = out - term if (n * (i + 1)) % 2 else out + term
    return out


def circ(f: Cochain, g: Cochain) -> Cochain:
    """f o g = sum_i (-1)^(n(i+1)) f o_i g with n the Lie degree of g."""
    if f.dim != g.dim:
        raise DimMismatch(f"base dimensions {f.dim} and {g.dim} differ")
    if f.arity == 0:
        # no slot to insert into
        if g.arity == 0:
            raise BadPosition("f o g is undefined for two arity-0 cochains")
        return Cochain.zero(g.arity - 1, f.dim)
    fi, gi, den = _pair(f.values, g.values, f.arity)
    vals = _circ_ints(fi, f.arity, gi, g.arity, g.degree)
    return Cochain(f.arity + g.arity - 1, f.dim, _tensor.back(vals, den))


def gerstenhaber_bracket(f: Cochain, g: Cochain) -> Cochain:
    """[f, g] = f o g - (-1)^(mn) g o f, m and n the Lie degrees."""
    if f.dim != g.dim:
        raise DimMismatch(f"base dimensions {f.dim} and {g.dim} differ")
    m, n = f.degree, g.degree
    if f.arity == 0 or g.arity == 0:
        fg, gf = circ(f, g), circ(g, f)
        return fg + gf if (m * n) % 2 else fg - gf
    fi, gi, den = _pair(f.values, g.values, f.arity + g.arity)
    out = _circ_ints(fi, f.arity, gi, g.arity, n)
    rev = _circ_ints(gi, g.arity, fi, f.arity, m)
    out = out + rev if (m * n) % 2 else out - rev
    return Cochain(f.arity + g.arity - 1, f.dim, _tensor.back(out, den))


def bracket_square_test(kappa: Cochain) -> bool:
    """True iff [kappa, kappa] = 0, i.e. kappa is an associative multiplication."""
    if kappa.arity != 2:
        raise DimMismatch("bracket_square_test expects an arity-2 cochain")
    return gerstenhaber_bracket(kappa, kappa).is_zero()
