"""Exact linear algebra over the rationals.

Everything here works on :class:`fractions.Fraction` values.  Row reduction is
done fraction-free on integer matrices by a kernel that is compiled when the
extension is available and pure Python otherwise; both produce identical
output.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _rref_py, _tensor

try:
    from . import _rref as _compiled
except ImportError:  # extension not built
    _compiled = None

__all__ = [
    "Rational",
    "RatMatrix",
    "SubspaceBasis",
    "Quotient",
    "SubspaceNotContained",
    "to_rational",
    "rref",
    "rank",
    "kernel",
    "image",
    "span",
    "quotient_basis",
    "solve_particular",
    "kernel_backend",
    "set_kernel_backend",
]

Rational = Fraction

_INT64_SAFE = 1 << 62
_backend = "compiled" if _compiled is not None else "python"


class SubspaceNotContained(ValueError):
    """A vector expected to lie in a subspace does not."""


def kernel_backend() -> str:
    return _backend


def set_kernel_backend(name: str) -> str:
    """Select ``"compiled"`` or ``"python"``; returns the previous choice."""
    global _backend
    if name not in ("compiled", "python"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "compiled" and _compiled is None:
        raise RuntimeError("compiled kernel is not built")
    old, _backend = _backend, name
    return old


def to_rational(x) -> Fraction:
    """Parse ints, Fractions and strings like ``"-3/7"`` into a Fraction.

    Floats are rejected: they would silently smuggle rounding into exact code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, float)):
        raise TypeError(f"refusing inexact value {x!r}")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        s = x.strip().replace("−", "-")
        if "/" in s:
            num, den = s.split("/", 1)
            if int(den) == 0:
                raise ZeroDivisionError(f"zero denominator in {x!r}")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    raise TypeError(f"cannot interpret {x!r} as a rational")


def _frac_array(rows, ncols=None) -> np.ndarray:
    arr = np.array(rows, dtype=object)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, ncols or 0)
    if arr.ndim != 2:
        raise ValueError("matrix must be two-dimensional")
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = to_rational(x)
    return out


@dataclass(frozen=True, eq=False)
class RatMatrix:
    """Dense rational matrix.  ``data`` is a read-only object array of Fractions."""

    data: np.ndarray

    def __post_init__(self):
        if self.data.ndim != 2:
            raise ValueError("matrix must be two-dimensional")
        self.data.flags.writeable = False

    @classmethod
    def from_rows(cls, rows, ncols: int | None = None) -> "RatMatrix":
        return cls(_frac_array(rows, ncols))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RatMatrix":
        data = np.empty((nrows, ncols), dtype=object)
        data.fill(Fraction(0))
        return cls(data)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        m = cls.zeros(n, n).data.copy()
        for i in range(n):
            m[i, i] = Fraction(1)
        return cls(m)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def entries(self) -> tuple:
        return tuple(self.data.ravel())

    def to_rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self.data]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.data.T.copy())

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.cols:
            raise ValueError(f"vector length {len(vec)} != {self.cols} columns")
        v = np.array([to_rational(x) for x in vec], dtype=object)
        if self.cols == 0:
            return tuple(Fraction(0) for _ in range(self.rows))
        return tuple(Fraction(x) for x in _dot(self.data, v))

    __matmul__ = apply

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.all(self.data == other.data))

    def __repr__(self):
        return f"RatMatrix({self.rows}x{self.cols})"


def _integer_rows(m) -> np.ndarray:
    """Scale each row by the lcm of its denominators; object-dtype result."""
    if isinstance(m, RatMatrix):
        m = m.data
    m = np.asarray(m)
    if m.dtype != object:
        return m.astype(object)
    out = np.empty(m.shape, dtype=object)
    for i, row in enumerate(m):
        row = [x if x.__class__ is Fraction else to_rational(x) for x in row]
        den = lcm(*(x.denominator for x in row)) if row else 1
        if den == 1:
            out[i] = [x.numerator for x in row]
        else:
            out[i] = [x.numerator * (den // x.denominator) for x in row]
    return out


def _reduce_integer(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Fraction-free reduced echelon form of an integer matrix (copy)."""
    if m.size == 0:
        return m.astype(object).copy(), []
    if _backend == "compiled":
        big = max(abs(int(x)) for x in m.ravel()) if m.dtype == object else int(np.abs(m).max())
        if big < _INT64_SAFE:
            work = np.ascontiguousarray(m, dtype=np.int64).copy()
            try:
                pivots = _compiled.rref_int64(work)
                return work.astype(object), pivots
            except OverflowError:
                pass
    work = np.array(m, dtype=object)
    for idx, x in np.ndenumerate(work):
        work[idx] = int(x)
    pivots = _rref_py.rref_object(work)
    return work, pivots


def _normalize(red: np.ndarray, pivots: list[int]) -> np.ndarray:
    out = np.empty((len(pivots), red.shape[1]), dtype=object)
    zero = Fraction(0)
    for i, c in enumerate(pivots):
        p = int(red[i, c])
        out[i] = [Fraction(int(x), p) if x else zero for x in red[i]]
    return out


def rref(m: RatMatrix) -> tuple[RatMatrix, list[int]]:
    """Reduced row-echelon form (zero rows kept at the bottom) and pivot columns."""
    if not isinstance(m, RatMatrix):
        m = RatMatrix.from_rows(m)
    red, pivots = _reduce_integer(_integer_rows(m))
    out = RatMatrix.zeros(m.rows, m.cols).data.copy()
    if pivots:
        out[: len(pivots)] = _normalize(red, pivots)
    return RatMatrix(out), pivots


def rank(m) -> int:
    if not isinstance(m, RatMatrix):
        m = np.asarray(m)
        if m.dtype != object:
            return len(_reduce_integer(m)[1])
        m = RatMatrix.from_rows(m)
    return len(_reduce_integer(_integer_rows(m))[1])


@dataclass(frozen=True)
class SubspaceBasis:
    """Echelon basis of a subspace of Q^ambient_dim."""

    ambient_dim: int
    vectors: tuple = ()
    pivot_cols: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def __len__(self):
        return len(self.vectors)

    def contains(self, vec: Sequence) -> bool:
        return not any(self.residual(vec))

    def residual(self, vec: Sequence) -> list[Fraction]:
        """``vec`` minus its projection along the echelon basis."""
        if len(vec) != self.ambient_dim:
            raise ValueError("vector length does not match ambient dimension")
        v = [to_rational(x) for x in vec]
        for row, c in zip(self.vectors, self.pivot_cols):
            a = v[c]
            if a:
                for j, x in enumerate(row):
                    if x:
                        v[j] -= a * x
        return v

    def matrix(self) -> RatMatrix:
        return RatMatrix.from_rows(self.vectors, self.ambient_dim)


def span(vectors: Iterable[Sequence], ambient_dim: int) -> SubspaceBasis:
    """Canonical echelon basis of the span of ``vectors``."""
    vectors = list(vectors)
    if not vectors:
        return SubspaceBasis(ambient_dim)
    red, pivots = _reduce_integer(_integer_rows(_frac_array(vectors, ambient_dim)))
    rows = _normalize(red, pivots)
    return SubspaceBasis(ambient_dim, tuple(tuple(r) for r in rows), tuple(pivots))


def _kernel_from_reduced(red, pivots, ncols) -> list[list[Fraction]]:
    rows = _normalize(red, pivots) if pivots else np.empty((0, ncols), dtype=object)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -rows[i, f]
        basis.append(v)
    return basis


def kernel(m) -> SubspaceBasis:
    """Basis of {x : m x = 0}."""
    if not isinstance(m, RatMatrix):
        m = RatMatrix.from_rows(m)
    red, pivots = _reduce_integer(_integer_rows(m))
    return span(_kernel_from_reduced(red, pivots, m.cols), m.cols)


def _integer_kernel(m: np.ndarray) -> SubspaceBasis:
    """Kernel of an integer-valued numpy matrix without building Fractions first."""
    red, pivots = _reduce_integer(m)
    return span(_kernel_from_reduced(red, pivots, m.shape[1]), m.shape[1])


def image(m) -> SubspaceBasis:
    """Echelon basis of the column space."""
    if not isinstance(m, RatMatrix):
        m = RatMatrix.from_rows(m)
    return span(list(m.data.T), m.rows)


def _integer_image(m: np.ndarray) -> SubspaceBasis:
    return span(list(np.asarray(m, dtype=object).T), m.shape[0])


@dataclass(frozen=True)
class Quotient:
    """``super / sub`` with explicit representatives.

    ``coords_of(v)`` gives the coordinates of the class of ``v`` along
    ``representatives``; vectors outside ``super`` raise SubspaceNotContained.
    """

    sub: SubspaceBasis
    sup: SubspaceBasis
    representatives: tuple
    _left_inverse: np.ndarray = field(repr=False)
    _complement: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def coords_of(self, vec: Sequence) -> tuple:
        v = np.array([to_rational(x) for x in vec], dtype=object)
        if len(v) != self.sup.ambient_dim:
            raise ValueError("vector length does not match ambient dimension")
        if self._complement.size and any(_dot(self._complement, v)):
            raise SubspaceNotContained("vector is not in the ambient subspace")
        k = self.sub.dim
        if not self.representatives:
            return ()
        return tuple(Fraction(x) for x in _dot(self._left_inverse[k:], v))

    def lift(self, coords: Sequence) -> tuple:
        """A vector of ``super`` whose class has the given coordinates."""
        out = [Fraction(0)] * self.sup.ambient_dim
        for a, rep in zip(coords, self.representatives):
            a = to_rational(a)
            if a:
                for j, x in enumerate(rep):
                    out[j] += a * x
        return tuple(out)


def quotient_basis(sub: SubspaceBasis, sup: SubspaceBasis) -> Quotient:
    if sub.ambient_dim != sup.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    n = sup.ambient_dim
    for v in sub.vectors:
        if not sup.contains(v):
            raise SubspaceNotContained("sub is not contained in super")
    cols = list(sub.vectors) + list(sup.vectors)
    if cols:
        stacked = _frac_array(cols, n).T
        red, pivots = _reduce_integer(_integer_rows(stacked))
    else:
        pivots = []
    ks = sub.dim
    reps = tuple(tuple(sup.vectors[c - ks]) for c in pivots if c >= ks)
    basis = list(sub.vectors) + list(reps)
    k = len(basis)
    # Row-reduce [B | I]; with B of full column rank the top k rows of the
    # transformation give a left inverse, the rest cut out span(B).
    aug = np.empty((n, k + n), dtype=object)
    aug.fill(Fraction(0))
    for j, vec in enumerate(basis):
        aug[:, j] = list(vec)
    for i in range(n):
        aug[i, k + i] = Fraction(1)
    red, piv = _reduce_integer(_integer_rows(aug))
    full = RatMatrix.zeros(n, k + n).data.copy()
    full[: len(piv)] = _normalize(red, piv)
    left = full[:k, k:]
    complement = full[k:, k:] if len(piv) > k else np.empty((0, n), dtype=object)
    return Quotient(sub, sup, reps, left, complement)


def _dot(m: np.ndarray, v) -> np.ndarray:
    v = np.asarray(v, dtype=object)
    if not m.size or not v.size:
        return m.dot(v)
    return _tensor.tensordot(m, v, ([1], [0]))


def solve_particular(m, b: Sequence) -> tuple | None:
    """Some x with m x = b (non-pivot coordinates zero), or None if inconsistent."""
    if not isinstance(m, RatMatrix):
        m = RatMatrix.from_rows(m)
    if len(b) != m.rows:
        raise ValueError(f"rhs length {len(b)} != {m.rows} rows")
    aug = np.empty((m.rows, m.cols + 1), dtype=object)
    if m.rows:
        aug[:, : m.cols] = m.data
        aug[:, m.cols] = [to_rational(x) for x in b]
    return _solve_augmented(aug, m.cols)


def _solve_augmented(aug: np.ndarray, ncols: int) -> tuple | None:
    if aug.shape[0] == 0:
        return tuple(Fraction(0) for _ in range(ncols))
    red, pivots = _reduce_integer(_integer_rows(aug))
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = Fraction(int(red[i, ncols]), int(red[i, c]))
    return tuple(x)


def solver(m) -> Callable[[Sequence], tuple | None]:
    """Reusable particular-solution routine for a fixed matrix.

    Precomputes a left transformation once so repeated right-hand sides cost a
    matrix-vector product instead of a fresh elimination.
    """
    if not isinstance(m, RatMatrix):
        m = RatMatrix.from_rows(m)
    nrows, ncols = m.rows, m.cols
    aug = np.empty((nrows, ncols + nrows), dtype=object)
    aug.fill(Fraction(0))
    if nrows:
        aug[:, :ncols] = m.data
    for i in range(nrows):
        aug[i, ncols + i] = Fraction(1)
    red, piv = _reduce_integer(_integer_rows(aug))
    full = RatMatrix.zeros(nrows, ncols + nrows).data.copy()
    if piv:
        full[: len(piv)] = _normalize(red, piv)
    left_piv = [c for c in piv if c < ncols]
    r = len(left_piv)
    transform = full[:, ncols:]
    t_ints, t_den, t_bound = _tensor.cleared(transform) if transform.size else (transform, 1, 0)

    def solve(b):
        if len(b) != nrows:
            raise ValueError(f"rhs length {len(b)} != {nrows} rows")
        bb = np.array([to_rational(x) for x in b], dtype=object)
        if nrows:
            b_ints, b_den, b_bound = _tensor.cleared(bb)
            dt = _tensor.safe_dtype(max(t_bound, 1) * max(b_bound, 1) * nrows)
            y = _tensor.back(t_ints.astype(dt).dot(b_ints.astype(dt)), t_den * b_den)
        else:
            y = bb
        if any(y[r:]):
            return None
        x = [Fraction(0)] * ncols
        for i, c in enumerate(left_piv):
            x[c] = Fraction(y[i])
        return tuple(x)

    return solve
