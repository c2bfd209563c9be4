"""Exact tensor contractions over Fraction arrays.

Denominators are cleared once per operand, the contraction runs on integers
(int64 when a magnitude bound proves it safe, Python ints otherwise) and the
result is divided back out.  This avoids a gcd per scalar multiply.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import lcm, prod

import numpy as np

_LIMIT = 1 << 62


def _clear(a: np.ndarray) -> tuple[np.ndarray, int, int]:
    flat = a.ravel()
    den = 1
    for x in flat:
        if x.__class__ is Fraction:
            den = lcm(den, x.denominator)
    if den == 1:
        ints = np.array([int(x) for x in flat], dtype=object)
    else:
        ints = np.array([x.numerator * (den // x.denominator) for x in flat], dtype=object)
    bound = max((abs(v) for v in ints), default=0)
    return ints.reshape(a.shape), den, bound


def _back(arr, den: int) -> np.ndarray:
    out = np.empty(np.shape(arr), dtype=object)
    flat = out.reshape(-1)
    # results are sparse with few distinct values, so memoize the Fractions
    memo: dict = {}
    for i, v in enumerate(np.ravel(arr)):
        v = int(v)
        x = memo.get(v)
        if x is None:
            x = memo[v] = Fraction(v, den)
        flat[i] = x
    return out


def cleared(a: np.ndarray) -> tuple[np.ndarray, int, int]:
    """(integer array, common denominator, max magnitude) with a == ints / den.

    The integer array is int64 when that is safe for later products of
    bounded size, otherwise an object array of Python ints.
    """
    ints, den, bound = _clear(a)
    if bound < (1 << 31):
        ints = ints.astype(np.int64)
    return ints, den, bound


def safe_dtype(bound: int):
    """int64 if values below ``bound`` cannot overflow, else object."""
    return np.int64 if bound < _LIMIT else object


def back(arr, den: int) -> np.ndarray:
    return _back(arr, den)


def einsum(spec: str, *ops: np.ndarray) -> np.ndarray:
    """``np.einsum`` for object arrays of Fractions (explicit '->' required)."""
    lhs, rhs = spec.split("->")
    subs = lhs.split(",")
    sizes: dict = {}
    for s, op in zip(subs, ops):
        for ch, n in zip(s, op.shape):
            sizes[ch] = n
    cleared = [_clear(op) for op in ops]
    summed = prod(sizes[ch] for ch in set("".join(subs)) - set(rhs))
    bound = prod(max(c[2], 1) for c in cleared) * summed
    den = prod(c[1] for c in cleared)
    if bound < _LIMIT:
        res = np.einsum(spec, *(c[0].astype(np.int64) for c in cleared), optimize=True)
    else:
        res = np.einsum(spec, *(c[0] for c in cleared), optimize=True)
    return _back(res, den)


def tensordot(a: np.ndarray, b: np.ndarray, axes) -> np.ndarray:
    ia, da, ba = _clear(a)
    ib, db, bb = _clear(b)
    summed = prod(a.shape[i] for i in axes[0]) if axes[0] else 1
    if max(ba, 1) * max(bb, 1) * summed < _LIMIT:
        res = np.tensordot(ia.astype(np.int64), ib.astype(np.int64), axes=axes)
    else:
        res = np.tensordot(ia, ib, axes=axes)
    return _back(res, da * db)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return tensordot(a, b, ([1], [0]))


def series_einsum(spec: str, *ops, order: int) -> np.ndarray:
    """Truncated product of power series with tensor coefficients.

    Each operand is an array whose leading axis is the t-degree.  Returns an
    array of shape (order+1, ...) whose k-th slice is the sum of
    ``einsum(spec, op1[p1], op2[p2], ...)`` over p1 + p2 + ... = k.
    """
    lhs, rhs = spec.split("->")
    subs = lhs.split(",")
    free = [ch for ch in "ABCDEFGHIJKLMNOPQRSTUVWXYZ" if ch not in spec][: len(ops)]
    full_spec = ",".join(f + s for f, s in zip(free, subs)) + "->" + "".join(free) + rhs
    sizes: dict = {}
    for s, op in zip(subs, ops):
        for ch, n in zip(s, op.shape[1:]):
            sizes[ch] = n
    cleared = [_clear(op) for op in ops]
    summed = prod(sizes[ch] for ch in set("".join(subs)) - set(rhs))
    combos = [c for c in itertools.product(*(range(min(op.shape[0], order + 1)) for op in ops))
              if sum(c) <= order]
    bound = prod(max(c[2], 1) for c in cleared) * summed * max(len(combos), 1)
    if bound < _LIMIT:
        ints = [c[0].astype(np.int64) for c in cleared]
        full = np.einsum(full_spec, *ints, optimize=True)
        out = np.zeros((order + 1,) + full.shape[len(ops):], dtype=np.int64)
    else:
        full = np.einsum(full_spec, *(c[0] for c in cleared), optimize=True)
        out = np.zeros((order + 1,) + full.shape[len(ops):], dtype=object)
    for c in combos:
        out[sum(c)] += full[c]
    return _back(out, prod(c[1] for c in cleared))
