"""Graded vector spaces, Koszul sign calculus and graded multilinear maps.

Basis elements of a graded space are pairs ``(degree, index)``; vectors are
sparse dicts from basis elements to Fractions with no zero entries.
Permutations are 0-based tuples ``images`` with ``images[i] = sigma(i)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Sequence

from .linalg import to_rational

Basis = tuple  # (degree, index)

__all__ = [
    "LengthMismatch",
    "BadRange",
    "ArityMismatch",
    "DegreeMismatch",
    "GradedSpace",
    "GradedMultilinearMap",
    "perm_sign",
    "koszul_sign",
    "antisym_koszul_sign",
    "unshuffles",
    "suspension_power_sign",
    "shift_sign",
    "evaluate",
    "antisymmetrize",
    "desuspend_map",
    "suspend_map",
    "add_vectors",
    "scale_vector",
]


class LengthMismatch(ValueError):
    pass


class BadRange(ValueError):
    pass


class ArityMismatch(ValueError):
    pass


class DegreeMismatch(ValueError):
    pass


# -- vectors ---------------------------------------------------------------

def add_vectors(*vs: Mapping) -> dict:
    out: dict = {}
    for v in vs:
        for b, c in v.items():
            s = out.get(b, 0) + c
            if s:
                out[b] = s
            else:
                out.pop(b, None)
    return out


def scale_vector(a, v: Mapping) -> dict:
    a = to_rational(a)
    if not a:
        return {}
    return {b: a * c for b, c in v.items()}


def _accumulate(out: dict, b, c) -> None:
    s = out.get(b, 0) + c
    if s:
        out[b] = s
    else:
        out.pop(b, None)


# -- spaces ----------------------------------------------------------------

@dataclass(frozen=True)
class GradedSpace:
    """Finite-dimensional Z-graded space with a chosen homogeneous basis."""

    components: tuple  # sorted ((degree, dim), ...) with dim >= 1
    labels: tuple = field(default=(), compare=False)  # ((degree, (label, ...)), ...)

    @classmethod
    def from_dims(cls, dims: Mapping[int, int], labels: Mapping[int, Sequence[str]] | None = None):
        comps = []
        for d, n in sorted((int(k), int(v)) for k, v in dims.items()):
            if n < 0:
                raise ValueError(f"negative dimension in degree {d}")
            if n:
                comps.append((d, n))
        labs = ()
        if labels:
            labs = tuple((int(d), tuple(ls)) for d, ls in sorted(labels.items()))
        return cls(tuple(comps), labs)

    @property
    def dims(self) -> dict:
        return dict(self.components)

    def dim(self, degree: int) -> int:
        return self.dims.get(degree, 0)

    @property
    def total_dim(self) -> int:
        return sum(n for _, n in self.components)

    @property
    def degrees(self) -> list[int]:
        return [d for d, _ in self.components]

    def basis(self, degree: int | None = None) -> list[Basis]:
        if degree is not None:
            return [(degree, i) for i in range(self.dim(degree))]
        return [(d, i) for d, n in self.components for i in range(n)]

    def label(self, b: Basis) -> str:
        for d, ls in self.labels:
            if d == b[0] and b[1] < len(ls):
                return ls[b[1]]
        return f"e{b[0]}_{b[1]}"

    def check_basis(self, b: Basis) -> None:
        d, i = b
        if not 0 <= i < self.dim(d):
            raise DegreeMismatch(f"{b} is not a basis element of {self.dims}")

    def shifted(self, direction: str) -> "GradedSpace":
        """``"up"``: (up V)^i = V^(i-1).  ``"down"``: (down V)^i = V^(i+1)."""
        step = {"up": 1, "down": -1}[direction]
        return GradedSpace(tuple((d + step, n) for d, n in self.components),
                           tuple((d + step, ls) for d, ls in self.labels))

    def direct_sum(self, other: "GradedSpace"):
        """Return (sum space, left embedding, right embedding) on basis elements."""
        a, b = self.dims, other.dims
        dims = {d: a.get(d, 0) + b.get(d, 0) for d in set(a) | set(b)}
        left = {x: x for x in self.basis()}
        right = {(d, i): (d, a.get(d, 0) + i) for d, i in other.basis()}
        return GradedSpace.from_dims(dims), left, right


# -- permutation signs -----------------------------------------------------

def _check_perm(sigma: Sequence[int], degrees: Sequence[int] | None = None) -> None:
    if sorted(sigma) != list(range(len(sigma))):
        raise ValueError(f"{sigma!r} is not a permutation of 0..{len(sigma) - 1}")
    if degrees is not None and len(degrees) != len(sigma):
        raise LengthMismatch(f"{len(degrees)} degrees for a permutation of {len(sigma)}")


def perm_sign(sigma: Sequence[int]) -> int:
    _check_perm(sigma)
    s = 1
    for p, q in itertools.combinations(range(len(sigma)), 2):
        if sigma[p] > sigma[q]:
            s = -s
    return s


def koszul_sign(sigma: Sequence[int], degrees: Sequence[int]) -> int:
    """epsilon(sigma): w_1 ^ ... ^ w_n = epsilon * w_sigma(1) ^ ... ^ w_sigma(n).

    Every pair brought out of order contributes (-1)^(|w_a||w_b|).
    """
    _check_perm(sigma, degrees)
    s = 1
    for p, q in itertools.combinations(range(len(sigma)), 2):
        if sigma[p] > sigma[q] and degrees[sigma[p]] % 2 and degrees[sigma[q]] % 2:
            s = -s
    return s


def antisym_koszul_sign(sigma: Sequence[int], degrees: Sequence[int]) -> int:
    return perm_sign(sigma) * koszul_sign(sigma, degrees)


def unshuffles(i: int, n: int) -> list[tuple]:
    """All (i, n-i)-unshuffles, first block in lexicographic order."""
    if not 1 <= i <= n:
        raise BadRange(f"need 1 <= i <= n, got i={i}, n={n}")
    out = []
    for head in itertools.combinations(range(n), i):
        hs = set(head)
        out.append(head + tuple(j for j in range(n) if j not in hs))
    return out


def suspension_power_sign(n: int) -> int:
    """down^(x n) o up^(x n) = (-1)^(n(n-1)/2) id."""
    if n < 1:
        raise BadRange("n must be >= 1")
    return -1 if (n * (n - 1) // 2) % 2 else 1


def shift_sign(degrees: Sequence[int]) -> int:
    """Sign picked up by applying a degree-odd shift to every tensor factor.

    (down x ... x down)(v_1 x ... x v_k) = shift_sign * down v_1 x ... x down v_k.
    """
    k = len(degrees)
    e = sum((k - 1 - i) * d for i, d in enumerate(degrees))
    return -1 if e % 2 else 1


# -- multilinear maps ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GradedMultilinearMap:
    """Homogeneous multilinear map stored sparsely on basis tuples.

    ``coeffs`` maps an input basis tuple to its (nonzero) output vector.
    """

    arity: int
    degree: int
    domain: GradedSpace
    codomain: GradedSpace
    coeffs: Mapping = field(default_factory=dict)

    @classmethod
    def build(cls, arity, degree, domain, codomain=None, entries=()):
        """Validated constructor.  ``entries``: mapping or pairs (inputs, output vector)."""
        codomain = domain if codomain is None else codomain
        if arity < 1:
            raise ArityMismatch("arity must be >= 1")
        items = entries.items() if isinstance(entries, Mapping) else entries
        coeffs: dict = {}
        for inputs, out in items:
            inputs = tuple(tuple(b) for b in inputs)
            if len(inputs) != arity:
                raise ArityMismatch(f"{len(inputs)} inputs for an arity-{arity} map")
            for b in inputs:
                domain.check_basis(b)
            target = sum(b[0] for b in inputs) + degree
            vec = coeffs.setdefault(inputs, {})
            for ob, c in dict(out).items():
                ob = tuple(ob)
                codomain.check_basis(ob)
                if ob[0] != target:
                    raise DegreeMismatch(
                        f"output {ob} of {inputs} should have degree {target}")
                _accumulate(vec, ob, to_rational(c))
            if not vec:
                del coeffs[inputs]
        return cls(arity, degree, domain, codomain, coeffs)

    @classmethod
    def zero(cls, arity, degree, domain, codomain=None):
        return cls(arity, degree, domain, domain if codomain is None else codomain, {})

    @classmethod
    def identity(cls, space: GradedSpace):
        return cls(1, 0, space, space, {(b,): {b: Fraction(1)} for b in space.basis()})

    def __call__(self, *inputs) -> dict:
        return evaluate(self, inputs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, GradedMultilinearMap):
            return NotImplemented
        return (self.arity == other.arity and self.degree == other.degree
                and self.domain == other.domain and self.codomain == other.codomain
                and dict(self.coeffs) == dict(other.coeffs))

    def __add__(self, other):
        self._check_compatible(other)
        out = {k: dict(v) for k, v in self.coeffs.items()}
        for k, v in other.coeffs.items():
            vec = add_vectors(out.get(k, {}), v)
            if vec:
                out[k] = vec
            else:
                out.pop(k, None)
        return GradedMultilinearMap(self.arity, self.degree, self.domain, self.codomain, out)

    def scaled(self, a) -> "GradedMultilinearMap":
        a = to_rational(a)
        if not a:
            return GradedMultilinearMap.zero(self.arity, self.degree, self.domain, self.codomain)
        return GradedMultilinearMap(self.arity, self.degree, self.domain, self.codomain,
                                    {k: scale_vector(a, v) for k, v in self.coeffs.items()})

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other)

    def _check_compatible(self, other):
        if (self.arity, self.degree, self.domain, self.codomain) != (
                other.arity, other.degree, other.domain, other.codomain):
            raise ArityMismatch("maps differ in arity, degree or spaces")


def _as_vector(x, space: GradedSpace) -> dict:
    if isinstance(x, Mapping):
        return {tuple(b): to_rational(c) for b, c in x.items() if c}
    b = tuple(x)
    space.check_basis(b)
    return {b: Fraction(1)}


def evaluate(f: GradedMultilinearMap, inputs: Sequence) -> dict:
    """Multilinear extension of ``f``; inputs are basis elements or sparse vectors."""
    if len(inputs) != f.arity:
        raise ArityMismatch(f"{len(inputs)} inputs for an arity-{f.arity} map")
    vecs = [_as_vector(x, f.domain) for x in inputs]
    out: dict = {}
    coeffs = f.coeffs
    for combo in itertools.product(*(v.items() for v in vecs)):
        key = tuple(b for b, _ in combo)
        val = coeffs.get(key)
        if val is None:
            continue
        a = Fraction(1)
        for _, c in combo:
            a *= c
        for ob, c in val.items():
            _accumulate(out, ob, a * c)
    return out


def antisymmetrize(f: GradedMultilinearMap) -> GradedMultilinearMap:
    """Graded-antisymmetric projection (1/k!) sum_sigma chi(sigma) f o sigma."""
    k = f.arity
    if k == 1:
        return f
    w = Fraction(1, factorial(k))
    out: dict = {}
    perms = list(itertools.permutations(range(k)))
    for t, val in f.coeffs.items():
        for sigma in perms:
            # u with (u_sigma(0), ..., u_sigma(k-1)) = t
            u = [None] * k
            for j in range(k):
                u[sigma[j]] = t[j]
            u = tuple(u)
            s = antisym_koszul_sign(sigma, [b[0] for b in u])
            vec = out.setdefault(u, {})
            for ob, c in val.items():
                _accumulate(vec, ob, s * w * c)
            if not vec:
                del out[u]
    return GradedMultilinearMap(k, f.degree, f.domain, f.codomain, out)


def desuspend_map(m: GradedMultilinearMap) -> GradedMultilinearMap:
    """Transport ``m`` on V to ``f`` on down V with f o down^(x k) = down o m."""
    W, Wc = m.domain.shifted("down"), m.codomain.shifted("down")
    out = {}
    for t, val in m.coeffs.items():
        s = shift_sign([b[0] for b in t])
        out[tuple((d - 1, i) for d, i in t)] = {(d - 1, i): s * c for (d, i), c in val.items()}
    return GradedMultilinearMap(m.arity, m.degree + m.arity - 1, W, Wc, out)


def suspend_map(f: GradedMultilinearMap) -> GradedMultilinearMap:
    """Inverse of :func:`desuspend_map`."""
    V, Vc = f.domain.shifted("up"), f.codomain.shifted("up")
    out = {}
    for t, val in f.coeffs.items():
        s = shift_sign([d + 1 for d, _ in t])
        out[tuple((d + 1, i) for d, i in t)] = {(d + 1, i): s * c for (d, i), c in val.items()}
    return GradedMultilinearMap(f.arity, f.degree - f.arity + 1, V, Vc, out)


def basis_tuples(space: GradedSpace, n: int, sorted_only: bool = False) -> Iterable[tuple]:
    """All length-n basis tuples in lexicographic order (or only non-decreasing ones)."""
    basis = space.basis()
    if sorted_only:
        return itertools.combinations_with_replacement(basis, n)
    return itertools.product(basis, repeat=n)


