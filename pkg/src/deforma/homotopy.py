"""L-infinity and A-infinity structures, coderivations and Maurer-Cartan series.

Vectors are sparse dicts ``{(degree, index): Fraction}``.  Words in a
truncated coalgebra are tuples of basis elements of W = down V; elements of
the coalgebra are dicts from words to Fractions.  In the symmetric flavor a
word is kept in canonical (sorted) form and w_1 ^ ... ^ w_n is rewritten as
epsilon(sigma) times the sorted word.

Sign conventions are collected in :func:`ainf_corestriction_sign` and in the
docstrings of the corestriction builders.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .graded import (
    DegreeMismatch,
    GradedMultilinearMap,
    GradedSpace,
    _accumulate,
    antisym_koszul_sign,
    antisymmetrize,
    basis_tuples,
    desuspend_map,
    evaluate,
    koszul_sign,
    unshuffles,
)
from .linalg import to_rational

__all__ = [
    "NotAntisymmetric",
    "TruncationTooSmall",
    "FlavorMismatch",
    "SourceNotMC",
    "LInfinityStructure",
    "AInfinityStructure",
    "CoderivationTable",
    "CoderivationLift",
    "WeakMorphism",
    "MCElementSeries",
    "check_l_infinity",
    "check_a_infinity",
    "direct_sum",
    "linf_corestrictions",
    "ainf_corestrictions",
    "lift_to_coderivation",
    "extract_corestrictions",
    "coderivation_bracket",
    "check_coderivation",
    "generalized_mc_residual",
    "mc_pushforward",
    "check_weak_morphism_linear",
    "PushforwardResult",
    "l_infinity_defect",
    "a_infinity_defect",
    "ainf_corestriction_sign",
    "mc_residuals",
    "hochschild_dg_lie",
    "cochain_to_vector",
]


class NotAntisymmetric(ValueError):
    pass


class TruncationTooSmall(ValueError):
    pass


class FlavorMismatch(ValueError):
    pass


class SourceNotMC(ValueError):
    def __init__(self, order: int, residual: dict):
        super().__init__(f"source series is not Maurer-Cartan at order {order}")
        self.order = order
        self.residual = residual


def _is_antisymmetric(f: GradedMultilinearMap) -> bool:
    return antisymmetrize(f) == f


def _add_into(out: dict, vec: Mapping, c) -> None:
    for b, x in vec.items():
        _accumulate(out, b, c * x)


# -- structures ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LInfinityStructure:
    """Graded space with chi-antisymmetric operations l_k of degree 2 - k."""

    space: GradedSpace
    ops: Mapping = field(default_factory=dict)  # k -> GradedMultilinearMap
    projected: bool = field(default=False, compare=False)

    def __post_init__(self):
        for k, op in self.ops.items():
            if op.arity != k:
                raise DegreeMismatch(f"l_{k} has arity {op.arity}")
            if op.degree != 2 - k:
                raise DegreeMismatch(f"l_{k} must have degree {2 - k}, got {op.degree}")
            if op.domain != self.space or op.codomain != self.space:
                raise DegreeMismatch(f"l_{k} is not an operation on the structure's space")

    @classmethod
    def from_ops(cls, space: GradedSpace, ops: Mapping) -> "LInfinityStructure":
        """Project every op onto its chi-antisymmetric part; ``projected`` records a change."""
        fixed, changed = {}, False
        for k, op in sorted(ops.items()):
            a = antisymmetrize(op)
            changed = changed or a != op
            if not a.is_zero():
                fixed[k] = a
        return cls(space, fixed, changed)

    @classmethod
    def dg_lie(cls, space, differential=None, bracket=None) -> "LInfinityStructure":
        ops = {}
        if differential is not None:
            ops[1] = differential
        if bracket is not None:
            ops[2] = bracket
        return cls.from_ops(space, ops)

    def op(self, k: int) -> GradedMultilinearMap | None:
        return self.ops.get(k)

    def __eq__(self, other):
        if not isinstance(other, LInfinityStructure):
            return NotImplemented
        return self.space == other.space and _same_ops(self.ops, other.ops)


@dataclass(frozen=True, eq=False)
class AInfinityStructure:
    """Graded space with operations mu_k of degree k - 2."""

    space: GradedSpace
    ops: Mapping = field(default_factory=dict)

    def __post_init__(self):
        for k, op in self.ops.items():
            if op.arity != k:
                raise DegreeMismatch(f"mu_{k} has arity {op.arity}")
            if op.degree != k - 2:
                raise DegreeMismatch(f"mu_{k} must have degree {k - 2}, got {op.degree}")

    @classmethod
    def from_algebra(cls, algebra) -> "AInfinityStructure":
        """An ungraded algebra concentrated in degree 0, with mu_2 only."""
        d = algebra.dim
        space = GradedSpace.from_dims({0: d}, {0: algebra.labels})
        entries = {}
        for i, j in itertools.product(range(d), repeat=2):
            vec = {(0, r): c for r, c in enumerate(algebra.gamma[i, j]) if c}
            if vec:
                entries[((0, i), (0, j))] = vec
        return cls(space, {2: GradedMultilinearMap(2, 0, space, space, entries)})

    def op(self, k: int):
        return self.ops.get(k)

    def __eq__(self, other):
        if not isinstance(other, AInfinityStructure):
            return NotImplemented
        return self.space == other.space and _same_ops(self.ops, other.ops)


def _same_ops(a: Mapping, b: Mapping) -> bool:
    keys = {k for k, v in a.items() if not v.is_zero()} | {k for k, v in b.items() if not v.is_zero()}
    return all(k in a and k in b and a[k] == b[k] for k in keys)


# -- axiom checkers --------------------------------------------------------------

def l_infinity_defect(L: LInfinityStructure, vs: Sequence) -> dict:
    """Left-hand side of (L_n) on the basis tuple ``vs``."""
    n = len(vs)
    degs = [b[0] for b in vs]
    out: dict = {}
    for i in range(1, n + 1):
        j = n + 1 - i
        li, lj = L.op(i), L.op(j)
        if li is None or lj is None:
            continue
        sgn = -1 if i % 2 else 1
        for sigma in unshuffles(i, n):
            inner = evaluate(li, [vs[p] for p in sigma[:i]])
            if not inner:
                continue
            c = sgn * antisym_koszul_sign(sigma, degs)
            val = evaluate(lj, [inner] + [vs[p] for p in sigma[i:]])
            _add_into(out, val, c)
    return out


def check_l_infinity(L: LInfinityStructure, max_n: int, exhaustive: bool = False):
    """Check (L_n) for 1 <= n <= max_n on homogeneous basis tuples.

    With antisymmetric operations the defect is itself antisymmetric, so by
    default only non-decreasing tuples are visited; the first failure is the
    lexicographically least failing tuple either way.
    Returns (True, None) or (False, (n, tuple)).
    """
    for k, op in L.ops.items():
        if not _is_antisymmetric(op):
            raise NotAntisymmetric(f"l_{k} is not chi-antisymmetric")
    for n in range(1, max_n + 1):
        for vs in basis_tuples(L.space, n, sorted_only=not exhaustive):
            if l_infinity_defect(L, vs):
                return False, (n, tuple(vs))
    return True, None


def a_infinity_defect(A: AInfinityStructure, vs: Sequence) -> dict:
    """Left-hand side of (A_n) on the basis tuple ``vs``."""
    n = len(vs)
    out: dict = {}
    for lam in range(n):
        pre = sum(b[0] for b in vs[:lam])
        for k in range(1, n - lam + 1):
            inner_op, outer_op = A.op(k), A.op(n - k + 1)
            if inner_op is None or outer_op is None:
                continue
            inner = evaluate(inner_op, vs[lam:lam + k])
            if not inner:
                continue
            e = k + lam + k * lam + k * pre
            val = evaluate(outer_op, list(vs[:lam]) + [inner] + list(vs[lam + k:]))
            _add_into(out, val, -1 if e % 2 else 1)
    return out


def check_a_infinity(A: AInfinityStructure, max_n: int):
    """Check (A_n) for 1 <= n <= max_n on all basis tuples."""
    for n in range(1, max_n + 1):
        for vs in basis_tuples(A.space, n):
            if a_infinity_defect(A, vs):
                return False, (n, tuple(vs))
    return True, None


# -- direct sums ----------------------------------------------------------------

def _transport(op: GradedMultilinearMap, space: GradedSpace, emb: Mapping) -> GradedMultilinearMap:
    coeffs = {tuple(emb[b] for b in t): {emb[o]: c for o, c in v.items()}
              for t, v in op.coeffs.items()}
    return GradedMultilinearMap(op.arity, op.degree, space, space, coeffs)


def direct_sum(L1: LInfinityStructure, L2: LInfinityStructure):
    """Return (L1 + L2, embedding of L1 basis, embedding of L2 basis)."""
    space, left, right = L1.space.direct_sum(L2.space)
    ops = {}
    for k in sorted(set(L1.ops) | set(L2.ops)):
        parts = [_transport(L.ops[k], space, emb) for L, emb in ((L1, left), (L2, right)) if k in L.ops]
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        ops[k] = total
    return LInfinityStructure(space, ops), left, right


# -- coalgebra words ---------------------------------------------------------------

def _canonical(word: tuple) -> tuple[tuple, int]:
    """Sorted form of w_1 ^ ... ^ w_n and its Koszul sign (0 if it vanishes)."""
    order = sorted(range(len(word)), key=lambda p: word[p])
    s = tuple(word[p] for p in order)
    for a, b in zip(s, s[1:]):
        if a == b and a[0] % 2:
            return s, 0
    return s, koszul_sign(order, [b[0] for b in word])


def _words(space: GradedSpace, n: int, flavor: str) -> Iterable[tuple]:
    if flavor == "tensor":
        yield from basis_tuples(space, n)
        return
    for w in basis_tuples(space, n, sorted_only=True):
        if all(not (a == b and a[0] % 2) for a, b in zip(w, w[1:])):
            yield w


def _word_degree(w: tuple) -> int:
    return sum(b[0] for b in w)


def _symmetric_expand(space, degree: int, arity: int, sorted_values: Mapping) -> GradedMultilinearMap:
    """Extend values given on sorted words to an epsilon-symmetric map on all tuples."""
    coeffs = {}
    for u, val in sorted_values.items():
        if not val:
            continue
        degs = [b[0] for b in u]
        for sigma in set(itertools.permutations(range(arity))):
            t = tuple(u[p] for p in sigma)
            if t in coeffs:
                continue
            s = koszul_sign(sigma, degs)
            coeffs[t] = {b: s * c for b, c in val.items()}
    return GradedMultilinearMap(arity, degree, space, space, coeffs)


@dataclass(frozen=True, eq=False)
class CoderivationTable:
    """Coderivation of the truncated tensor or symmetric coalgebra on ``space``.

    Determined by its corestrictions f_s (s = 1..N), each a map of arity s and
    degree ``degree`` on ``space``.  Only words of length <= N are visited.
    """

    space: GradedSpace
    truncation: int
    flavor: str
    degree: int
    corestrictions: Mapping  # s -> GradedMultilinearMap
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.flavor not in ("tensor", "symmetric"):
            raise FlavorMismatch(f"unknown flavor {self.flavor!r}")

    def words(self, n: int | None = None) -> Iterable[tuple]:
        lengths = range(1, self.truncation + 1) if n is None else [n]
        for k in lengths:
            yield from _words(self.space, k, self.flavor)

    def apply_word(self, w: tuple) -> dict:
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        out: dict = {}
        n = len(w)
        if self.flavor == "tensor":
            for s, f in self.corestrictions.items():
                for i in range(n - s + 1):
                    val = evaluate(f, w[i:i + s])
                    if not val:
                        continue
                    sgn = -1 if (self.degree * _word_degree(w[:i])) % 2 else 1
                    for b, c in val.items():
                        _accumulate(out, w[:i] + (b,) + w[i + s:], sgn * c)
        else:
            degs = [b[0] for b in w]
            for s, f in self.corestrictions.items():
                if s > n:
                    continue
                for sigma in unshuffles(s, n):
                    val = evaluate(f, [w[p] for p in sigma[:s]])
                    if not val:
                        continue
                    e = koszul_sign(sigma, degs)
                    rest = tuple(w[p] for p in sigma[s:])
                    for b, c in val.items():
                        cw, sgn = _canonical((b,) + rest)
                        if sgn:
                            _accumulate(out, cw, e * sgn * c)
        self._cache[w] = out
        return out

    def apply(self, elem: Mapping) -> dict:
        out: dict = {}
        for w, c in elem.items():
            _add_into(out, self.apply_word(w), c)
        return out

    def __call__(self, elem):
        if isinstance(elem, tuple):
            return self.apply_word(elem)
        return self.apply(elem)

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.corestrictions.values())


def _extract(space, truncation, flavor, degree, fn) -> CoderivationTable:
    """Corestrictions of the linear map ``fn`` (word -> element) as a table."""
    cores = {}
    for s in range(1, truncation + 1):
        vals = {}
        for w in _words(space, s, flavor):
            proj = {u[0]: c for u, c in fn(w).items() if len(u) == 1}
            if proj:
                vals[w] = proj
        if flavor == "tensor":
            f = GradedMultilinearMap(s, degree, space, space, vals)
        else:
            f = _symmetric_expand(space, degree, s, vals)
        if not f.is_zero():
            cores[s] = f
    return CoderivationTable(space, truncation, flavor, degree, cores)


def extract_corestrictions(t: CoderivationTable) -> dict:
    """Read the corestrictions back off ``t`` by projecting t(w) to length 1."""
    return dict(_extract(t.space, t.truncation, t.flavor, t.degree, t.apply_word).corestrictions)


def _compose(t1: CoderivationTable, t2: CoderivationTable, w: tuple) -> dict:
    return t1.apply(t2.apply_word(w))


@dataclass(frozen=True)
class CoderivationLift:
    theta: CoderivationTable
    square: CoderivationTable
    square_vanishes: bool
    first_nonzero: tuple | None = None  # a word on which theta^2 is nonzero

    @property
    def first_nonzero_length(self) -> int | None:
        return None if self.first_nonzero is None else len(self.first_nonzero)


def lift_to_coderivation(maps, flavor: str, truncation: int = 4) -> CoderivationLift:
    """Extend corestrictions to a coderivation theta and compute theta^2.

    ``maps`` is a mapping arity -> map or a sequence of maps, all on the same
    space W and of the same degree.
    """
    if truncation < 2:
        raise TruncationTooSmall(f"truncation {truncation} < 2")
    items = maps.items() if isinstance(maps, Mapping) else ((m.arity, m) for m in maps)
    cores = {k: m for k, m in items if k <= truncation}
    if not cores:
        raise ValueError("at least one corestriction is needed")
    first = next(iter(cores.values()))
    space, degree = first.domain, first.degree
    for k, m in cores.items():
        if m.arity != k or m.domain != space or m.degree != degree:
            raise DegreeMismatch("corestrictions must share space and degree")
    theta = CoderivationTable(space, truncation, flavor, degree, cores)
    first_bad = None
    for w in theta.words():
        if _compose(theta, theta, w):
            first_bad = w
            break
    square = _extract(space, truncation, flavor, 2 * degree, lambda w: _compose(theta, theta, w))
    return CoderivationLift(theta, square, first_bad is None, first_bad)


def coderivation_bracket(t1: CoderivationTable, t2: CoderivationTable, verify: bool = True):
    """[t1, t2] = t1 t2 - (-1)^(|t1||t2|) t2 t1, returned as a table.

    With ``verify`` the re-extended table is compared with the commutator on
    every word; a mismatch raises RuntimeError.
    """
    if (t1.flavor, t1.truncation, t1.space) != (t2.flavor, t2.truncation, t2.space):
        raise FlavorMismatch("tables differ in flavor, truncation or space")
    sign = -1 if (t1.degree * t2.degree) % 2 else 1

    def comm(w):
        out = dict(_compose(t1, t2, w))
        _add_into(out, _compose(t2, t1, w), -sign)
        return out

    table = _extract(t1.space, t1.truncation, t1.flavor, t1.degree + t2.degree, comm)
    if verify:
        for w in table.words():
            if table.apply_word(w) != comm(w):
                raise RuntimeError(f"commutator is not a coderivation on word {w}")
    return table


def _coproduct(w: tuple, flavor: str) -> dict:
    out: dict = {}
    n = len(w)
    if flavor == "tensor":
        for i in range(1, n):
            _accumulate(out, (w[:i], w[i:]), Fraction(1))
        return out
    degs = [b[0] for b in w]
    for i in range(1, n):
        for sigma in unshuffles(i, n):
            a, sa = _canonical(tuple(w[p] for p in sigma[:i]))
            b, sb = _canonical(tuple(w[p] for p in sigma[i:]))
            if sa and sb:
                _accumulate(out, (a, b), Fraction(koszul_sign(sigma, degs) * sa * sb))
    return out


def check_coderivation(t: CoderivationTable):
    """Check Delta theta = (theta x id) Delta + (id x theta) Delta on all words.

    Returns (True, None) or (False, word).
    """
    for w in t.words():
        lhs: dict = {}
        for u, c in t.apply_word(w).items():
            for pair, x in _coproduct(u, t.flavor).items():
                _accumulate(lhs, pair, c * x)
        rhs: dict = {}
        for (a, b), x in _coproduct(w, t.flavor).items():
            for u, c in t.apply_word(a).items():
                _accumulate(rhs, (u, b), x * c)
            sgn = -1 if (t.degree * _word_degree(a)) % 2 else 1
            for u, c in t.apply_word(b).items():
                _accumulate(rhs, (a, u), sgn * x * c)
        if lhs != rhs:
            return False, w
    return True, None


# -- structures as coderivations ---------------------------------------------------

def linf_corestrictions(L: LInfinityStructure) -> dict:
    """f_n on down V with f_n o down^(x n) = down o lbar_n and l_n = (-1)^C(n+1,2) lbar_n."""
    out = {}
    for n, op in L.ops.items():
        s = -1 if comb(n + 1, 2) % 2 else 1
        out[n] = desuspend_map(op.scaled(s))
    return out


def _flip(m: GradedMultilinearMap) -> GradedMultilinearMap:
    """Same map on the space with every degree negated."""
    def neg(space):
        return GradedSpace(tuple(sorted((-d, n) for d, n in space.components)),
                           tuple(sorted((-d, ls) for d, ls in space.labels)))
    coeffs = {tuple((-d, i) for d, i in t): {(-d, i): c for (d, i), c in v.items()}
              for t, v in m.coeffs.items()}
    return GradedMultilinearMap(m.arity, -m.degree, neg(m.domain), neg(m.codomain), coeffs)


def ainf_corestriction_sign(k: int) -> int:
    """Sign c_k in f_k = c_k * down-transport of mu_k on the flipped grading.

    Fixed so that the length-n corestriction of theta^2 is a signed copy of the
    (A_n) expression on every basis tuple (checked in the test-suite).
    """
    return -1 if comb(k, 2) % 2 else 1


def ainf_corestrictions(A: AInfinityStructure) -> dict:
    """Degree-1 corestrictions on W = down(V with negated grading)."""
    return {k: desuspend_map(_flip(op)).scaled(ainf_corestriction_sign(k))
            for k, op in A.ops.items()}


# -- Maurer-Cartan series -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MCElementSeries:
    """s = s_1 t + ... + s_n t^n with each s_k a degree-1 vector."""

    terms: tuple = ()

    def __post_init__(self):
        fixed = []
        for k, v in enumerate(self.terms, 1):
            vec = {tuple(b): to_rational(c) for b, c in dict(v).items() if c}
            for b in vec:
                if b[0] != 1:
                    raise DegreeMismatch(f"term s_{k} has a component of degree {b[0]}")
            fixed.append(vec)
        object.__setattr__(self, "terms", tuple(fixed))

    @property
    def order(self) -> int:
        return len(self.terms)

    def term(self, k: int) -> dict:
        return self.terms[k - 1] if 1 <= k <= self.order else {}

    def __eq__(self, other):
        if not isinstance(other, MCElementSeries):
            return NotImplemented
        return self.terms == other.terms


def _compositions(k: int, n: int) -> Iterable[tuple]:
    """Ordered n-tuples of positive integers summing to k."""
    if n == 1:
        yield (k,)
        return
    for first in range(1, k - n + 2):
        for rest in _compositions(k - first, n - 1):
            yield (first,) + rest


def _series_apply(ops: Mapping, s: MCElementSeries, k: int) -> dict:
    """t^k coefficient of sum_n (1/n!) op_n(s, ..., s)."""
    out: dict = {}
    for n in sorted(ops):
        if n > k:
            continue
        w = Fraction(1, factorial(n))
        for parts in _compositions(k, n):
            args = [s.term(p) for p in parts]
            if any(not a for a in args):
                continue
            _add_into(out, evaluate(ops[n], args), w)
    return out


def generalized_mc_residual(L: LInfinityStructure, s: MCElementSeries, k: int) -> dict:
    """t^k coefficient of l_1(s) + 1/2 l_2(s,s) + 1/6 l_3(s,s,s) + ..."""
    from .deformations import BadOrder
    if not 1 <= k <= s.order:
        raise BadOrder(f"order {k} outside 1..{s.order}")
    return _series_apply(L.ops, s, k)


def mc_residuals(L: LInfinityStructure, s: MCElementSeries) -> list:
    return [generalized_mc_residual(L, s, k) for k in range(1, s.order + 1)]


@dataclass(frozen=True, eq=False)
class WeakMorphism:
    """Components f_k : V'^(x k) -> V'' of degree 1 - k, chi-antisymmetric."""

    source: LInfinityStructure
    target: LInfinityStructure
    components: Mapping = field(default_factory=dict)

    def __post_init__(self):
        for k, f in self.components.items():
            if f.arity != k or f.degree != 1 - k:
                raise DegreeMismatch(f"f_{k} must have arity {k} and degree {1 - k}")
            if f.domain != self.source.space or f.codomain != self.target.space:
                raise DegreeMismatch(f"f_{k} does not map source to target")
            if not _is_antisymmetric(f):
                raise NotAntisymmetric(f"f_{k} is not chi-antisymmetric")

    @classmethod
    def strict(cls, source, target, linear: GradedMultilinearMap) -> "WeakMorphism":
        return cls(source, target, {1: linear})

    @classmethod
    def identity(cls, L: LInfinityStructure) -> "WeakMorphism":
        return cls(L, L, {1: GradedMultilinearMap.identity(L.space)})

    @classmethod
    def inclusion(cls, source: LInfinityStructure, target: LInfinityStructure, emb: Mapping):
        coeffs = {(b,): {emb[b]: Fraction(1)} for b in source.space.basis()}
        return cls(source, target, {1: GradedMultilinearMap(1, 0, source.space, target.space, coeffs)})

    def __eq__(self, other):
        if not isinstance(other, WeakMorphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and _same_ops(self.components, other.components))


@dataclass(frozen=True)
class PushforwardResult:
    series: MCElementSeries
    target_residuals: tuple

    @property
    def target_is_mc(self) -> bool:
        return not any(self.target_residuals)


def mc_pushforward(f: WeakMorphism, s: MCElementSeries) -> PushforwardResult:
    """MC(f)(s) = f_1(s) + 1/2 f_2(s,s) + ..., truncated at the order of s.

    The source residuals are checked first; the target residuals are computed
    and returned, never assumed.
    """
    for k in range(1, s.order + 1):
        r = generalized_mc_residual(f.source, s, k)
        if r:
            raise SourceNotMC(k, r)
    pushed = MCElementSeries(tuple(_series_apply(f.components, s, k) for k in range(1, s.order + 1)))
    return PushforwardResult(pushed, tuple(mc_residuals(f.target, pushed)))


def check_weak_morphism_linear(f: WeakMorphism):
    """Check (M_1) and (M_2) on all basis tuples.

    Both axioms are read off from F delta' = delta'' F for the coalgebra map
    F : Lambda(down V') -> Lambda(down V''), projected to down V'' on words of
    length 1 and 2.  With F_k o down^(x k) = down o f_k and delta' , delta''
    the corestrictions of the two structures:

      (M_1)  F_1 d'_1 = d''_1 F_1
      (M_2)  F_1 d'_2(w1,w2) + F_2(d'_1 w1, w2) + (-1)^|w1| F_2(w1, d'_1 w2)
             = d''_1 F_2(w1,w2) + d''_2(F_1 w1, F_1 w2)

    On V this (M_2) reads
      f_1 l'_2(u,v) - l''_2(f_1 u, f_1 v)
          = l''_1 f_2(u,v) + f_2(l'_1 u, v) + (-1)^|u| f_2(u, l'_1 v).

    Returns (True, None) or (False, (n, tuple of V' basis elements)).
    """
    src, tgt = linf_corestrictions(f.source), linf_corestrictions(f.target)
    F = {k: desuspend_map(c) for k, c in f.components.items()}
    W = f.source.space.shifted("down")

    def ap(m, args):
        return evaluate(m, args) if m is not None else {}

    def ap_vec(m, vec, others=(), first=True):
        out: dict = {}
        if m is None or not vec:
            return out
        return evaluate(m, [vec] + list(others)) if first else evaluate(m, list(others) + [vec])

    for w in W.basis():
        lhs = ap_vec(F.get(1), ap(src.get(1), [w]))
        rhs = ap_vec(tgt.get(1), ap(F.get(1), [w]))
        if lhs != rhs:
            return False, (1, ((w[0] + 1, w[1]),))
    for w1, w2 in basis_tuples(W, 2):
        lhs: dict = {}
        _add_into(lhs, ap_vec(F.get(1), ap(src.get(2), [w1, w2])), 1)
        _add_into(lhs, ap_vec(F.get(2), ap(src.get(1), [w1]), [w2]), 1)
        _add_into(lhs, ap_vec(F.get(2), ap(src.get(1), [w2]), [w1], first=False),
                  -1 if w1[0] % 2 else 1)
        rhs: dict = {}
        _add_into(rhs, ap_vec(tgt.get(1), ap(F.get(2), [w1, w2])), 1)
        f1a, f1b = ap(F.get(1), [w1]), ap(F.get(1), [w2])
        if tgt.get(2) is not None and f1a and f1b:
            _add_into(rhs, evaluate(tgt[2], [f1a, f1b]), 1)
        if lhs != rhs:
            return False, (2, ((w1[0] + 1, w1[1]), (w2[0] + 1, w2[1])))
    return True, None


# -- Hochschild dg-Lie algebra ----------------------------------------------------------

def hochschild_dg_lie(algebra, top_degree: int = 2) -> LInfinityStructure:
    """C^(*+1)(A, A) in Lie degrees 0..top_degree with l_1 = delta, l_2 = [-,-].

    Lie degree p holds arity-(p+1) cochains, basis in row-major coefficient
    order.  Outputs of degree above ``top_degree`` are dropped, which is the
    quotient by a dg-Lie ideal.
    """
    from .hochschild import Cochain, gerstenhaber_bracket, hochschild_differential
    d = algebra.dim
    dims = {p: d ** (p + 2) for p in range(top_degree + 1)}
    space = GradedSpace.from_dims(dims)
    basis = {p: [Cochain.basis_element(p + 1, d, i) for i in range(dims[p])] for p in dims}

    def vec(c: Cochain) -> dict:
        p = c.arity - 1
        return {(p, i): x for i, x in enumerate(c.to_vector()) if x}

    l1 = {}
    for p in range(top_degree):
        for i, c in enumerate(basis[p]):
            v = vec(hochschild_differential(algebra, c))
            if v:
                l1[((p, i),)] = v
    l2 = {}
    for p, q in itertools.product(dims, repeat=2):
        if p + q > top_degree:
            continue
        for (i, a), (j, b) in itertools.product(enumerate(basis[p]), enumerate(basis[q])):
            v = vec(gerstenhaber_bracket(a, b))
            if v:
                l2[((p, i), (q, j))] = v
    ops = {1: GradedMultilinearMap(1, 1, space, space, l1),
           2: GradedMultilinearMap(2, 0, space, space, l2)}
    return LInfinityStructure(space, ops)


def cochain_to_vector(c) -> dict:
    """Coordinates of a cochain in :func:`hochschild_dg_lie`'s space."""
    p = c.arity - 1
    return {(p, i): x for i, x in enumerate(c.to_vector()) if x}
