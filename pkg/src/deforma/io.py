"""Canonical JSON files for algebras, deformations and homotopy structures.

Every file carries ``schema_version`` (currently 1) and a ``kind``.  Rationals
are written as strings, ``"-3/7"`` or ``"5"``, never as floats.  The writer
sorts keys and puts a single space after separators, so a value written and
re-read serializes to the same bytes.
"""
from __future__ import annotations

import json
import os
import re
from fractions import Fraction
from typing import Any, Mapping

import numpy as np

from .deformations import GaugeElement, TruncatedDeformation
from .graded import GradedMultilinearMap, GradedSpace
from .hochschild import AlgebraStructure, Cochain
from .homotopy import AInfinityStructure, LInfinityStructure, MCElementSeries, WeakMorphism

SCHEMA_VERSION = 1

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


class SchemaError(ValueError):
    """A file that does not match the expected layout."""


# -- scalars -------------------------------------------------------------------

def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    # bool is an int subclass; floats are refused to keep input exact
    if isinstance(s, bool) or isinstance(s, float):
        raise SchemaError(f"expected a rational string, got {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise SchemaError(f"expected a rational string, got {s!r}")
    m = _RATIONAL.match(s.replace("−", "-"))
    if not m:
        raise SchemaError(f"not a rational: {s!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise SchemaError(f"zero denominator in {s!r}")
    return Fraction(int(m.group(1)), den)


def _int(obj, what: str, minimum: int | None = None) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise SchemaError(f"{what} must be an integer, got {obj!r}")
    if minimum is not None and obj < minimum:
        raise SchemaError(f"{what} must be >= {minimum}, got {obj}")
    return obj


def _field(obj: Mapping, key: str):
    if not isinstance(obj, Mapping) or key not in obj:
        raise SchemaError(f"missing field {key!r}")
    return obj[key]


# -- text ----------------------------------------------------------------------

def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(", ", ": "), ensure_ascii=False) + "\n"


def write_json(path, obj: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def read_json(path) -> dict:
    """Parse a file and check its schema version.  I/O errors propagate."""
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
    check_version(obj)
    return obj


def check_version(obj) -> None:
    if not isinstance(obj, Mapping):
        raise SchemaError("top level must be an object")
    v = _field(obj, "schema_version")
    if v != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {v!r}")


def _header(kind: str) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": kind}


def _nested(arr: np.ndarray):
    if arr.ndim == 1:
        return [format_rational(x) for x in arr]
    return [_nested(a) for a in arr]


def _dense(obj, shape: tuple, what: str) -> np.ndarray:
    out = np.empty(shape, dtype=object)

    def fill(node, idx):
        depth = len(idx)
        if depth == len(shape):
            out[idx] = parse_rational(node)
            return
        if not isinstance(node, list) or len(node) != shape[depth]:
            raise SchemaError(f"{what}: expected a list of length {shape[depth]} at depth {depth}")
        for i, child in enumerate(node):
            fill(child, idx + (i,))

    fill(obj, ())
    return out


# -- algebras and deformations ---------------------------------------------

def algebra_to_json(a: AlgebraStructure) -> dict:
    obj = _header("algebra")
    obj.update(dimension=a.dim, labels=list(a.labels), table=_nested(a.gamma))
    return obj


def algebra_from_json(obj: Mapping) -> AlgebraStructure:
    d = _int(_field(obj, "dimension"), "dimension", 1)
    labels = obj.get("labels") or []
    if labels and (len(labels) != d or not all(isinstance(s, str) for s in labels)):
        raise SchemaError(f"labels must be {d} strings")
    gamma = _dense(_field(obj, "table"), (d, d, d), "table")
    return AlgebraStructure(d, gamma, tuple(labels))


def cochain_to_json(c: Cochain) -> dict:
    return {"arity": c.arity, "values": _nested(c.values)}


def cochain_from_json(obj: Mapping, dim: int, arity: int) -> Cochain:
    if _int(_field(obj, "arity"), "arity") != arity:
        raise SchemaError(f"expected a cochain of arity {arity}")
    return Cochain(arity, dim, _dense(_field(obj, "values"), (dim,) * (arity + 1), "values"))


def _resolve(ref, base_dir: str | None, loader):
    """An inline object, or a path relative to the referencing file."""
    if isinstance(ref, str):
        path = ref if os.path.isabs(ref) or base_dir is None else os.path.join(base_dir, ref)
        return loader(read_json(path), os.path.dirname(path))
    check_version(ref)
    return loader(ref, base_dir)


def deformation_to_json(d: TruncatedDeformation) -> dict:
    obj = _header("deformation")
    obj.update(algebra=algebra_to_json(d.base), order=d.order,
               terms=[cochain_to_json(m) for m in d.terms])
    return obj


def deformation_from_json(obj: Mapping, base_dir: str | None = None) -> TruncatedDeformation:
    base = _resolve(_field(obj, "algebra"), base_dir, lambda o, _: algebra_from_json(o))
    order = _int(_field(obj, "order"), "order", 0)
    terms = _field(obj, "terms")
    if not isinstance(terms, list) or len(terms) != order:
        raise SchemaError(f"order is {order} but {len(terms) if isinstance(terms, list) else '?'} terms given")
    return TruncatedDeformation(base, tuple(cochain_from_json(t, base.dim, 2) for t in terms))


def gauge_to_json(x: GaugeElement) -> dict:
    obj = _header("gauge")
    obj.update(dimension=x.dim, order=x.order, terms=[cochain_to_json(c) for c in x.terms])
    return obj


def gauge_from_json(obj: Mapping, base_dir: str | None = None) -> GaugeElement:
    d = _int(_field(obj, "dimension"), "dimension", 1)
    order = _int(_field(obj, "order"), "order", 0)
    terms = _field(obj, "terms")
    if not isinstance(terms, list) or len(terms) != order:
        raise SchemaError(f"order is {order} but the term count differs")
    return GaugeElement(d, tuple(cochain_from_json(t, d, 1) for t in terms))


# -- graded structures -------------------------------------------------------

def _space_to_json(space: GradedSpace) -> dict:
    return {str(d): n for d, n in space.components}


def _labels_to_json(space: GradedSpace) -> dict:
    return {str(d): list(ls) for d, ls in space.labels}


def _space_from_json(obj, labels=None) -> GradedSpace:
    if not isinstance(obj, Mapping):
        raise SchemaError("degrees must map degree to dimension")
    try:
        dims = {int(k): _int(v, f"dimension in degree {k}", 0) for k, v in obj.items()}
        labs = {int(k): v for k, v in (labels or {}).items()}
    except ValueError as exc:
        raise SchemaError(f"bad degree key: {exc}") from exc
    for d, ls in labs.items():
        if not isinstance(ls, list) or len(ls) != dims.get(d, 0) or not all(isinstance(x, str) for x in ls):
            raise SchemaError(f"labels in degree {d} must be {dims.get(d, 0)} strings")
    return GradedSpace.from_dims(dims, labs or None)


def _vector_to_json(vec: Mapping) -> list:
    return [[d, i, format_rational(c)] for (d, i), c in sorted(vec.items())]


def _vector_from_json(obj) -> dict:
    if not isinstance(obj, list):
        raise SchemaError("a vector is a list of [degree, index, rational]")
    out: dict = {}
    for entry in obj:
        if not isinstance(entry, list) or len(entry) != 3:
            raise SchemaError(f"bad vector entry {entry!r}")
        b = (_int(entry[0], "degree"), _int(entry[1], "index", 0))
        out[b] = out.get(b, Fraction(0)) + parse_rational(entry[2])
    return {b: c for b, c in out.items() if c}


def _map_to_json(m: GradedMultilinearMap) -> list:
    return [{"inputs": [list(b) for b in inputs], "output": _vector_to_json(out)}
            for inputs, out in sorted(m.coeffs.items())]


def _map_from_json(obj, arity: int, degree: int, domain, codomain) -> GradedMultilinearMap:
    if not isinstance(obj, list):
        raise SchemaError(f"arity-{arity} entries must be a list")
    entries = []
    for e in obj:
        ins = _field(e, "inputs")
        if not isinstance(ins, list) or not all(isinstance(b, list) and len(b) == 2 for b in ins):
            raise SchemaError(f"bad inputs {ins!r}")
        inputs = tuple((_int(b[0], "degree"), _int(b[1], "index", 0)) for b in ins)
        entries.append((inputs, _vector_from_json(_field(e, "output"))))
    try:
        return GradedMultilinearMap.build(arity, degree, domain, codomain, entries)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def _ops_from_json(obj, degree_of, domain, codomain) -> dict:
    if not isinstance(obj, Mapping):
        raise SchemaError("ops must map arity to entries")
    out = {}
    for k, entries in obj.items():
        try:
            arity = int(k)
        except ValueError as exc:
            raise SchemaError(f"bad arity key {k!r}") from exc
        if arity < 1:
            raise SchemaError(f"arity must be >= 1, got {arity}")
        out[arity] = _map_from_json(entries, arity, degree_of(arity), domain, codomain)
    return out


def structure_to_json(s) -> dict:
    kind = "linf" if isinstance(s, LInfinityStructure) else "ainf"
    obj = _header(kind)
    if s.space.labels:
        obj["labels"] = _labels_to_json(s.space)
    obj.update(degrees=_space_to_json(s.space),
               ops={str(k): _map_to_json(m) for k, m in sorted(s.ops.items())})
    return obj


def structure_from_json(obj: Mapping, base_dir: str | None = None):
    """LInfinityStructure (projected onto its antisymmetric part) or AInfinityStructure."""
    kind = _field(obj, "kind")
    if kind == "algebra":
        return AInfinityStructure.from_algebra(algebra_from_json(obj))
    space = _space_from_json(_field(obj, "degrees"), obj.get("labels"))
    if kind == "linf":
        return LInfinityStructure.from_ops(space, _ops_from_json(obj.get("ops", {}), lambda k: 2 - k, space, space))
    if kind == "ainf":
        return AInfinityStructure(space, _ops_from_json(obj.get("ops", {}), lambda k: k - 2, space, space))
    raise SchemaError(f"unknown structure kind {kind!r}")


def series_to_json(s: MCElementSeries) -> dict:
    obj = _header("mc-series")
    obj.update(order=s.order, terms=[_vector_to_json(v) for v in s.terms])
    return obj


def series_from_json(obj: Mapping, base_dir: str | None = None) -> MCElementSeries:
    order = _int(_field(obj, "order"), "order", 0)
    terms = _field(obj, "terms")
    if not isinstance(terms, list) or len(terms) != order:
        raise SchemaError(f"order is {order} but the term count differs")
    try:
        return MCElementSeries(tuple(_vector_from_json(t) for t in terms))
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def morphism_to_json(f: WeakMorphism) -> dict:
    obj = _header("linf-morphism")
    obj.update(source=structure_to_json(f.source), target=structure_to_json(f.target),
               components={str(k): _map_to_json(m) for k, m in sorted(f.components.items())})
    return obj


def morphism_from_json(obj: Mapping, base_dir: str | None = None) -> WeakMorphism:
    src = _resolve(_field(obj, "source"), base_dir, structure_from_json)
    tgt = _resolve(_field(obj, "target"), base_dir, structure_from_json)
    if not isinstance(src, LInfinityStructure) or not isinstance(tgt, LInfinityStructure):
        raise SchemaError("morphism source and target must be linf structures")
    comps = _ops_from_json(_field(obj, "components"), lambda k: 1 - k, src.space, tgt.space)
    try:
        return WeakMorphism(src, tgt, comps)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


_LOADERS = {
    "algebra": lambda o, _: algebra_from_json(o),
    "deformation": deformation_from_json,
    "gauge": gauge_from_json,
    "linf": structure_from_json,
    "ainf": structure_from_json,
    "mc-series": series_from_json,
    "linf-morphism": morphism_from_json,
}

_WRITERS = [
    (AlgebraStructure, algebra_to_json),
    (TruncatedDeformation, deformation_to_json),
    (GaugeElement, gauge_to_json),
    (LInfinityStructure, structure_to_json),
    (AInfinityStructure, structure_to_json),
    (MCElementSeries, series_to_json),
    (WeakMorphism, morphism_to_json),
]


def from_json(obj: Mapping, base_dir: str | None = None):
    check_version(obj)
    kind = obj.get("kind")
    if kind is None:
        # kind may be omitted on algebra and deformation files
        kind = "deformation" if "terms" in obj and "algebra" in obj else "algebra"
    if kind not in _LOADERS:
        raise SchemaError(f"unknown kind {kind!r}")
    try:
        return _LOADERS[kind](obj, base_dir)
    except SchemaError:
        raise
    except (ValueError, TypeError, KeyError, IndexError) as exc:
        raise SchemaError(f"{kind}: {exc}") from exc


def to_json(value) -> dict:
    for cls, fn in _WRITERS:
        if isinstance(value, cls):
            return fn(value)
    raise TypeError(f"no file format for {type(value).__name__}")


def load(path):
    """Read any supported file; paths inside it resolve relative to its directory."""
    return from_json(read_json(path), os.path.dirname(os.path.abspath(path)))


def save(path, value) -> None:
    write_json(path, to_json(value))
