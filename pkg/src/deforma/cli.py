"""Command line front end.

Exit codes: 0 the property holds or the output was written, 1 the property
fails (a mathematical answer), 2 operational error (I/O, parse, schema,
wrong kind of file).
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import io
from .deformations import (BaseMismatch, BaseNotCommutative, GaugeElement, InvalidDeformation,
                           NotACocycle, OrderMismatch, OrderTooLow, TruncatedDeformation,
                           classify_infinitesimal, gauge_apply, gauge_search, maurer_cartan_residual,
                           obstruction, poisson_limit, validate_deformation)
from .hochschild import AlgebraStructure, NotAssociative, cohomology, is_associative
from .homotopy import (AInfinityStructure, LInfinityStructure, SourceNotMC, WeakMorphism,
                       MCElementSeries, ainf_corestrictions, check_a_infinity, check_l_infinity,
                       linf_corestrictions, lift_to_coderivation, mc_pushforward)

OK, FAIL, ERROR = 0, 1, 2


class UsageError(Exception):
    """Wrong kind of input for a subcommand; exit 2."""


def _load(path: str, *kinds):
    value = io.load(path)
    if kinds and not isinstance(value, kinds):
        names = " or ".join(k.__name__ for k in kinds)
        raise UsageError(f"{path}: expected {names}, got {type(value).__name__}")
    return value


def _fmt(vec) -> str:
    return "[" + ", ".join(io.format_rational(x) for x in vec) + "]"


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {v}")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _basis(space, b) -> str:
    return f"{space.label(b)}(deg {b[0]})"


# -- commands ------------------------------------------------------------------

def cmd_check_assoc(args) -> int:
    a = _load(args.file, AlgebraStructure)
    ok, w = is_associative(a)
    if ok:
        print(f"associative: yes (dimension {a.dim})")
        return OK
    i, j, k, r = w
    print(f"associative: no, (e_i e_j) e_k != e_i (e_j e_k) in coordinate r at (i,j,k,r) = ({i}, {j}, {k}, {r})")
    print(f"  ({a.labels[i]} {a.labels[j]}) {a.labels[k]} vs {a.labels[i]} ({a.labels[j]} {a.labels[k]}), coordinate {a.labels[r]}")
    return FAIL


def cmd_cohomology(args) -> int:
    a = _load(args.file, AlgebraStructure)
    n = args.degree
    try:
        rep = cohomology(a, n)
    except NotAssociative as exc:
        print(f"not associative: {exc}")
        return FAIL
    print(f"HH^{n}: dim C^{n} = {rep.dim_cochains}, dim Ker = {rep.dim_cocycles}, "
          f"dim Im = {rep.dim_coboundaries}, betti = {rep.betti}")
    if n == 0:
        print("  H^0 = {m : a m = m a for all a}")
    if n == 1:
        print(f"  Der(A) = {rep.dim_cocycles}, IDer(A) = {rep.dim_coboundaries}")
    for idx, c in enumerate(rep.representatives):
        print(f"  representative {idx}: {_fmt(c.to_vector())}")
    if args.json_out:
        obj = {
            "schema_version": io.SCHEMA_VERSION, "kind": "cohomology-report", "degree": n,
            "dim_cochains": rep.dim_cochains, "dim_cocycles": rep.dim_cocycles,
            "dim_coboundaries": rep.dim_coboundaries, "betti": rep.betti,
            "representatives": [io.cochain_to_json(c) for c in rep.representatives],
        }
        if n == 1:
            obj["derivations"] = rep.dim_cocycles
            obj["inner_derivations"] = rep.dim_coboundaries
        io.write_json(args.json_out, obj)
    return OK


def _deformation(path) -> TruncatedDeformation:
    return _load(path, TruncatedDeformation)


def _deform_validate(args) -> int:
    d = _deformation(args.file)
    ok, w = validate_deformation(d)
    if ok:
        print(f"valid deformation through order {d.order}")
        return OK
    k, triple = w
    print(f"invalid: (D_{k}) fails on basis triple {triple}")
    return FAIL


def _deform_extend(args) -> int:
    d = _deformation(args.file)
    target = args.order if args.order is not None else d.order + 1
    if target <= d.order:
        raise UsageError(f"--order {target} is not above the current order {d.order}")
    while d.order < target:
        ob = obstruction(d)
        if ob.extension_term is None:
            print(f"obstructed at order {d.order + 1}: [O_{d.order}] has H^3 coordinates {_fmt(ob.class_coords)}")
            return FAIL
        d = d.extended_by(ob.extension_term)
        print(f"extended to order {d.order}")
    io.save(args.out, d)
    return OK


def _deform_equivalent(args) -> int:
    d1, d2 = _deformation(args.file), _deformation(args.other)
    res = gauge_search(d1, d2)
    if not res.found:
        print(f"no gauge equivalence found: first inconsistent order {res.failed_order}")
        return FAIL
    print(f"equivalent through order {d1.order}")
    if args.out:
        io.save(args.out, res.element)
    return OK


def _deform_classify(args) -> int:
    d = _deformation(args.file)
    if d.order < 1:
        raise UsageError("classify needs a deformation of order >= 1")
    coords = classify_infinitesimal(d.base, d.mu(1))
    print(f"H^2 coordinates of [mu_1]: {_fmt(coords)}")
    return OK


def _deform_gauge_apply(args) -> int:
    x = _load(args.file, GaugeElement)
    d = _deformation(args.other)
    io.save(args.out, gauge_apply(x, d))
    print(f"wrote transformed deformation of order {d.order}")
    return OK


def _deform_mc_residual(args) -> int:
    d = _deformation(args.file)
    top = d.order if args.order is None else args.order
    if top > d.order:
        raise UsageError(f"--order {top} exceeds the deformation order {d.order}")
    bad = 0
    for k in range(1, top + 1):
        n = maurer_cartan_residual(d, k).nonzero_count()
        bad += n
        print(f"order {k}: {n} nonzero entries")
    return OK if bad == 0 else FAIL


def _deform_poisson(args) -> int:
    d = _deformation(args.file)
    rep = poisson_limit(d)
    for name in ("antisymmetry", "jacobi", "leibniz"):
        ok = getattr(rep, f"{name}_ok")
        w = getattr(rep, f"{name}_witness")
        print(f"{name}: {'ok' if ok else 'fails'}" + ("" if ok else f" at {w}"))
    return OK if rep.all_ok else FAIL


_DEFORM = {
    "validate": _deform_validate,
    "extend": _deform_extend,
    "equivalent": _deform_equivalent,
    "classify": _deform_classify,
    "gauge-apply": _deform_gauge_apply,
    "mc-residual": _deform_mc_residual,
    "poisson": _deform_poisson,
}


def cmd_deform(args) -> int:
    needs_other = {"equivalent", "gauge-apply"}
    needs_out = {"extend", "gauge-apply"}
    if args.sub in needs_other and not args.other:
        raise UsageError(f"deform {args.sub} needs two files")
    if args.sub in needs_out and not args.out:
        raise UsageError(f"deform {args.sub} needs --out")
    try:
        return _DEFORM[args.sub](args)
    except (InvalidDeformation, NotACocycle, BaseNotCommutative, NotAssociative) as exc:
        print(f"{args.sub}: {exc}")
        return FAIL
    except (OrderMismatch, BaseMismatch, OrderTooLow) as exc:
        raise UsageError(str(exc)) from exc


def _witness(space, w) -> str:
    n, tup = w
    return f"n = {n}, tuple ({', '.join(_basis(space, b) for b in tup)})"


def _structure(path, *kinds):
    value = _load(path, AlgebraStructure, *kinds)
    if isinstance(value, AlgebraStructure):
        # an ungraded algebra is an A-infinity structure with mu_2 only
        value = AInfinityStructure.from_algebra(value)
        if not isinstance(value, kinds):
            raise UsageError(f"{path}: an algebra file cannot be read as an L-infinity structure")
    return value


def _hom_linf(args) -> int:
    L = _structure(args.file, LInfinityStructure)
    if L.projected:
        print("note: operations were projected onto their chi-antisymmetric part")
    ok, w = check_l_infinity(L, args.max_n)
    if ok:
        print(f"(L_n) holds for n <= {args.max_n}")
        return OK
    print(f"(L_n) fails at {_witness(L.space, w)}")
    return FAIL


def _hom_ainf(args) -> int:
    A = _structure(args.file, AInfinityStructure)
    ok, w = check_a_infinity(A, args.max_n)
    if ok:
        print(f"(A_n) holds for n <= {args.max_n}")
        return OK
    print(f"(A_n) fails at {_witness(A.space, w)}")
    return FAIL


def _hom_coder(args) -> int:
    S = _structure(args.file, LInfinityStructure, AInfinityStructure)
    if isinstance(S, LInfinityStructure):
        lift = lift_to_coderivation(linf_corestrictions(S), "symmetric", args.truncation)
    else:
        lift = lift_to_coderivation(ainf_corestrictions(S), "tensor", args.truncation)
    flavor = lift.theta.flavor
    if lift.square_vanishes:
        print(f"theta^2 = 0 on words of length <= {args.truncation} ({flavor} coalgebra)")
        return OK
    word = ", ".join(_basis(S.space, (b[0] + 1, b[1])) for b in lift.first_nonzero)
    print(f"theta^2 != 0 ({flavor} coalgebra): first nonzero on a word of length "
          f"{lift.first_nonzero_length}, the desuspension of ({word})")
    return FAIL


def _hom_push(args) -> int:
    f = _load(args.file, WeakMorphism)
    s = _load(args.other, MCElementSeries)
    try:
        res = mc_pushforward(f, s)
    except SourceNotMC as exc:
        print(f"source series is not Maurer-Cartan: residual nonzero at order {exc.order}")
        return FAIL
    io.save(args.out, res.series)
    for k, r in enumerate(res.target_residuals, 1):
        print(f"target order {k}: {len(r)} nonzero entries")
    if res.target_is_mc:
        print(f"pushed series is Maurer-Cartan through order {s.order}")
        return OK
    print("pushed series is not Maurer-Cartan in the target")
    return FAIL


_HOMOTOPY = {
    "linf-check": _hom_linf,
    "ainf-check": _hom_ainf,
    "coder-lift": _hom_coder,
    "mc-push": _hom_push,
}


def cmd_homotopy(args) -> int:
    if args.sub == "mc-push" and not (args.other and args.out):
        raise UsageError("homotopy mc-push needs a morphism file, a series file and --out")
    return _HOMOTOPY[args.sub](args)


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="deforma", description="Exact deformation theory of finite-dimensional algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check-assoc", help="check associativity of an algebra file")
    s.add_argument("file")
    s.set_defaults(func=cmd_check_assoc)

    s = sub.add_parser("cohomology", help="Hochschild cohomology HH^n(A, A)")
    s.add_argument("file")
    s.add_argument("--degree", type=_nonneg, required=True)
    s.add_argument("--json-out", metavar="PATH")
    s.set_defaults(func=cmd_cohomology)

    s = sub.add_parser("deform", help="formal deformations")
    s.add_argument("sub", choices=sorted(_DEFORM))
    s.add_argument("file", help="deformation file (gauge file for gauge-apply)")
    s.add_argument("other", nargs="?", help="second deformation file (equivalent, gauge-apply)")
    s.add_argument("--order", type=_positive)
    s.add_argument("--out", metavar="PATH")
    s.set_defaults(func=cmd_deform)

    s = sub.add_parser("homotopy", help="L-infinity and A-infinity structures")
    s.add_argument("sub", choices=sorted(_HOMOTOPY))
    s.add_argument("file", help="structure file (morphism file for mc-push)")
    s.add_argument("other", nargs="?", help="series file for mc-push")
    s.add_argument("--max-n", type=_positive, default=5)
    s.add_argument("--truncation", type=_positive, default=4)
    s.add_argument("--out", metavar="PATH")
    s.set_defaults(func=cmd_homotopy)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (OSError, io.SchemaError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR
    except ValueError as exc:
        # shape and range errors raised while building objects from input
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
