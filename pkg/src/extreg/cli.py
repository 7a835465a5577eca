"""Command-line front end.

Subcommands: wedge, ann, betti, verify.  Output is deterministic byte for
byte for identical invocations.  Exit codes: 0 success / verification
pass, 1 verification failure, 2 expression or argument parse error,
3 invalid field, 4 size guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .exterior import AlgebraContext, render_element
from .family import (FAMILY_NAME, characteristic_report, characteristic_scan,
                     verify_family)
from .fields import FieldParseError, parse_field
from .parsing import ExpressionError, parse_element
from .resolution import (SizeGuardError, annihilator, betti_table,
                         minimal_generators, regularity_lower_bound)

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_PARSE = 2
EXIT_FIELD = 3
EXIT_SIZE = 4

SCHEMA_VERSION = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="extreg",
        description="Exact exterior-algebra computations: wedge products, "
                    "annihilators, truncated Betti tables, regularity bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="Q",
                        help='coefficient field: "Q" or "Fp" (e.g. F2, F5)')
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--allow-large", action="store_true",
                        help="lift the 12-variable size guard (prime fields only)")

    withvars = argparse.ArgumentParser(add_help=False, parents=[common])
    withvars.add_argument("--vars", required=True,
                          help="comma-separated variable names, order fixes all signs")

    p = sub.add_parser("wedge", parents=[withvars],
                       help="wedge two expressions")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    p = sub.add_parser("ann", parents=[withvars],
                       help="degreewise annihilator of a homogeneous element")
    p.add_argument("--elem", required=True)
    p.add_argument("--dmax", type=int, required=True)

    p = sub.add_parser("betti", parents=[withvars],
                       help="truncated Betti table of a cyclic quotient")
    p.add_argument("--ideal", required=True,
                   help="comma-separated homogeneous generator expressions")
    p.add_argument("--imax", type=int, required=True)
    p.add_argument("--jmax", type=int, required=True)

    p = sub.add_parser("verify", parents=[common],
                       help="run the built-in family verification")
    p.add_argument("--family", required=True,
                   help=f'family name (supported: "{FAMILY_NAME}")')
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--remark", action="store_true",
                   help="add the characteristic-dependent checks")
    p.add_argument("--scan", default=None,
                   help="comma-separated primes for a characteristic scan")
    return parser


def _context(args) -> AlgebraContext:
    names = tuple(v.strip() for v in args.vars.split(","))
    if any(not v for v in names):
        raise ExpressionError("empty variable name in --vars")
    return AlgebraContext(names, parse_field(args.field))


def _emit(out, text: str):
    out.write(text)
    if not text.endswith("\n"):
        out.write("\n")


def _emit_json(out, payload: dict):
    _emit(out, json.dumps(payload, indent=2))


def _cmd_wedge(args, out) -> int:
    ctx = _context(args)
    result = parse_element(args.a, ctx).wedge(parse_element(args.b, ctx))
    if args.format == "json":
        _emit_json(out, {"schema": SCHEMA_VERSION, "command": "wedge",
                         "result": render_element(result)})
    else:
        _emit(out, render_element(result))
    return EXIT_OK


def _cmd_ann(args, out) -> int:
    ctx = _context(args)
    elem = parse_element(args.elem, ctx)
    if args.dmax < 0:
        raise ExpressionError("--dmax must be nonnegative")
    sub = annihilator(elem, args.dmax, allow_large=args.allow_large)
    gens = minimal_generators(sub)
    dims = {d: sub.dim(d) for d in range(args.dmax + 1)}
    counts = {d: count for d, (count, _) in gens.items()}
    reps = {d: [render_element(vec[0]) for vec in vecs]
            for d, (count, vecs) in gens.items() if count}
    if args.format == "json":
        _emit_json(out, {
            "schema": SCHEMA_VERSION,
            "command": "ann",
            "field": ctx.field.name,
            "vars": list(ctx.var_names),
            "dmax": args.dmax,
            "dims": {str(d): dims[d] for d in sorted(dims)},
            "min_gens": {str(d): counts[d] for d in sorted(counts)},
            "generators": {str(d): reps[d] for d in sorted(reps)},
        })
        return EXIT_OK
    lines = [f"annihilator of {render_element(elem)} over {ctx.field.name}, "
             f"degrees 0..{args.dmax}"]
    lines.append("degree  dim  new_generators")
    for d in sorted(dims):
        lines.append(f"{d:>6}  {dims[d]:>3}  {counts.get(d, 0):>3}")
    for d in sorted(reps):
        for text in reps[d]:
            lines.append(f"  generator [degree {d}] {text}")
    _emit(out, "\n".join(lines))
    return EXIT_OK


def _cmd_betti(args, out) -> int:
    ctx = _context(args)
    gens = [parse_element(part, ctx) for part in args.ideal.split(",")]
    if args.imax < 0 or args.jmax < 0:
        raise ExpressionError("--imax and --jmax must be nonnegative")
    table = betti_table(gens, args.imax, args.jmax,
                        allow_large=args.allow_large)
    reg = regularity_lower_bound(table)
    if args.format == "json":
        _emit_json(out, {"schema": SCHEMA_VERSION, **table.to_json_dict()})
        return EXIT_OK
    lines = [f"betti table of E/({args.ideal}) over {ctx.field.name}, "
             f"window i<={args.imax}, j<={args.jmax}",
             table.render(),
             f"reg >= {reg} (lower bound; table truncated to the window)"]
    _emit(out, "\n".join(lines))
    return EXIT_OK


def _cmd_verify(args, out) -> int:
    if args.family != FAMILY_NAME:
        raise ExpressionError(
            f'unknown family "{args.family}" (supported: "{FAMILY_NAME}")')
    field = parse_field(args.field)
    report = verify_family(args.n, field, allow_large=args.allow_large)
    remark = None
    if args.remark:
        remark = characteristic_report(args.n, field,
                                       allow_large=args.allow_large)
    scan = None
    if args.scan is not None:
        try:
            primes = [int(p) for p in args.scan.split(",")]
        except ValueError:
            raise ExpressionError(f'malformed --scan list "{args.scan}"') from None
        scan = characteristic_scan(args.n, primes,
                                   allow_large=args.allow_large)

    ok = report.passed and (remark is None or remark.passed is not False)

    if args.format == "json":
        payload = {"schema": SCHEMA_VERSION, **report.to_json_dict()}
        if remark is not None:
            payload["remark"] = remark.to_json_dict()
        if scan is not None:
            payload["scan"] = [
                {"p": p, "min_gen_degrees": {str(d): c for d, c in sorted(row.items())}}
                for p, row in scan]
        _emit_json(out, payload)
        return EXIT_OK if ok else EXIT_VERIFY_FAIL

    lines = [f"family {FAMILY_NAME} verification: n={report.n} over {field.name}"]
    lines.append(f"witness s*f = 0: {'ok' if report.witness_ok else 'FAILED'}")
    counts = ", ".join(f"{d}: {c}" for d, c in sorted(report.min_gen_degrees.items()))
    lines.append(f"annihilator minimal generators by degree: {{{counts}}}")
    lines.append("degree-n generator present: "
                 + ("yes" if report.has_degree_n_generator else "NO"))
    lines.append(f"betti table (window i<={report.window[0]}, j<={report.window[1]}):")
    lines.append(report.betti.render())
    lines.append(f"regularity: reg >= {report.reg_lower_bound} "
                 "(lower bound; table truncated to the window)")
    if remark is not None:
        lines.append(f"characteristic checks (char {field.characteristic}, "
                     f"mode {remark.mode}):")
        counts = ", ".join(f"{d}: {c}" for d, c in sorted(remark.min_gen_degrees.items()))
        lines.append(f"  minimal generators by degree: {{{counts}}}")
        if remark.f_square_zero is not None:
            lines.append(f"  f*f = 0: {'yes' if remark.f_square_zero else 'no'}")
        if remark.passed is None:
            lines.append("  reported without assertion")
        else:
            lines.append(f"  result: {'ok' if remark.passed else 'FAILED'}")
    if scan is not None:
        lines.append("characteristic scan:")
        for p, row in scan:
            counts = ", ".join(f"{d}: {c}" for d, c in sorted(row.items()))
            lines.append(f"  p={p}: {{{counts}}}")
    lines.append(f"result: {'PASS' if ok else 'FAIL'}")
    _emit(out, "\n".join(lines))
    return EXIT_OK if ok else EXIT_VERIFY_FAIL


_HANDLERS = {
    "wedge": _cmd_wedge,
    "ann": _cmd_ann,
    "betti": _cmd_betti,
    "verify": _cmd_verify,
}


def run(argv, out=None, err=None) -> int:
    """Execute one CLI invocation; returns the exit code."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_PARSE
    try:
        return _HANDLERS[args.command](args, out)
    except ExpressionError as e:
        _emit(err, f"error: {e}")
        return EXIT_PARSE
    except FieldParseError as e:
        _emit(err, f"error: invalid field: {e}")
        return EXIT_FIELD
    except SizeGuardError as e:
        _emit(err, f"error: size guard: {e}")
        return EXIT_SIZE
    except (ValueError, KeyError) as e:
        _emit(err, f"error: {e}")
        return EXIT_PARSE


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
