"""Command line front end.

Subcommands: valuate (apply a stored classified valuation to one polytope),
fit (recover coefficients from a stored valuation or an external oracle),
verify (run the seeded check suite), demo-usc (semicontinuity tables).

Exit codes are a stable contract: 0 pass, 1 check failure, 2 usage or
parse error, 3 external oracle failure.  Scalars cross the boundary as
exact strings, never as floats.
"""

from __future__ import annotations

import argparse
import functools
import json
import shlex
import subprocess
import sys
from fractions import Fraction

from .exactnum import Scalar, ScalarParseError
from .harness import (
    fit_classification,
    fit_validation_polytopes,
    probe_polytopes,
    run_suite,
    usc_sequences,
)
from .polytope import Polytope
from .polytope import from_json as polytope_from_json
from .polytope import to_json as polytope_to_json
from .valuation import evaluate
from .valuation import from_json as valuation_from_json


class UsageError(Exception):
    pass


class OracleError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _dimension(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 2 <= value <= 4:
        raise argparse.ArgumentTypeError("supported dimensions are 2 to 4")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slval",
        description="exact shear-invariant valuations on rational polytopes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    valuate = sub.add_parser("valuate", help="evaluate a stored valuation on a polytope file")
    valuate.add_argument("--in", dest="polytope_path", required=True, metavar="FILE")
    valuate.add_argument("--valuation", required=True, metavar="FILE")
    valuate.add_argument("--format", choices=("json", "text"), default="text")
    valuate.set_defaults(func=_cmd_valuate)

    fit = sub.add_parser("fit", help="recover the five coefficients of a valuation")
    fit.add_argument("--n", type=_dimension, default=2)
    fit.add_argument("--seed", type=int, default=0)
    fit.add_argument("--cases", type=_positive, default=100,
                     help="validation polytopes for the residual")
    source = fit.add_mutually_exclusive_group(required=True)
    source.add_argument("--valuation", metavar="FILE",
                        help="self-test against a stored valuation")
    source.add_argument("--oracle-cmd", metavar="CMD",
                        help="external command fed polytope JSON lines on stdin")
    fit.add_argument("--format", choices=("json", "text"), default="json")
    fit.set_defaults(func=_cmd_fit)

    verify = sub.add_parser("verify", help="run the seeded check suite")
    verify.add_argument("--n", type=_dimension, default=2)
    verify.add_argument("--field-d", type=int, default=2,
                        help="discriminant for the surd checks, 0 to skip them")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--cases", type=_positive, default=20)
    verify.add_argument("--inject-broken", action="store_true",
                        help="add a deliberately broken plugin to exercise witnesses")
    verify.add_argument("--format", choices=("json", "text"), default="json")
    verify.set_defaults(func=_cmd_verify)

    demo = sub.add_parser("demo-usc", help="semicontinuity tables for the origin terms")
    demo.add_argument("--c0p", default="1", metavar="SCALAR")
    demo.add_argument("--d0", default="0", metavar="SCALAR")
    demo.add_argument("--steps", type=_positive, default=4)
    demo.add_argument("--format", choices=("json", "text"), default="text")
    demo.set_defaults(func=_cmd_demo_usc)

    return parser


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}")


def _load_polytope(path: str) -> Polytope:
    try:
        return polytope_from_json(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path} is not a polytope file: {exc}")


def _load_valuation(path: str):
    try:
        return valuation_from_json(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path} is not a valuation file: {exc}")


def _cmd_valuate(args: argparse.Namespace) -> int:
    poly = _load_polytope(args.polytope_path)
    val = _load_valuation(args.valuation)
    result = evaluate(val, poly)
    if args.format == "json":
        print(json.dumps({"value": str(result)}, sort_keys=True))
    else:
        print(result)
    return 0


def _oracle_table(cmd: str, polys: list[Polytope]) -> dict[Polytope, Scalar]:
    payload = "".join(json.dumps(polytope_to_json(P), sort_keys=True) + "\n" for P in polys)
    try:
        proc = subprocess.run(
            shlex.split(cmd), input=payload, capture_output=True, text=True
        )
    except OSError as exc:
        raise OracleError(f"cannot run {cmd!r}: {exc}")
    if proc.returncode != 0:
        detail = proc.stderr.strip() or f"exit code {proc.returncode}"
        raise OracleError(f"oracle failed: {detail}")
    lines = [line for line in proc.stdout.splitlines() if line.strip()]
    if len(lines) != len(polys):
        raise OracleError(
            f"oracle answered {len(lines)} of {len(polys)} polytopes"
        )
    table = {}
    for poly, line in zip(polys, lines):
        try:
            table[poly] = Scalar.parse(line.strip())
        except ScalarParseError as exc:
            raise OracleError(f"unreadable oracle value {line.strip()!r}: {exc}")
    return table


def _cmd_fit(args: argparse.Namespace) -> int:
    if args.valuation is not None:
        val = _load_valuation(args.valuation)
        blackbox = functools.partial(evaluate, val)
    else:
        polys = list(probe_polytopes(args.n))
        polys += fit_validation_polytopes(args.n, args.seed, args.cases)
        table = _oracle_table(args.oracle_cmd, polys)
        blackbox = table.__getitem__
    report = fit_classification(blackbox, args.n, seed=args.seed,
                                validation_count=args.cases)
    exact = report.residual_max.is_zero()
    if args.format == "json":
        print(json.dumps({
            "coefficients": [str(c) for c in report.coefficients],
            "probe_values": [str(v) for v in report.probe_values],
            "residual_max": str(report.residual_max),
        }, sort_keys=True))
    else:
        names = ("c0", "c0p", "cn", "d0", "dn")
        for name, c in zip(names, report.coefficients):
            print(f"{name} = {c}")
        print(f"residual_max = {report.residual_max}")
    return 0 if exact else 1


def _cmd_verify(args: argparse.Namespace) -> int:
    all_pass = True
    for line in run_suite(args.n, seed=args.seed, cases=args.cases,
                          field_d=args.field_d, include_broken=args.inject_broken):
        all_pass = all_pass and line["pass"]
        if args.format == "json":
            print(json.dumps(line, sort_keys=True))
        else:
            verdict = "PASS" if line["pass"] else "FAIL"
            extra = f" [{line['label']}]" if "label" in line else ""
            print(f"{verdict} {line['check']} seed={line['seed']}{extra}")
            if "witness" in line:
                print(f"     witness: {json.dumps(line['witness'], sort_keys=True)}")
    return 0 if all_pass else 1


def _cmd_demo_usc(args: argparse.Namespace) -> int:
    try:
        c0p = Scalar.parse(args.c0p)
        d0 = Scalar.parse(args.d0)
    except ScalarParseError as exc:
        raise UsageError(str(exc))
    scales = [Scalar(Fraction(1, 2**k)) for k in range(args.steps)]
    report = usc_sequences(c0p, d0, scales)
    verdict = (
        "not upper semicontinuous"
        if report["violation"]
        else "upper semicontinuous along tested sequences"
    )
    if args.format == "json":
        payload = {
            "c0p": str(c0p),
            "d0": str(d0),
            "scales": [str(s) for s in scales],
            "verdict": verdict,
        }
        for key in ("sequence1", "sequence2"):
            payload[key] = {
                "values": [str(v) for v in report[key]["values"]],
                "limit_value": str(report[key]["limit_value"]),
                "violation": report[key]["violation"],
            }
        print(json.dumps(payload, sort_keys=True))
    else:
        tables = (
            ("shrinking segments [-s*e1, s*e1], limit {0}", "sequence1"),
            ("flattening diamonds conv{±s*e1, ±e2}, limit [-e2, e2]", "sequence2"),
        )
        for title, key in tables:
            print(title)
            for s, v in zip(scales, report[key]["values"]):
                print(f"  s = {str(s):<6} value = {v}")
            print(f"  limit value = {report[key]['limit_value']}")
        print(f"verdict: {verdict}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OracleError as exc:
        print(f"oracle error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
