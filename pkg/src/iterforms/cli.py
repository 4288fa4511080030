"""Command-line front end: ``iterforms <command> ...`` (also ``python -m iterforms``).

Exit codes: 0 success, 1 user error, 2 resource limit, 3 invariant violation.
Errors are printed to stderr as JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import diffops, integral, suites
from .calculus import TensorField11
from .errors import IterFormsError, InvariantViolation, UsageError
from .forms import as_polyvector, d, format_element, from_json, to_json
from .grading import ChartSpec
from .textio import parse_element


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--n", type=int, default=default(1), help="number of coordinates")
    p.add_argument("--k", type=int, default=default(1), help="iteration depth")
    p.add_argument("--format", choices=("text", "json"), default=default("text"))
    p.add_argument("--seed", type=int, default=default(0), help="seed for randomised suites")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iterforms", parents=[_global_flags(False)],
                                     description="Iterated differential forms and integral forms.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = [_global_flags(True)]

    p = sub.add_parser("eval", parents=common, help="evaluate an expression")
    p.add_argument("expr")
    p = sub.add_parser("d", parents=common, help="apply d_slot")
    p.add_argument("--slot", type=int, required=True)
    p.add_argument("expr")
    p = sub.add_parser("hatd", parents=common, help="apply the adjoint differential d-hat_slot")
    p.add_argument("--slot", type=int, required=True)
    p.add_argument("source", help="polyvector JSON file or expression")
    p = sub.add_parser("trace", parents=common, help="trace of a (1,1)-tensor via d-hat_2")
    p.add_argument("tensor", help="JSON file or inline JSON matrix of polynomial strings")
    sub.add_parser("berezinian", parents=common, help="print the berezinian generator")
    p = sub.add_parser("homology", parents=common, help="homology of the integral complex")
    p.add_argument("--deg", type=int, required=True)
    p.add_argument("--s-max", type=int, default=None)
    p = sub.add_parser("cohomology-window", parents=common, help="H^s(w) on a finite window")
    p.add_argument("--r", type=int, default=None, help="operator order bound (default deg + nu)")
    p.add_argument("--deg", type=int, required=True)
    p.add_argument("--s-max", type=int, default=None)
    p = sub.add_parser("check", parents=common, help="run identity suites")
    p.add_argument("--suite", default="all", help=f"all or one of: {', '.join(suites.SUITES)}")
    return parser


def _read_json_arg(text: str):
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            return json.load(fh)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{text!r} is neither a file nor valid JSON: {exc.msg}") from None


def _element_out(a, chart):
    data = to_json(a)
    data["text"] = format_element(a)
    return data, format_element(a)


def run(args: argparse.Namespace) -> tuple:
    """Execute one parsed command; returns (exit code, json payload, text)."""
    chart = ChartSpec(args.n, args.k)
    cmd = args.command
    if cmd == "eval":
        data, text = _element_out(parse_element(args.expr, chart), chart)
    elif cmd == "d":
        data, text = _element_out(d(args.slot, parse_element(args.expr, chart)), chart)
    elif cmd == "hatd":
        src = args.source
        if src.endswith(".json") or src.lstrip().startswith("{"):
            Z = from_json(_read_json_arg(src))
        else:
            Z = parse_element(src, chart)
        data, text = _element_out(integral.hat_d(args.slot, as_polyvector(Z)), Z.chart)
    elif cmd == "trace":
        T = TensorField11.from_json(_read_json_arg(args.tensor))
        tr = integral.trace(T)
        if tr != T.diagonal_sum():
            raise InvariantViolation("trace differs from the diagonal sum",
                                     trace=str(tr), diagonal_sum=str(T.diagonal_sum()))
        data = {"trace": str(tr), "diagonal_sum": str(T.diagonal_sum()), "tensor": T.to_json()}
        text = str(tr)
    elif cmd == "berezinian":
        box = diffops.berezin_generator(chart)
        if diffops.w(box):
            raise InvariantViolation("w(box) != 0")
        data, text = diffops.to_json(box), str(box)
    elif cmd == "homology":
        rep = integral.homology(chart, args.deg, args.s_max)
        data = rep.to_json()
        text = "\n".join(f"H_{i} = {v}" for i, v in reversed(list(enumerate(rep.dims))))
    elif cmd == "cohomology-window":
        r = args.r if args.r is not None else args.deg + diffops.nu(chart)
        rep = diffops.cohomology_window(diffops.WindowSpec(chart.n, chart.k, r_max=r,
                                                           coeff_degree=args.deg, s_max=args.s_max))
        data = rep.to_json()
        text = "\n".join(f"H^{s} = {v}" for s, v in enumerate(rep.dims))
        text += f"\nblocks = {rep.extra['blocks']}, generator matches berezinian: " \
                f"{rep.extra['generator_matches_berezinian']}"
    elif cmd == "check":
        results = suites.run(args.suite, seed=args.seed)
        ok = all(r.passed for r in results)
        data = {"passed": ok, "seed": args.seed, "suites": [r.to_json() for r in results]}
        lines = [f"{'PASS' if r.passed else 'FAIL'} {r.name} ({r.cases} cases)"
                 + "".join(f"\n    {f}" for f in r.failures) for r in results]
        return (0 if ok else InvariantViolation.exit_code), data, "\n".join(lines)
    else:  # pragma: no cover - argparse rejects unknown commands
        raise UsageError(f"unknown command {cmd!r}")
    return 0, data, text


def main(argv: list | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, data, text = run(args)
    except IterFormsError as exc:
        print(json.dumps(exc.to_json()), file=sys.stderr)
        return exc.exit_code
    except RecursionError:
        print(json.dumps({"error": {"type": "resource", "message": "expression nests too deeply",
                                    "exit_code": 2}}), file=sys.stderr)
        return 2
    if args.format == "json":
        print(json.dumps(data, ensure_ascii=False, indent=2))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
