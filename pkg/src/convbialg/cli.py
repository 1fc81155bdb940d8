"""Command-line front end.

    convbialg check [--suite NAME] [--model FILE] [--seed N] [--output text|json] [--jobs N]
    convbialg eval EXPR [--model FILE] [--output text|json]
    convbialg demo {kernel-example,cartier-gabriel,etale-iso} [--output text|json]

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .coeffs import CoeffFn, Polynomial, Q
from .conv import conv_mul
from .dist import dist_eval_at
from .errors import ParseError
from .models import builtin_models, load_model
from .phi import phi as phi_map
from .suites import SUITES, run_all, run_suite
from .textform import parse_conv, parse_dist, split_top

DEMOS = ("kernel-example", "cartier-gabriel", "etale-iso")


def _seed(text):
    return int(text, 0)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="convbialg",
                                description="convolution bialgebra toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, jobs=False):
        sp.add_argument("--model", metavar="PATH", default=None,
                        help="JSON model definition (replaces the builtin of its kind)")
        sp.add_argument("--seed", type=_seed, default=0xC0FFEE, metavar="U64")
        sp.add_argument("--output", choices=("text", "json"), default="text")
        if jobs:
            sp.add_argument("--jobs", type=int, default=1, metavar="N")

    sp = sub.add_parser("check", help="run invariant suites")
    sp.add_argument("--suite", choices=sorted(SUITES), default=None,
                    help="one suite (default: all)")
    common(sp, jobs=True)

    sp = sub.add_parser("eval", help="evaluate an element expression")
    sp.add_argument("expr", help="conv_mul(<a>,<b>) | phi(<a>) | dist_eval(<T>,<F>,<x>)")
    common(sp)

    sp = sub.add_parser("demo", help="run a named scenario")
    sp.add_argument("name", choices=DEMOS)
    common(sp)
    return p


def _emit_json(doc) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True, separators=(",", ":"),
                                default=str) + "\n")


def _load_models(args):
    models = builtin_models()
    model = None
    if args.model:
        model = load_model(args.model)
        key = {"pair": "pair", "group": "heisenberg", "etale_action": "etale"}[model.kind]
        models[key] = model
    return models, model


def _print_checks(report, indent="  "):
    for c in report["checks"]:
        mark = "ok  " if c["pass"] else "FAIL"
        line = f"{indent}[{mark}] {c['name']}"
        if not c["pass"] and c.get("witness"):
            line += f"  -- {c['witness']}"
        print(line)


def cmd_check(args) -> int:
    models, _ = _load_models(args)
    if args.suite:
        report = {"pass": None, "suites": [run_suite(args.suite, seed=args.seed,
                                                     models=models)]}
        report["pass"] = report["suites"][0]["pass"]
    else:
        report = run_all(seed=args.seed, models=models, jobs=args.jobs)
    if args.output == "json":
        _emit_json(report)
    else:
        for s in report["suites"]:
            print(f"{s['suite']}: {'PASS' if s['pass'] else 'FAIL'}")
            _print_checks(s)
        print(f"overall: {'PASS' if report['pass'] else 'FAIL'}")
    return 0 if report["pass"] else 1


class _ConstTable:
    """Same test function for every arrow component (etale evaluation)."""

    def __init__(self, fn):
        self.fn = fn

    def get(self, key, default=None):
        return self.fn


def _eval_expr(model, expr: str):
    expr = expr.strip()
    for head in ("conv_mul", "phi", "dist_eval"):
        if expr.startswith(head + "(") and expr.endswith(")"):
            argtext = expr[len(head) + 1 : -1]
            parts = [s.strip() for s in split_top(argtext, ",")]
            if head == "conv_mul":
                if len(parts) != 2:
                    raise ParseError("conv_mul takes two arguments")
                return conv_mul(parse_conv(model, parts[0]),
                                parse_conv(model, parts[1])).text()
            if head == "phi":
                if len(parts) != 1:
                    raise ParseError("phi takes one argument")
                return phi_map(parse_conv(model, parts[0])).text()
            if len(parts) != 3:
                raise ParseError("dist_eval takes three arguments")
            T = parse_dist(model, parts[0])
            x = Q(parts[2])
            if model.kind == "etale_action":
                F = _ConstTable(CoeffFn(model.base, Polynomial.parse(parts[1], 1)))
            else:
                F = Polynomial.parse(parts[1], model.arrow_chart.dim)
            return str(dist_eval_at(T, F, x))
    raise ParseError(f"unknown expression head in {expr!r}", 0)


def cmd_eval(args) -> int:
    models, model = _load_models(args)
    if model is None:
        model = models["pair"]
    value = _eval_expr(model, args.expr)
    if args.output == "json":
        _emit_json({"expr": args.expr, "value": value})
    else:
        print(value)
    return 0


def cmd_demo(args) -> int:
    models, _ = _load_models(args)
    report = run_suite(args.name, seed=args.seed, models=models)
    if args.output == "json":
        _emit_json(report)
        return 0 if report["pass"] else 1
    print(f"demo {args.name}: {'PASS' if report['pass'] else 'FAIL'}")
    _print_checks(report)
    if args.name == "kernel-example" and report["pass"]:
        print("a != 0, Phi(a) = 0")
        print("stratification:")
        for stext, classes in report["strata"]:
            groups = " | ".join("{" + ", ".join(cls) + "}" for cls in classes)
            print(f"  {stext:16s} {groups}")
    return 0 if report["pass"] else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "check":
            return cmd_check(args)
        if args.command == "eval":
            return cmd_eval(args)
        return cmd_demo(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
