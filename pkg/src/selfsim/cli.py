"""Command-line entry point: ``selfsim run|extrapolate|omega|table1``."""

from __future__ import annotations

import argparse
import sys

from ._numeric import ctx
from .errors import BetaDegenerate, OmegaUnavailable, ScenarioSchemaError
from .limits import estimate_omega
from .report import FORMATS, emit_report, render_comparison, run_scenario
from .scenarios import BUILTIN_SCENARIOS, PIPELINES, load_scenario

EXIT_OK = 0
EXIT_UNAVAILABLE = 2
EXIT_SCHEMA = 3


def _orders(text: str | None):
    if text is None:
        return None
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"orders must look like 3..15 or 3,5,7, got {text!r}") from None


def _pipelines(text: str | None):
    if text is None:
        return None
    names = [p.strip() for p in text.split(",") if p.strip()]
    bad = [p for p in names if p not in PIPELINES]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown pipeline {bad[0]!r}; choose from {', '.join(PIPELINES)}")
    return names


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="selfsim", description="Self-similar approximants and strong-coupling extrapolation.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a built-in scenario")
    run.add_argument("scenario", help=f"one of: {', '.join(BUILTIN_SCENARIOS)}")
    run.add_argument("--pipelines", type=_pipelines)
    run.add_argument("--orders", type=_orders, help="e.g. 3..15 or 4,5,6")
    run.add_argument("--omega", help="override the approach exponent")
    run.add_argument("--format", choices=FORMATS, default="table-text")

    ext = sub.add_parser("extrapolate", help="extrapolate a series from a JSON input document")
    ext.add_argument("--input", required=True)
    ext.add_argument("--pipelines", type=_pipelines)
    ext.add_argument("--orders", type=_orders)
    ext.add_argument("--omega")
    ext.add_argument("--format", choices=FORMATS, default="table-text")

    om = sub.add_parser("omega", help="estimate the approach exponent of a series")
    om.add_argument("--input", required=True)
    om.add_argument("--max-order", type=int, default=None)

    t1 = sub.add_parser("table1", help="string benchmark with both limit pipelines side by side")
    t1.add_argument("--format", choices=FORMATS + ("comparison",), default="comparison")
    return p


def _emit(report, fmt) -> int:
    sys.stdout.write(emit_report(report, fmt))
    return EXIT_UNAVAILABLE if report.all_unavailable else EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "run":
            if args.scenario not in BUILTIN_SCENARIOS:
                raise ScenarioSchemaError("scenario", f"unknown built-in {args.scenario!r}")
            report = run_scenario(load_scenario(args.scenario), args.pipelines, args.orders, args.omega)
            return _emit(report, args.format)
        if args.command == "extrapolate":
            report = run_scenario(load_scenario(args.input), args.pipelines, args.orders, args.omega)
            return _emit(report, args.format)
        if args.command == "omega":
            scenario = load_scenario(args.input)
            max_order = args.max_order or scenario.series.order
            try:
                est = estimate_omega(scenario.series, max_order)
            except (OmegaUnavailable, BetaDegenerate, ValueError) as exc:
                print(f"omega unavailable: {exc}", file=sys.stderr)
                return EXIT_UNAVAILABLE
            for k, (w, _) in sorted(est.per_order.items()):
                print(f"k={k} omega={'-' if w is None else ctx.nstr(w, 10)}")
            print(f"selected omega={ctx.nstr(est.selected, 10)} (k={est.selected_order})")
            return EXIT_OK
        if args.command == "table1":
            report = run_scenario(load_scenario("string"))
            if args.format == "comparison":
                sys.stdout.write(render_comparison(report))
                return EXIT_OK
            return _emit(report, args.format)
    except ScenarioSchemaError as exc:
        print(f"schema violation: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
