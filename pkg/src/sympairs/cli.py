"""Command-line front door for the verification suites.

Exit code contract: 0 when every check passes, 1 when any check fails,
2 for configuration or usage errors.  The environment variable
SYMPAIR_TOL overrides the default tolerance for all residual checks.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import network, pairs, suites
from .core import DEFAULT_TOL
from .report import FORMATS, Report, emit


class UsageError(Exception):
    pass


def _default_tol() -> float:
    raw = os.environ.get("SYMPAIR_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"SYMPAIR_TOL is not a number: {raw!r}")
    if tol <= 0:
        raise UsageError("SYMPAIR_TOL must be positive")
    return tol


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")


def _load_json(path: str):
    try:
        return json.loads(_read_file(path))
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON in {path}: {exc}")


def _parse_t_list(raw: str):
    try:
        return [float(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"malformed t list: {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sympairs",
        description="Residual checks for symmetric operator pairs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run one suite from the command line")
    kinds = check.add_subparsers(dest="kind", required=True)

    p = kinds.add_parser("pair", help="verify a pair given as matrix JSON")
    p.add_argument("-i", "--input", required=True, metavar="pair.json")

    p = kinds.add_parser("malliavin", help="derivative/divergence suite")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--N", type=int, default=6)

    p = kinds.add_parser("modular", help="modular-theory suite")
    p.add_argument("--rho", metavar="rho.json",
                   help="density matrix file (default: tracial)")
    p.add_argument("--n", type=int, default=2,
                   help="matrix size when --rho is omitted")
    p.add_argument("--t", default="0.5,1",
                   help="comma-separated modular flow times")

    p = kinds.add_parser("network", help="finite-network identity suite")
    p.add_argument("-g", "--graph", required=True, metavar="graph.txt")

    p = kinds.add_parser("defect", help="half-line defect recurrence")
    p.add_argument("--rule", choices=("geometric", "constant"),
                   default="geometric")
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--nmax", type=int, default=80)
    p.add_argument("--expect", choices=(network.CONVERGES, network.DIVERGES),
                   help="fail unless the verdict matches")

    for sp in kinds.choices.values():
        sp.add_argument("--format", choices=FORMATS, default="human")
        sp.add_argument("-o", "--output", metavar="FILE")
        sp.add_argument("--tol", type=float)

    p = sub.add_parser("run", help="run a batch suite config")
    p.add_argument("-c", "--config", required=True, metavar="suite.json",
                   help="config file, or 'default' for the bundled batch")
    p.add_argument("-o", "--output", metavar="report.json")
    p.add_argument("--format", choices=FORMATS, default="json")
    return parser


def _check_report(args) -> Report:
    tol = args.tol if args.tol is not None else _default_tol()
    if tol <= 0:
        raise UsageError("--tol must be positive")
    report = Report()
    if args.kind == "pair":
        spec, file_tol = pairs.pair_from_json(_load_json(args.input))
        if args.tol is None and "SYMPAIR_TOL" not in os.environ:
            tol = file_tol
        report.extend(suites.suite_pair(spec, tol))
    elif args.kind == "malliavin":
        if args.d < 1 or args.N < 2:
            raise UsageError("need --d >= 1 and --N >= 2")
        report.extend(suites.suite_malliavin(args.d, args.N, tol))
    elif args.kind == "modular":
        if args.rho is not None:
            rho = suites._parse_rho(_load_json(args.rho))
            n = rho.shape[0]
        else:
            from .modular import tracial_rho

            n, rho = args.n, tracial_rho(args.n)
        report.extend(suites.suite_modular(n, rho, _parse_t_list(args.t), tol))
    elif args.kind == "network":
        net = network.parse_graph(_read_file(args.graph))
        report.extend(suites.suite_network(net, tol))
    elif args.kind == "defect":
        report.extend(
            suites.suite_defect(args.rule, args.r, args.nmax, args.expect, tol)
        )
    else:
        raise UsageError(f"unknown check kind {args.kind!r}")
    return report


def _deliver(report: Report, fmt: str, output: str | None) -> int:
    text = emit(report, fmt)
    if output:
        try:
            with open(output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {output}: {exc}")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    return 0 if report.all_passed else 1


def _validate_config(config) -> dict:
    if not isinstance(config, dict) or not isinstance(
        config.get("suites", []), list
    ):
        raise UsageError("config must be an object with a 'suites' list")
    valid = {"pair", "malliavin", "modular", "network", "defect"}
    for entry in config.get("suites", []):
        if not isinstance(entry, dict) or entry.get("kind") not in valid:
            raise UsageError(f"bad suite entry: {entry!r}")
        # tol = 0 is allowed: it makes strict residual checks fail,
        # which is a check failure (exit 1), not a usage error
        if "tol" in entry and float(entry["tol"]) < 0:
            raise UsageError("suite tol must be nonnegative")
    return config


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else int(exc.code or 0)
    try:
        if args.command == "check":
            report = _check_report(args)
            return _deliver(report, args.format, args.output)
        if args.command == "run":
            raw = suites.default_config() if args.config == "default" \
                else _load_json(args.config)
            config = _validate_config(raw)
            # graph params may point at files; inline them before dispatch
            for entry in config.get("suites", []):
                params = entry.get("params", {})
                if entry["kind"] == "network" and "graph_file" in params:
                    params["graph"] = _read_file(params["graph_file"])
            report = suites.run_suite(config, _default_tol())
            return _deliver(report, args.format, args.output)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
