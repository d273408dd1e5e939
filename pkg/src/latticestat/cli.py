"""Command-line front end: ``latticestat run | explain | theorems``."""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .config import ConfigError, explain, load, report_json, run, summary
from .convergence.theorems import THEOREMS
from .lattice import DimensionError
from .syntax import ParseError, ResolutionError, parse_scalar

EXIT_OK, EXIT_PARSE, EXIT_RESOLVE, EXIT_SHAPE, EXIT_INTERNAL = 0, 2, 3, 4, 5


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="latticestat", description=__doc__)
    p.add_argument("--version", action="version", version=f"latticestat {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run the queries of a config file")
    r.add_argument("config")
    r.add_argument("--horizon", type=int)
    r.add_argument("--tolerance", help="exact rational, e.g. 1/1000")
    r.add_argument("--seed", type=int)
    r.add_argument("--json", action="store_true", help="print the JSON report on stdout")
    r.add_argument("--quiet", action="store_true", help="print nothing")
    r.add_argument("-o", "--output", help="write the report here (overrides the config)")

    e = sub.add_parser("explain", help="explain one query of a saved report")
    e.add_argument("report")
    e.add_argument("query_id")

    t = sub.add_parser("theorems", help="list the verifiable theorems")
    t.add_argument("--list", action="store_true", required=True)
    return p


def _err(msg: str, code: int) -> int:
    print(f"latticestat: {msg}", file=sys.stderr)
    return code


def _run(args) -> int:
    cfg = load(args.config)
    tol = parse_scalar(args.tolerance) if args.tolerance is not None else None
    if args.horizon is not None and args.horizon < 10:
        raise ConfigError("--horizon must be at least 10")
    if tol is not None and tol <= 0:
        raise ConfigError("--tolerance must be positive")
    report = run(cfg, horizon=args.horizon, tolerance=tol, seed=args.seed)
    text = report_json(report)
    out = args.output or cfg.output
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.quiet:
        return EXIT_OK
    print(text if args.json else summary(report), end="" if args.json else "\n")
    return EXIT_OK


def _explain(args) -> int:
    try:
        with open(args.report, encoding="utf-8") as fh:
            report = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"report is not valid JSON: {exc}") from exc
    try:
        print(explain(report, args.query_id))
    except KeyError as exc:
        raise ResolutionError(exc.args[0]) from exc
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "run":
            return _run(args)
        if args.command == "explain":
            return _explain(args)
        for tid, statement in THEOREMS.items():
            print(f"{tid:26} {statement}")
        return EXIT_OK
    except (ParseError, ConfigError) as exc:
        return _err(str(exc), EXIT_PARSE)
    except ResolutionError as exc:
        return _err(str(exc), EXIT_RESOLVE)
    except DimensionError as exc:
        return _err(str(exc), EXIT_SHAPE)
    except FileNotFoundError as exc:
        return _err(f"no such file: {exc.filename}", EXIT_PARSE)
    except Exception as exc:  # noqa: BLE001
        return _err(f"internal error: {type(exc).__name__}: {exc}", EXIT_INTERNAL)


if __name__ == "__main__":
    sys.exit(main())
