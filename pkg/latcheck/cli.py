"""Command-line interface: ``latcheck list | run <target> | dump <key>``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from latcheck.catalog.loader import load_catalog
from latcheck.constants import (
    CATALOG_DIR,
    DEFAULT_BUDGET,
    DEFAULT_D_MAX,
    DEFAULT_PARAM_MAX,
    DEFAULT_WORKERS,
    EXIT_OK,
    EXIT_USAGE,
    LOG_LEVEL,
)
from latcheck.errors import LatcheckError
from latcheck.verify.report import exit_code, render
from latcheck.verify.runner import run_targets
from latcheck.verify.targets import DESCRIPTIONS, RunOptions, expand_target

logger = logging.getLogger("latcheck")


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="latcheck",
        description="Re-verify lattice classification tables and structural statements exactly.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "--catalog",
        type=Path,
        default=CATALOG_DIR,
        help="Catalog directory (default: LATCHECK_CATALOG_DIR or data/catalog)",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="More log output (-v info, -vv debug)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="List verification targets")

    run = sub.add_parser("run", help="Run a verification target")
    run.add_argument("target", help="Target id, or 'all'")
    run.add_argument(
        "--param-max",
        type=int,
        default=DEFAULT_PARAM_MAX,
        help="Parameter values per row for rows not indexed by d",
    )
    run.add_argument("--d-max", type=int, default=DEFAULT_D_MAX, help="Largest d for rows indexed by d")
    run.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_BUDGET,
        help="Search budget (default: LATCHECK_BUDGET or %(default)s)",
    )
    run.add_argument("--strict", action="store_true", help="Treat warnings and unknowns as failures")
    run.add_argument("--format", choices=["text", "json", "csv"], default="text", help="Report format")
    run.add_argument("--out", type=Path, default=None, help="Write the report to a file")
    run.add_argument(
        "--workers",
        type=int,
        default=DEFAULT_WORKERS,
        help="Worker processes for table rows (default: LATCHECK_WORKERS or serial)",
    )

    dump = sub.add_parser("dump", help="Show a catalog entry with derived invariants")
    dump.add_argument("key", help="Catalog key, e.g. hosts/lambda-n or Omega4")
    return parser.parse_args(argv)


def _configure_logging(verbose: int) -> None:
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, LOG_LEVEL.upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def _list() -> int:
    width = max(len(t) for t in DESCRIPTIONS)
    for target, description in DESCRIPTIONS.items():
        print(f"{target:<{width}}  {description}")
    return EXIT_OK


def _run(args: argparse.Namespace) -> int:
    expand_target(args.target)
    if args.param_max < 1 or args.d_max < 1 or args.budget < 1:
        raise LatcheckError("--param-max, --d-max and --budget must be positive")
    catalog = load_catalog(args.catalog)
    options = RunOptions(param_max=args.param_max, d_max=args.d_max, budget=args.budget)
    reports = run_targets(catalog, args.target, options, workers=args.workers)
    text = render(reports, args.format, args.strict)
    if args.out is not None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text, encoding="utf-8")
        logger.info("report written to %s", args.out)
    else:
        sys.stdout.write(text)
    return exit_code(reports, args.strict)


def _dump(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog, validate=False)
    print(json.dumps(catalog.dump(args.key), indent=2, ensure_ascii=False))
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = parse_args(argv)
    _configure_logging(args.verbose)
    try:
        if args.command == "list":
            return _list()
        if args.command == "run":
            return _run(args)
        return _dump(args)
    except LatcheckError as exc:
        logger.error("%s", exc)
        print(f"latcheck: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
