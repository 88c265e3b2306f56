"""
Command-line entry point.

    neck-lab <suite> [--n N] [--seed S] [--L L] [--out DIR] [--jobs J] [--tol-scale X]

Runs one suite (or `all`), writes report.json, timing.json and one CSV per
case that carries a table, and exits 0 when every case passed, 1 when any
case failed or errored, and 2 on invalid input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from neck_lab import __version__
from neck_lab.core.exceptions import InputValidationError
from neck_lab.core.types import Suite
from neck_lab.inputs.loaders import apply_overrides, load_config, resolve_output_dir
from neck_lab.inputs.schemas import SuiteConfig
from neck_lab.reporting.export import export_case_tables
from neck_lab.reporting.report import write_report
from neck_lab.suites import REGISTRY, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neck-lab",
        description="Numerical checks for necks, cylinders and solitons in Ricci flow.",
    )
    parser.add_argument(
        "suite",
        nargs="?",
        choices=[suite.value for suite in Suite],
        help="Suite to run; 'all' runs every suite.",
    )
    parser.add_argument("--n", type=int, help="Dimension of the primary runs (4..8).")
    parser.add_argument("--seed", type=int, help="Seed of every random draw.")
    parser.add_argument("--L", dest="length", type=float, help="Additional neck length (>= 4).")
    parser.add_argument("--out", type=Path, help="Output directory.")
    parser.add_argument("--jobs", type=int, help="Worker processes.")
    parser.add_argument("--tol-scale", dest="tol_scale", type=float, help="Tolerance multiplier.")
    parser.add_argument("--config", type=Path, help="JSON config file; flags override it.")
    parser.add_argument("--list", action="store_true", help="List the checks and exit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging.")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings only.")
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def list_checks(suite: Suite | None) -> str:
    """One line per registered check: suite, check name and anchor."""
    lines = []
    for key, specs in REGISTRY.items():
        if suite not in (None, Suite.ALL, key):
            continue
        lines += [f"{key.value:<14}{spec.name:<36}{spec.anchor}" for spec in specs]
    return "\n".join(lines)


def resolve_config(args: argparse.Namespace) -> SuiteConfig:
    """
    Config file (or defaults), then command-line flags, then NECK_LAB_OUT.

    Raises:
        InputValidationError: If the file or a flag is invalid.
    """
    config = load_config(args.config) if args.config is not None else SuiteConfig()
    config = apply_overrides(
        config,
        suite=args.suite,
        n=args.n,
        seed=args.seed,
        length=args.length,
        out=args.out,
        jobs=args.jobs,
        tol_scale=args.tol_scale,
    )
    return config.model_copy(update={"out": resolve_output_dir(config)})


def main(argv: Sequence[str] | None = None) -> int:
    """
    Run the command line and return the exit status.

    Example:
        >>> main(["cones4d", "--n", "4", "--seed", "7", "--quiet"])  # doctest: +SKIP
        0
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose, args.quiet)

    if args.list:
        print(list_checks(Suite(args.suite) if args.suite else None))
        return EXIT_OK
    if args.suite is None and args.config is None:
        parser.print_usage(sys.stderr)
        logger.error("A suite is required (one of: %s)", ", ".join(s.value for s in Suite))
        return EXIT_USAGE

    try:
        config = resolve_config(args)
    except InputValidationError as exc:
        logger.error("Invalid input: %s", exc)
        return EXIT_USAGE

    report = run_suite(config, REGISTRY)
    try:
        path = write_report(report, config.out)
        export_case_tables(report, config.out)
    except OSError as exc:
        logger.error("Could not write results to %s: %s", config.out, exc)
        return EXIT_FAILED

    counts = report.counts()
    print(
        f"{report.suite}: {counts['pass']} passed, {counts['fail']} failed, "
        f"{counts['error']} errors -> {path}"
    )
    for case in report.cases:
        if not case.passed:
            print(f"  {case.status.value.upper():<6}{case.name}: {case.detail or case.anchor}")
    return EXIT_OK if report.ok else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
