"""
Suite registry and runner.

A suite is an ordered tuple of checks. Each check is a module-level
function taking the run configuration and returning one or more cases;
a check that raises becomes a single ERROR case carrying the message.
Checks run in worker processes when jobs > 1, and their cases are put
back in registry order before the report is assembled.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import NamedTuple

from neck_lab.core.types import Suite
from neck_lab.inputs.schemas import SuiteConfig
from neck_lab.reporting.report import Case, Report, error_case

logger = logging.getLogger(__name__)

Check = Callable[[SuiteConfig], list[Case]]


class CaseSpec(NamedTuple):
    """
    A registered check.

    Attributes:
        name: Dotted name; cases produced by the check start with it.
        anchor: Statement the check verifies.
        check: The function to run.
    """

    name: str
    anchor: str
    check: Check


def run_check(spec: CaseSpec, config: SuiteConfig) -> list[Case]:
    """Run one check, turning any exception into an ERROR case."""
    start = time.perf_counter()
    try:
        cases = spec.check(config)
    except Exception as exc:
        return [error_case(spec.name, spec.anchor, exc)]
    failed = sum(not case.passed for case in cases)
    logger.info(
        "%s: %d case(s), %d failed (%.2fs)",
        spec.name,
        len(cases),
        failed,
        time.perf_counter() - start,
    )
    return cases


def run_checks(specs: Sequence[CaseSpec], config: SuiteConfig) -> list[Case]:
    """
    Run checks serially or in a process pool; cases come back in registration order.

    Args:
        specs: Checks to run.
        config: Run configuration; config.jobs bounds the pool.
    """
    if config.jobs == 1 or len(specs) <= 1:
        results = [run_check(spec, config) for spec in specs]
    else:
        found: dict[int, list[Case]] = {}
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            futures = {
                pool.submit(run_check, spec, config): index for index, spec in enumerate(specs)
            }
            for future in as_completed(futures):
                found[futures[future]] = future.result()
        results = [found[index] for index in range(len(specs))]
    return [case for cases in results for case in cases]


def run_suite(
    config: SuiteConfig, registry: dict[Suite, tuple[CaseSpec, ...]]
) -> Report:
    """
    Execute the configured suite (every suite for `all`).

    Returns:
        Report with cases in registry order and the elapsed wall time.
    """
    if config.suite is Suite.ALL:
        specs = [spec for suite in Suite if suite is not Suite.ALL for spec in registry[suite]]
    else:
        specs = list(registry[config.suite])
    logger.info(
        "Running suite %s: %d check(s), n=%d, seed=%d, jobs=%d",
        config.suite.value,
        len(specs),
        config.n,
        config.seed,
        config.jobs,
    )
    start = time.perf_counter()
    cases = run_checks(specs, config)
    elapsed = time.perf_counter() - start
    report = Report(config.suite.value, config.n, config.seed, tuple(cases), elapsed)
    logger.info("Suite %s finished in %.2fs: %s", config.suite.value, elapsed, report.counts())
    return report
