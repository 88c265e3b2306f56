"""
Case and report records of a verification run.

A case compares one measured quantity against its expected value under a
tolerance. The report collects the cases of a suite and serializes them
to report.json (schema v1). Serialization is deterministic: keys are
sorted, floats are written with repr precision, and the wall time is
kept out of the JSON so that equal seeds give byte-identical files.
"""

from __future__ import annotations

import json
import logging
import math
import os
import tempfile
from collections.abc import Sequence
from enum import Enum
from pathlib import Path
from typing import Any, NamedTuple

import numpy as np
import pandas as pd

from neck_lab.core.exceptions import InputValidationError
from neck_lab.core.types import CaseStatus

logger = logging.getLogger(__name__)

SCHEMA_VERSION: int = 1
REPORT_FILE = "report.json"
TIMING_FILE = "timing.json"
PLUMBING = "plumbing"

Measured = float | list[float] | None


class Relation(Enum):
    """How a measured value is compared with its expected value."""

    CLOSE = "close"  # |measured - expected| <= tolerance
    AT_MOST = "at_most"  # measured <= expected + tolerance
    AT_LEAST = "at_least"  # measured >= expected - tolerance


def _clean(value: Any) -> Any:
    """JSON-safe copy: numpy scalars to Python, non-finite floats to None."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_clean(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        return number if math.isfinite(number) else None
    if isinstance(value, Enum):
        return value.value
    return value


class Case(NamedTuple):
    """
    One verification case.

    Attributes:
        name: Unique dotted name, e.g. "heat.boundary_vanishing".
        status: pass, fail or error.
        measured: Measured value (scalar or list); None when not measured.
        expected: Expected value.
        tolerance: Allowed deviation.
        anchor: Statement the case checks, or "plumbing".
        table: Optional plot data exported next to the report.
        detail: Free-form detail, e.g. the error message of an ERROR case.
    """

    name: str
    status: CaseStatus
    measured: Measured
    expected: Measured
    tolerance: float | None
    anchor: str
    table: pd.DataFrame | None = None
    detail: str | None = None

    @property
    def passed(self) -> bool:
        """True for PASS."""
        return self.status is CaseStatus.PASS

    def to_dict(self) -> dict[str, Any]:
        """Report entry; the table is exported separately."""
        entry = {
            "name": self.name,
            "status": self.status.value,
            "measured": _clean(self.measured),
            "expected": _clean(self.expected),
            "tolerance": _clean(self.tolerance),
            "paper_anchor": self.anchor,
        }
        if self.detail is not None:
            entry["detail"] = self.detail
        return entry


def judge(
    name: str,
    measured: float,
    expected: float,
    tolerance: float,
    anchor: str,
    relation: Relation = Relation.CLOSE,
    table: pd.DataFrame | None = None,
) -> Case:
    """
    Build a case by comparing a scalar measurement.

    NaN measurements fail.

    Example:
        >>> judge("x", 1.0, 1.0, 1e-12, "identity").status.value
        'pass'
    """
    value = float(measured)
    if math.isnan(value):
        ok = False
    elif relation is Relation.CLOSE:
        ok = abs(value - expected) <= tolerance
    elif relation is Relation.AT_MOST:
        ok = value <= expected + tolerance
    else:
        ok = value >= expected - tolerance
    status = CaseStatus.PASS if ok else CaseStatus.FAIL
    logger.debug("%s: %s (measured %.6e, expected %.6e)", name, status.value, value, expected)
    return Case(name, status, value, float(expected), float(tolerance), anchor, table)


def error_case(name: str, anchor: str, exc: BaseException) -> Case:
    """Case for a check that raised instead of measuring."""
    detail = f"{type(exc).__name__}: {exc}"
    logger.error("%s raised %s", name, detail)
    return Case(name, CaseStatus.ERROR, None, None, None, anchor, detail=detail)


class Report(NamedTuple):
    """
    Outcome of one run.

    Attributes:
        suite: Suite name as given on the command line.
        n: Dimension of the primary runs.
        seed: Seed.
        cases: Cases in a fixed order.
        wall_time: Seconds spent; not part of report.json.
    """

    suite: str
    n: int
    seed: int
    cases: tuple[Case, ...]
    wall_time: float = 0.0

    @property
    def failed(self) -> list[Case]:
        """Cases with status fail or error."""
        return [case for case in self.cases if not case.passed]

    @property
    def ok(self) -> bool:
        """True iff every case passed."""
        return not self.failed

    def counts(self) -> dict[str, int]:
        """Number of cases per status."""
        return {
            status.value: sum(case.status is status for case in self.cases)
            for status in CaseStatus
        }

    def to_dict(self) -> dict[str, Any]:
        """report.json content."""
        return {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "n": self.n,
            "seed": self.seed,
            "summary": self.counts(),
            "cases": [case.to_dict() for case in self.cases],
        }

    def to_json(self) -> str:
        """Deterministic JSON text ending in a newline."""
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"


def validate_report(report: Report) -> list[str]:
    """
    Consistency warnings for a report; empty when it is well formed.

    Checks that case names are unique, that every case carries an anchor,
    and that passing cases carry a measurement.
    """
    warnings: list[str] = []
    seen: set[str] = set()
    for case in report.cases:
        if case.name in seen:
            warnings.append(f"duplicate case name '{case.name}'")
        seen.add(case.name)
        if not case.anchor:
            warnings.append(f"case '{case.name}' has no anchor")
        if case.passed and case.measured is None:
            warnings.append(f"passing case '{case.name}' has no measurement")
    return warnings


def merge_reports(suite: str, reports: Sequence[Report]) -> Report:
    """Concatenate reports of several suites into one."""
    if not reports:
        raise InputValidationError("at least one report is required", field="reports")
    first = reports[0]
    cases = tuple(case for report in reports for case in report.cases)
    wall = sum(report.wall_time for report in reports)
    return Report(suite, first.n, first.seed, cases, wall)


def atomic_write_text(path: Path, text: str) -> Path:
    """
    Write text so that readers see either the old file or the complete new one.

    The data goes to a temporary file in the target directory, which is
    then renamed over the target.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    handle, temp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="\n") as stream:
            stream.write(text)
        os.replace(temp_name, path)
    except BaseException:
        Path(temp_name).unlink(missing_ok=True)
        raise
    return path


def write_report(report: Report, out_dir: Path) -> Path:
    """
    Write report.json and timing.json into out_dir.

    Returns:
        Path of report.json.
    """
    for warning in validate_report(report):
        logger.warning("Report check: %s", warning)
    path = atomic_write_text(Path(out_dir) / REPORT_FILE, report.to_json())
    timing = json.dumps({"suite": report.suite, "wall_time": report.wall_time}, indent=2)
    atomic_write_text(Path(out_dir) / TIMING_FILE, timing + "\n")
    logger.info("Wrote %s (%d cases)", path, len(report.cases))
    return path


def load_report(path: Path) -> dict[str, Any]:
    """
    Read a report.json and check its schema version.

    Raises:
        InputValidationError: If the file is unreadable or of another schema.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputValidationError(f"Failed to read report {path}: {exc}", field="report") from exc
    version = data.get("schema_version") if isinstance(data, dict) else None
    if version != SCHEMA_VERSION:
        raise InputValidationError(
            f"Unsupported report schema: {version}", field="schema_version", value=version
        )
    return dict(data)
