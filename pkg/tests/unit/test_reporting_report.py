"""
Unit tests for reporting.report module.

Tests cover:
1. judge relations, NaN handling and the JSON entry of a case
2. Report counts, ok flag and deterministic JSON
3. Consistency warnings and merging
4. Atomic writes and schema-checked loading
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import pandas as pd
import pytest

from neck_lab.core.exceptions import InputValidationError, NeckpinchError
from neck_lab.core.types import CaseStatus
from neck_lab.reporting.report import (
    REPORT_FILE,
    SCHEMA_VERSION,
    TIMING_FILE,
    Case,
    Relation,
    Report,
    atomic_write_text,
    error_case,
    judge,
    load_report,
    merge_reports,
    validate_report,
    write_report,
)


def _report(*cases: Case, wall_time: float = 1.5) -> Report:
    return Report("heat", 4, 7, cases, wall_time)


class TestJudge:
    """Tests for judge function."""

    @pytest.mark.parametrize(
        ("measured", "relation", "status"),
        [
            (1.05, Relation.CLOSE, CaseStatus.PASS),
            (1.2, Relation.CLOSE, CaseStatus.FAIL),
            (0.8, Relation.CLOSE, CaseStatus.FAIL),
            (0.5, Relation.AT_MOST, CaseStatus.PASS),
            (1.2, Relation.AT_MOST, CaseStatus.FAIL),
            (1.5, Relation.AT_LEAST, CaseStatus.PASS),
            (0.8, Relation.AT_LEAST, CaseStatus.FAIL),
        ],
    )
    def test_relations(self, measured: float, relation: Relation, status: CaseStatus) -> None:
        """Expected 1.0 with tolerance 0.1 under each relation."""
        assert judge("x", measured, 1.0, 0.1, "anchor", relation).status is status

    def test_boundary_is_inclusive(self) -> None:
        """A measurement exactly at expected + tolerance passes."""
        assert judge("x", 1.5, 1.0, 0.5, "anchor", Relation.AT_MOST).passed

    def test_nan_fails(self) -> None:
        """NaN never passes, whatever the relation."""
        for relation in Relation:
            assert judge("x", math.nan, 0.0, 1.0, "anchor", relation).status is CaseStatus.FAIL

    def test_to_dict_fields(self) -> None:
        """The entry carries the report schema fields."""
        entry = judge("heat.kernel_mass", 1.25, 2.0, 0.0, "kernel", Relation.AT_MOST).to_dict()
        assert entry == {
            "name": "heat.kernel_mass",
            "status": "pass",
            "measured": 1.25,
            "expected": 2.0,
            "tolerance": 0.0,
            "paper_anchor": "kernel",
        }


class TestErrorCase:
    """Tests for error_case function."""

    def test_error_case_detail(self) -> None:
        """The exception type and message end up in the detail."""
        case = error_case("bryant.decay_ratio", "decay", NeckpinchError("phi hit zero"))
        assert case.status is CaseStatus.ERROR
        assert case.measured is None
        assert case.detail == "NeckpinchError: phi hit zero"
        assert case.to_dict()["measured"] is None


class TestReport:
    """Tests for Report record."""

    def test_counts_and_ok(self) -> None:
        """Counts cover every status; one failure makes the report not ok."""
        good = judge("a", 0.0, 0.0, 1.0, "anchor")
        bad = judge("b", 5.0, 0.0, 1.0, "anchor")
        assert _report(good).ok
        report = _report(good, bad)
        assert not report.ok
        assert report.counts() == {"pass": 1, "fail": 1, "error": 0}
        assert [case.name for case in report.failed] == ["b"]

    def test_json_is_deterministic_and_has_no_wall_time(self) -> None:
        """Equal cases give equal text, whatever the wall time."""
        case = judge("a", 0.1 + 0.2, 0.3, 1e-12, "anchor")
        first = _report(case, wall_time=1.0).to_json()
        second = _report(case, wall_time=99.0).to_json()
        assert first == second
        data = json.loads(first)
        assert data["schema_version"] == SCHEMA_VERSION
        assert "wall_time" not in data
        assert data["cases"][0]["measured"] == 0.1 + 0.2

    def test_non_finite_measurements_become_null(self) -> None:
        """An infinite measurement is written as null, keeping the JSON strict."""
        case = judge("a", math.inf, 0.0, 1.0, "anchor", Relation.AT_MOST)
        data = json.loads(_report(case).to_json())
        assert data["cases"][0]["measured"] is None
        assert data["cases"][0]["status"] == "fail"

    def test_table_not_serialized(self) -> None:
        """Tables are exported separately, not embedded."""
        table = pd.DataFrame({"L": [20.0], "residual": [0.1], "slope": [-0.2]})
        case = judge("a", 0.0, 0.0, 1.0, "anchor", table=table)
        assert "table" not in json.loads(_report(case).to_json())["cases"][0]


class TestValidateReport:
    """Tests for validate_report function."""

    def test_clean_report(self) -> None:
        """No warnings for distinct, anchored, measured cases."""
        assert validate_report(_report(judge("a", 0.0, 0.0, 1.0, "x"))) == []

    def test_duplicates_and_missing_anchor(self) -> None:
        """Duplicate names and empty anchors are reported."""
        case = judge("a", 0.0, 0.0, 1.0, "")
        warnings = validate_report(_report(case, case))
        assert any("duplicate" in warning for warning in warnings)
        assert any("no anchor" in warning for warning in warnings)


class TestMergeReports:
    """Tests for merge_reports function."""

    def test_concatenates_in_order(self) -> None:
        """Cases keep their order and wall times add up."""
        first = _report(judge("a", 0.0, 0.0, 1.0, "x"), wall_time=1.0)
        second = _report(judge("b", 0.0, 0.0, 1.0, "x"), wall_time=2.0)
        merged = merge_reports("all", [first, second])
        assert merged.suite == "all"
        assert [case.name for case in merged.cases] == ["a", "b"]
        assert merged.wall_time == pytest.approx(3.0)

    def test_empty_rejected(self) -> None:
        """At least one report is needed."""
        with pytest.raises(InputValidationError, match="at least one report"):
            merge_reports("all", [])


class TestWriteAndLoad:
    """Tests for atomic_write_text, write_report and load_report."""

    def test_atomic_write_replaces_and_leaves_no_temp(self, tmp_path: Path) -> None:
        """The target holds the new text and no temporary file remains."""
        target = tmp_path / "nested" / "file.txt"
        atomic_write_text(target, "old\n")
        atomic_write_text(target, "new\n")
        assert target.read_text(encoding="utf-8") == "new\n"
        assert [path.name for path in target.parent.iterdir()] == ["file.txt"]

    def test_write_report_files(self, tmp_path: Path) -> None:
        """report.json and timing.json are written; the wall time lives in timing.json."""
        report = _report(judge("a", 0.0, 0.0, 1.0, "x"), wall_time=2.5)
        path = write_report(report, tmp_path)
        assert path == tmp_path / REPORT_FILE
        assert path.read_text(encoding="utf-8") == report.to_json()
        timing = json.loads((tmp_path / TIMING_FILE).read_text(encoding="utf-8"))
        assert timing == {"suite": "heat", "wall_time": 2.5}

    def test_load_report_round_trip(self, tmp_path: Path) -> None:
        """A written report loads back with its summary."""
        path = write_report(_report(judge("a", 0.0, 0.0, 1.0, "x")), tmp_path)
        data = load_report(path)
        assert data["summary"] == {"pass": 1, "fail": 0, "error": 0}

    def test_load_report_rejects_other_schema(self, tmp_path: Path) -> None:
        """A report of another schema version is an input error."""
        path = tmp_path / REPORT_FILE
        path.write_text(json.dumps({"schema_version": 2}), encoding="utf-8")
        with pytest.raises(InputValidationError, match="Unsupported report schema"):
            load_report(path)
