"""
Unit tests for reporting.export module.

Tests cover:
1. Column layouts of the standard tables
2. File names of case tables
3. CSV export and per-case export from a report
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from neck_lab.core.exceptions import InputValidationError
from neck_lab.flows.warped import WarpedProfile
from neck_lab.heat.finite_difference import HeatField
from neck_lab.reporting.export import (
    bryant_frame,
    case_filename,
    decay_frame,
    export_case_tables,
    export_plot_data,
    trajectory_frame,
)
from neck_lab.reporting.report import Report, judge


class TestFrames:
    """Tests for the standard table builders."""

    def test_trajectory_columns(self) -> None:
        """(z, t, value), one row per grid point."""
        z = np.linspace(-1.0, 1.0, 5)
        t = np.linspace(-2.0, -1.0, 3)
        field = HeatField(z, t, np.arange(15, dtype=float).reshape(3, 5))
        frame = trajectory_frame(field)
        assert list(frame.columns) == ["z", "t", "value"]
        assert len(frame) == 15
        assert frame["value"].iloc[-1] == 14.0

    def test_decay_columns(self) -> None:
        """(L, residual, slope), slope repeated."""
        frame = decay_frame([20.0, 40.0], [0.2, 0.1], -1.0)
        assert list(frame.columns) == ["L", "residual", "slope"]
        assert frame["slope"].tolist() == [-1.0, -1.0]

    def test_decay_length_mismatch(self) -> None:
        """Lengths and residuals must pair up."""
        with pytest.raises(InputValidationError, match="one residual per length"):
            decay_frame([20.0, 40.0], [0.2], -1.0)

    def test_bryant_columns(self) -> None:
        """(z, phi, f, R) with R undefined at the end points."""
        z = np.linspace(0.0, 1.0, 11)
        profile = WarpedProfile.from_function(4, z, 1.0 + z, f=z**2)
        frame = bryant_frame(profile)
        assert list(frame.columns) == ["z", "phi", "f", "R"]
        assert np.isnan(frame["R"].iloc[0]) and np.isnan(frame["R"].iloc[-1])
        assert frame["R"].iloc[1:-1].notna().all()


class TestCaseFilename:
    """Tests for case_filename function."""

    def test_dotted_name_kept(self) -> None:
        """Dots and underscores survive."""
        assert case_filename("cones4d.cone_margin_phi10") == "cones4d.cone_margin_phi10.csv"

    def test_unsafe_characters_replaced(self) -> None:
        """Path separators and spaces are not allowed in the file name."""
        assert case_filename("a/b c") == "a_b_c.csv"

    def test_empty_rejected(self) -> None:
        """A name with nothing usable is an input error."""
        with pytest.raises(InputValidationError):
            case_filename("///")


class TestExport:
    """Tests for export_plot_data and export_case_tables."""

    def test_csv_has_header_and_full_precision(self, tmp_path: Path) -> None:
        """Floats are written with 17 significant digits."""
        path = export_plot_data(pd.DataFrame({"x": [0.1 + 0.2]}), tmp_path / "t.csv")
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "x"
        assert float(lines[1]) == 0.1 + 0.2

    def test_empty_table_rejected(self, tmp_path: Path) -> None:
        """Exporting no rows is an input error."""
        with pytest.raises(InputValidationError, match="no rows"):
            export_plot_data(pd.DataFrame({"x": []}), tmp_path / "t.csv")

    def test_only_cases_with_tables(self, tmp_path: Path) -> None:
        """One CSV per case carrying a table, in case order."""
        table = decay_frame([20.0, 40.0], [0.2, 0.1], -1.0)
        report = Report(
            "lichnerowicz",
            4,
            0,
            (
                judge("lichnerowicz.profile_decay", -1.0, -0.25, 0.1, "x", table=table),
                judge("lichnerowicz.mode_residual", 0.0, 0.0, 1e-6, "x"),
            ),
        )
        paths = export_case_tables(report, tmp_path)
        assert [path.name for path in paths] == ["lichnerowicz.profile_decay.csv"]
        assert pd.read_csv(paths[0])["L"].tolist() == [20.0, 40.0]
