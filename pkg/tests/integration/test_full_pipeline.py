"""
Integration tests for end-to-end runs through the command line.

These tests drive main() with a small-grid config file and check the
files a run leaves behind, the exit status and the determinism of the
report.
"""

from __future__ import annotations

import json
from pathlib import Path

import pandas as pd
import pytest

from neck_lab.cli import EXIT_FAILED, EXIT_OK, main
from neck_lab.inputs.loaders import OUT_ENV_VAR
from neck_lab.inputs.schemas import SuiteConfig, ToleranceConfig
from tests.conftest import small_grid


def _config_file(tmp_path: Path, **updates: object) -> Path:
    config = SuiteConfig(grid=small_grid()).model_copy(update=updates)
    path = tmp_path / "small.json"
    path.write_text(config.model_dump_json(), encoding="utf-8")
    return path


def _run(tmp_path: Path, out: Path, *flags: str, **updates: object) -> int:
    config = _config_file(tmp_path, **updates)
    return main([*flags, "--config", str(config), "--out", str(out), "--quiet"])


class TestEndToEnd:
    """Full runs of single suites."""

    def test_warped_run_writes_report(self, tmp_path: Path) -> None:
        """A passing suite exits 0 and writes report.json and timing.json."""
        out = tmp_path / "out"
        assert _run(tmp_path, out, "warped") == EXIT_OK
        report = json.loads((out / "report.json").read_text(encoding="utf-8"))
        assert report["schema_version"] == 1
        assert report["suite"] == "warped"
        assert report["summary"]["fail"] == report["summary"]["error"] == 0
        assert (out / "timing.json").exists()

    def test_cones4d_seed_7_is_byte_identical(self, tmp_path: Path) -> None:
        """Two runs with --n 4 --seed 7 give the same report.json bytes."""
        first, second = tmp_path / "a", tmp_path / "b"
        for out in (first, second):
            _run(tmp_path, out, "cones4d", "--n", "4", "--seed", "7")
        assert (first / "report.json").read_bytes() == (second / "report.json").read_bytes()

    def test_failure_exits_nonzero(self, tmp_path: Path) -> None:
        """An impossible tolerance turns a passing case into a failure and exit 1."""
        tight = ToleranceConfig(kernel_mass=1e-3)
        out = tmp_path / "out"
        assert _run(tmp_path, out, "heat", tolerances=tight) == EXIT_FAILED
        report = json.loads((out / "report.json").read_text(encoding="utf-8"))
        statuses = {case["name"]: case["status"] for case in report["cases"]}
        assert statuses["heat.kernel_mass"] == "fail"

    def test_environment_directory_wins(
        self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        """With NECK_LAB_OUT set, --out is ignored."""
        env_dir = tmp_path / "env"
        monkeypatch.setenv(OUT_ENV_VAR, str(env_dir))
        _run(tmp_path, tmp_path / "flag", "warped")
        assert (env_dir / "report.json").exists()
        assert not (tmp_path / "flag").exists()

    def test_bryant_exports_profile_csv(self, tmp_path: Path) -> None:
        """Cases with tables leave one CSV each next to the report."""
        out = tmp_path / "out"
        _run(tmp_path, out, "bryant")
        frame = pd.read_csv(out / "bryant.conserved.csv")
        assert list(frame.columns) == ["z", "phi", "f", "R"]

    @pytest.mark.slow
    def test_lichnerowicz_extra_length(self, tmp_path: Path) -> None:
        """--L 80 puts L = 80 in the residual-vs-L table."""
        out = tmp_path / "out"
        _run(tmp_path, out, "lichnerowicz", "--L", "80")
        frame = pd.read_csv(out / "lichnerowicz.profile_decay.csv")
        assert 80.0 in frame["L"].tolist()
