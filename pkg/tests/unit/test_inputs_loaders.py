"""
Unit tests for inputs.loaders module.

Tests cover:
1. JSON config loading and validation
2. Command-line overrides
3. Output directory resolution
"""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from neck_lab.core.exceptions import InputValidationError
from neck_lab.core.types import Suite
from neck_lab.inputs.loaders import apply_overrides, load_config, resolve_output_dir
from neck_lab.inputs.schemas import SuiteConfig


def _write_json(path: Path, data: object) -> Path:
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


class TestLoadConfig:
    """Tests for load_config function."""

    def test_valid_file(self, tmp_path: Path) -> None:
        """Keys mirror SuiteConfig, nested sections included."""
        path = _write_json(
            tmp_path / "run.json",
            {"suite": "heat", "seed": 3, "grid": {"heat_length": 12.0}},
        )
        config = load_config(path)
        assert config.suite is Suite.HEAT
        assert config.seed == 3
        assert config.grid.heat_length == 12.0
        assert config.grid.lengths == (20.0, 40.0, 80.0)

    def test_missing_file(self, tmp_path: Path) -> None:
        """An absent file is an input error, not an OSError."""
        with pytest.raises(InputValidationError, match="Failed to read config"):
            load_config(tmp_path / "absent.json")

    def test_invalid_json(self, tmp_path: Path) -> None:
        """Malformed JSON is reported."""
        path = tmp_path / "broken.json"
        path.write_text("{suite: heat", encoding="utf-8")
        with pytest.raises(InputValidationError, match="validation failed"):
            load_config(path)

    def test_out_of_range_value_names_field(self, tmp_path: Path) -> None:
        """The failing field is attached to the error."""
        path = _write_json(tmp_path / "run.json", {"tolerances": {"pic": -1.0}})
        with pytest.raises(InputValidationError) as info:
            load_config(path)
        assert info.value.field == "tolerances.pic"

    def test_unknown_key(self, tmp_path: Path) -> None:
        """Extra keys are rejected."""
        path = _write_json(tmp_path / "run.json", {"suites": "all"})
        with pytest.raises(InputValidationError):
            load_config(path)


class TestApplyOverrides:
    """Tests for apply_overrides function."""

    def test_flags_win(self, tmp_path: Path) -> None:
        """A flag replaces the file value."""
        config = load_config(_write_json(tmp_path / "run.json", {"seed": 3, "n": 5}))
        merged = apply_overrides(config, seed=7)
        assert merged.seed == 7
        assert merged.n == 5

    def test_none_flags_ignored(self) -> None:
        """Flags left unset keep the config value."""
        merged = apply_overrides(SuiteConfig(seed=4), seed=None, jobs=None)
        assert merged.seed == 4
        assert merged.jobs == 1

    def test_invalid_flag_value(self) -> None:
        """--jobs 0 is rejected like a file entry."""
        with pytest.raises(InputValidationError) as info:
            apply_overrides(SuiteConfig(), jobs=0)
        assert info.value.field == "jobs"

    def test_unknown_flag(self) -> None:
        """Only SuiteConfig keys can be overridden."""
        with pytest.raises(InputValidationError, match="Unknown config keys"):
            apply_overrides(SuiteConfig(), colour="red")


class TestResolveOutputDir:
    """Tests for resolve_output_dir function."""

    def test_environment_wins(self, tmp_path: Path) -> None:
        """NECK_LAB_OUT replaces --out."""
        config = SuiteConfig(out=tmp_path / "flag")
        resolved = resolve_output_dir(config, {"NECK_LAB_OUT": str(tmp_path / "env")})
        assert resolved == tmp_path / "env"

    def test_config_used_without_environment(self, tmp_path: Path) -> None:
        """Without the variable the configured directory is used."""
        config = SuiteConfig(out=tmp_path / "flag")
        assert resolve_output_dir(config, {}) == tmp_path / "flag"

    def test_blank_environment_ignored(self, tmp_path: Path) -> None:
        """An empty variable does not redirect output to the working directory."""
        config = SuiteConfig(out=tmp_path / "flag")
        assert resolve_output_dir(config, {"NECK_LAB_OUT": "  "}) == tmp_path / "flag"
