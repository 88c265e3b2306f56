"""
Unit tests for cli module.

Tests cover:
1. Argument parsing and config resolution (file, flags, NECK_LAB_OUT)
2. Exit codes for usage errors and invalid input
3. Listing the registered checks
"""

from __future__ import annotations

from pathlib import Path

import pytest

from neck_lab.cli import EXIT_OK, EXIT_USAGE, build_parser, list_checks, main, resolve_config
from neck_lab.core.exceptions import InputValidationError
from neck_lab.core.types import Suite
from neck_lab.inputs.loaders import OUT_ENV_VAR
from neck_lab.inputs.schemas import SuiteConfig


class TestParser:
    """Tests for build_parser function."""

    def test_flags(self) -> None:
        """Every documented flag reaches the namespace under its config name."""
        args = build_parser().parse_args(
            ["lichnerowicz", "--n", "5", "--seed", "3", "--L", "80", "--out", "x", "--jobs", "2"]
            + ["--tol-scale", "2.5"]
        )
        assert args.suite == "lichnerowicz"
        assert (args.n, args.seed, args.length, args.jobs) == (5, 3, 80.0, 2)
        assert args.out == Path("x")
        assert args.tol_scale == 2.5

    def test_unknown_suite_exits_2(self) -> None:
        """argparse rejects a suite outside the enum."""
        with pytest.raises(SystemExit) as info:
            build_parser().parse_args(["ricci"])
        assert info.value.code == 2

    def test_verbose_and_quiet_exclusive(self) -> None:
        """Both verbosity flags at once is a usage error."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["heat", "--verbose", "--quiet"])


class TestResolveConfig:
    """Tests for resolve_config function."""

    def test_flags_override_file(self, tmp_path: Path) -> None:
        """A flag wins over the same key in the config file."""
        path = tmp_path / "run.json"
        path.write_text(SuiteConfig(seed=1, n=6).model_dump_json(), encoding="utf-8")
        args = build_parser().parse_args(["heat", "--config", str(path), "--seed", "9"])
        config = resolve_config(args)
        assert config.suite is Suite.HEAT
        assert (config.seed, config.n) == (9, 6)

    def test_environment_overrides_out(
        self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        """NECK_LAB_OUT replaces --out."""
        monkeypatch.setenv(OUT_ENV_VAR, str(tmp_path / "env"))
        args = build_parser().parse_args(["heat", "--out", str(tmp_path / "flag")])
        assert resolve_config(args).out == tmp_path / "env"

    def test_invalid_flag_value(self) -> None:
        """--n outside 4..8 is an input error."""
        args = build_parser().parse_args(["heat", "--n", "3"])
        with pytest.raises(InputValidationError, match="'n'"):
            resolve_config(args)


class TestMain:
    """Tests for main function."""

    def test_missing_suite(self, capsys: pytest.CaptureFixture[str]) -> None:
        """No suite and no config file is a usage error."""
        assert main([]) == EXIT_USAGE
        assert "usage" in capsys.readouterr().err

    def test_invalid_input_exits_2(self, tmp_path: Path) -> None:
        """A short neck length is rejected before anything runs."""
        assert main(["lichnerowicz", "--L", "2", "--out", str(tmp_path)]) == EXIT_USAGE
        assert not (tmp_path / "report.json").exists()

    def test_list(self, capsys: pytest.CaptureFixture[str]) -> None:
        """--list prints the checks of one suite and exits 0."""
        assert main(["heat", "--list"]) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines
        assert all(line.startswith("heat") for line in lines)


class TestListChecks:
    """Tests for list_checks function."""

    def test_all_lists_every_suite(self) -> None:
        """Listing `all` covers every registered suite."""
        listed = {line.split()[0] for line in list_checks(Suite.ALL).splitlines()}
        assert listed == {suite.value for suite in Suite if suite is not Suite.ALL}
