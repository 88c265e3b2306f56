"""
Unit tests for inputs.schemas module.

Tests cover:
1. SuiteConfig defaults and validation
2. ToleranceConfig scaling
3. GridConfig bounds
"""

from __future__ import annotations

from pathlib import Path

import pytest
from pydantic import ValidationError

from neck_lab.core.types import Suite
from neck_lab.inputs.schemas import GridConfig, SuiteConfig, ToleranceConfig


class TestSuiteConfig:
    """Tests for SuiteConfig schema."""

    def test_defaults(self) -> None:
        """A bare config runs every suite in n = 4 with seed 0."""
        config = SuiteConfig()
        assert config.suite is Suite.ALL
        assert config.n == 4
        assert config.seed == 0
        assert config.jobs == 1
        assert config.out == Path("neck-lab-out")

    def test_suite_from_string(self) -> None:
        """Suite names parse into the enum."""
        assert SuiteConfig(suite="cones4d").suite is Suite.CONES4D  # type: ignore[arg-type]

    def test_unknown_suite_rejected(self) -> None:
        """Only the listed suites exist."""
        with pytest.raises(ValidationError):
            SuiteConfig(suite="ricci")  # type: ignore[arg-type]

    def test_extra_keys_rejected(self) -> None:
        """Typos in a config file are errors."""
        with pytest.raises(ValidationError):
            SuiteConfig(sead=3)  # type: ignore[call-arg]

    @pytest.mark.parametrize("n", [3, 9])
    def test_dimension_bounds(self, n: int) -> None:
        """n lies in 4..8."""
        with pytest.raises(ValidationError):
            SuiteConfig(n=n)

    def test_jobs_must_be_positive(self) -> None:
        """At least one worker."""
        with pytest.raises(ValidationError):
            SuiteConfig(jobs=0)

    def test_default_lengths(self) -> None:
        """L = 20, 40, 80 unless --L adds one."""
        assert SuiteConfig().lengths == (20.0, 40.0, 80.0)

    def test_extra_length_is_merged(self) -> None:
        """--L 80 keeps the list, --L 160 extends it."""
        assert SuiteConfig(length=80.0).lengths == (20.0, 40.0, 80.0)
        assert SuiteConfig(length=160.0).lengths == (20.0, 40.0, 80.0, 160.0)

    def test_short_length_rejected(self) -> None:
        """L below 4 leaves no window before t_n."""
        with pytest.raises(ValidationError):
            SuiteConfig(length=2.0)

    def test_effective_tolerances_follow_scale(self) -> None:
        """--tol-scale multiplies the tolerances."""
        config = SuiteConfig(tol_scale=10.0)
        assert config.effective_tolerances().pic == pytest.approx(1e-2)


class TestToleranceConfig:
    """Tests for ToleranceConfig schema."""

    def test_acceptance_defaults(self) -> None:
        """Defaults match the published acceptance tolerances."""
        tolerances = ToleranceConfig()
        assert tolerances.cylinder == 1e-12
        assert tolerances.heat_boundary == 1e-14
        assert tolerances.newton == 1e-10
        assert tolerances.uniqueness == 1e-8
        assert tolerances.pinch_norm == 1e-10

    def test_scaled_multiplies_float_tolerances(self) -> None:
        """Every float tolerance scales; iteration counts and mass bounds do not."""
        scaled = ToleranceConfig().scaled(2.0)
        assert scaled.cylinder == pytest.approx(2e-12)
        assert scaled.soliton_residual == pytest.approx(2e-6)
        assert scaled.newton_iterations == 10
        assert scaled.kernel_mass == 2.0

    def test_scaled_rejects_nonpositive_factor(self) -> None:
        """Scaling by zero would make every check fail."""
        with pytest.raises(ValueError, match="factor must be positive"):
            ToleranceConfig().scaled(0.0)

    def test_negative_tolerance_rejected(self) -> None:
        """Tolerances are positive."""
        with pytest.raises(ValidationError):
            ToleranceConfig(pic=-1.0)


class TestGridConfig:
    """Tests for GridConfig schema."""

    def test_acceptance_sizes(self) -> None:
        """10^6 oracle frames, 1000 operators, 100 trajectories, 20 Newton starts."""
        grid = GridConfig()
        assert grid.oracle_samples == 1_000_000
        assert grid.random_operators == 1000
        assert grid.trajectories == 100
        assert grid.cmc_starts == 20
        assert grid.glue_epsilons == (1e-2, 1e-3, 1e-4)

    def test_admissible_delta(self) -> None:
        """The CMC perturbation stays below the admissibility gate."""
        with pytest.raises(ValidationError):
            GridConfig(cmc_delta=0.2)

    def test_empty_lengths_rejected(self) -> None:
        """At least one neck length."""
        with pytest.raises(ValidationError):
            GridConfig(lengths=())
