"""
Pytest configuration and shared fixtures.

This module provides small run configurations for the neck-lab test
suite: the same checks as the acceptance runs, on grids small enough to
finish in seconds.
"""

from pathlib import Path

import pytest

from neck_lab.inputs.loaders import OUT_ENV_VAR
from neck_lab.inputs.schemas import GridConfig, SuiteConfig


def small_grid() -> GridConfig:
    """Grid of a fast run; tolerances stay at their defaults."""
    return GridConfig(
        oracle_samples=2000,
        frame_budget=8,
        random_operators=40,
        pinch_samples=20,
        trajectories=4,
        cone_starts=8,
        warped_dimensions=(4, 5),
        bryant_z_max=20.0,
        bryant_dz=1e-2,
        bryant_samples=3,
        heat_samples=1,
        lengths=(20.0, 40.0),
        cmc_starts=3,
        sphere_samples=60,
    )


@pytest.fixture
def small_config(tmp_path: Path) -> SuiteConfig:
    """
    Run configuration with a small grid, n = 4 and seed 7.

    Output goes to a per-test temporary directory.
    """
    return SuiteConfig(n=4, seed=7, out=tmp_path / "out", grid=small_grid())


@pytest.fixture(autouse=True)
def _no_out_env(monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep a NECK_LAB_OUT of the calling shell from redirecting test output."""
    monkeypatch.delenv(OUT_ENV_VAR, raising=False)
