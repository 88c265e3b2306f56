"""
Unit tests for spectral.profile module.

Tests cover:
1. Trajectory construction and tabular export
2. Profile extraction from exact neutral and growing combinations
3. Hypothesis checks on |h|
4. Random level-mixed trajectories and the decay of the profile residual
"""

import numpy as np
import pytest

from neck_lab.core.exceptions import HypothesisViolationError, InputValidationError
from neck_lab.core.types import ModeKind
from neck_lab.heat.finite_difference import mode_grid
from neck_lab.spectral.decomposition import SliceTensor
from neck_lab.spectral.modes import ModeCoefficient, mode_evolve
from neck_lab.spectral.profile import (
    NORM_SAMPLES,
    ProfileWindow,
    SpectralMode,
    SpectralTrajectory,
    asymptotic_profile,
    check_hypotheses,
    profile_decay,
    random_trajectory,
)
from neck_lab.sphere.polynomials import SpherePolynomial
from neck_lab.sphere.quadrature import random_sphere_points

N = 4
LENGTH = 20.0
E1 = np.array([1.0, 0.0, 0.0, 0.0])


def _constant_mode(
    kind: ModeKind, eigenvalue: float, amplitude: float, angular: SliceTensor, level: int
) -> SpectralMode:
    """Coefficient amplitude * (-t)^p on the standard test grid."""
    z = mode_grid(LENGTH / 2, 0.25)
    t = np.linspace(-LENGTH / 2, -0.25, 196)
    mode = ModeCoefficient(N, kind, eigenvalue)
    p = mode.power
    evolved = mode_evolve(
        mode,
        np.full_like(z, amplitude * (-t[0]) ** p),
        lambda s: amplitude * (-s) ** p,
        lambda s: amplitude * (-s) ** p,
        z,
        t,
    )
    return SpectralMode(evolved, angular, level)


def _neutral_trajectory(q: float = 0.2, beta: float = 0.3) -> SpectralTrajectory:
    modes = (
        _constant_mode(
            ModeKind.OMEGA, 0.0, 0.5, SliceTensor.of_omega(SpherePolynomial.constant(N, 1.0)), 0
        ),
        _constant_mode(
            ModeKind.BETA, 0.0, beta, SliceTensor.of_beta(SpherePolynomial.constant(N, 1.0)), 0
        ),
        _constant_mode(
            ModeKind.OMEGA, 3.0, q, SliceTensor.of_omega(SpherePolynomial.linear(E1)), 1
        ),
    )
    return SpectralTrajectory(N, LENGTH, modes)


@pytest.fixture(scope="module")
def chi_trajectory() -> SpectralTrajectory:
    """Random trajectory made only of the chi mode."""
    return random_trajectory(N, LENGTH, seed=4, kinds=(ModeKind.CHI,))


# =============================================================================
# TRAJECTORY TESTS
# =============================================================================


class TestSpectralTrajectory:
    """Tests for SpectralMode and SpectralTrajectory."""

    def test_unevolved_mode_rejected(self) -> None:
        """A coefficient without values cannot enter a trajectory."""
        with pytest.raises(InputValidationError, match="not been evolved"):
            SpectralMode(ModeCoefficient(N, ModeKind.BETA, 0.0), SliceTensor.zero(N))

    def test_empty_trajectory_rejected(self) -> None:
        """At least one mode is required."""
        with pytest.raises(InputValidationError, match="at least one mode"):
            SpectralTrajectory(N, LENGTH, ())

    def test_to_frame_columns(self) -> None:
        """The long table lists every mode on every grid point."""
        trajectory = _neutral_trajectory()
        frame = trajectory.to_frame()
        assert list(frame.columns) == ["mode", "kind", "eigenvalue", "t", "z", "value"]
        assert len(frame) == 3 * trajectory.t.size * trajectory.z.size
        assert set(frame["kind"]) == {"omega", "beta"}

    def test_sup_norm_of_constant_beta(self) -> None:
        """A lone beta dz^2 mode has |h| = beta at every time."""
        mode = _constant_mode(
            ModeKind.BETA, 0.0, 0.3, SliceTensor.of_beta(SpherePolynomial.constant(N, 1.0)), 0
        )
        trajectory = SpectralTrajectory(N, LENGTH, (mode,))
        rows = np.array([0, 50, 195])
        heights = np.array([0, 40, 80])
        norms = trajectory.sup_norm(rows, heights, random_sphere_points(N, 32, seed=0))
        assert np.allclose(norms, 0.3)


# =============================================================================
# PROFILE TESTS
# =============================================================================


class TestAsymptoticProfile:
    """Tests for asymptotic_profile function."""

    def test_exact_neutral_combination(self) -> None:
        """omega_bar, beta_bar and psi are recovered with a vanishing residual."""
        fit = asymptotic_profile(_neutral_trajectory(q=0.2, beta=0.3))
        assert np.allclose(fit.psi, 0.2 * E1, atol=1e-12)
        assert np.allclose(fit.beta_bar, 0.3)
        assert np.allclose(fit.omega_bar, 0.5)
        assert fit.residual < 1e-10

    def test_to_dict(self) -> None:
        """The summary holds the center values and L."""
        summary = asymptotic_profile(_neutral_trajectory()).to_dict()
        assert set(summary) == {"omega_bar", "beta_bar", "psi", "residual", "L"}
        assert summary["L"] == LENGTH
        assert summary["psi"][0] == pytest.approx(0.2)

    def test_pure_chi_has_no_psi(self, chi_trajectory: SpectralTrajectory) -> None:
        """Without first-harmonic omega modes psi vanishes."""
        fit = asymptotic_profile(chi_trajectory)
        assert np.allclose(fit.psi, 0.0)
        assert np.allclose(fit.omega_bar, 0.0)
        assert fit.residual > 0.0

    def test_hypothesis_violation(self) -> None:
        """|h| > 1 before -L/4 is reported with the bound and measurement."""
        trajectory = _neutral_trajectory(beta=5.0)
        with pytest.raises(HypothesisViolationError) as info:
            asymptotic_profile(trajectory)
        assert info.value.bound == 1.0
        assert info.value.measured is not None
        assert info.value.measured > 4.9

    def test_check_can_be_skipped(self) -> None:
        """check=False extracts the profile of an oversized solution."""
        fit = asymptotic_profile(_neutral_trajectory(beta=5.0), check=False)
        assert np.allclose(fit.beta_bar, 5.0)

    def test_empty_window_rejected(self) -> None:
        """A window that misses every time row is refused."""
        with pytest.raises(InputValidationError, match="no grid times"):
            asymptotic_profile(_neutral_trajectory(), ProfileWindow(t_min=-0.1))

    @pytest.mark.parametrize(
        ("kwargs", "match"),
        [
            ({"z_max": 0.0}, "z_max"),
            ({"t_min": 0.0}, "t_min"),
            ({"fit_fraction": 1.5}, "fit_fraction"),
        ],
    )
    def test_window_validation(self, kwargs: dict[str, float], match: str) -> None:
        """Invalid window parameters raise ValueError."""
        with pytest.raises(ValueError, match=match):
            ProfileWindow(**kwargs)


# =============================================================================
# RANDOM TRAJECTORY TESTS
# =============================================================================


class TestRandomTrajectory:
    """Tests for random_trajectory and profile_decay functions."""

    def test_early_bound_is_met(self, chi_trajectory: SpectralTrajectory) -> None:
        """The scaled solution satisfies the size hypotheses."""
        check_hypotheses(chi_trajectory, random_sphere_points(N, NORM_SAMPLES, seed=1))

    def test_same_seed_same_solution(self) -> None:
        """Generation is deterministic."""
        first = random_trajectory(N, 12.0, seed=7, kinds=(ModeKind.SIGMA,))
        second = random_trajectory(N, 12.0, seed=7, kinds=(ModeKind.SIGMA,))
        for a, b in zip(first.modes, second.modes):
            assert np.array_equal(a.values, b.values)

    def test_time_range(self, chi_trajectory: SpectralTrajectory) -> None:
        """Times run from -L/2 to -1/(2(n-2))."""
        assert chi_trajectory.t[0] == pytest.approx(-LENGTH / 2)
        assert chi_trajectory.t[-1] == pytest.approx(-0.25)

    def test_unknown_kind_rejected(self) -> None:
        """Restricting to a kind outside the catalog fails."""
        with pytest.raises(InputValidationError, match="no catalog mode"):
            random_trajectory(N, 12.0, kinds=(ModeKind.VECTOR,))

    def test_non_positive_length_rejected(self) -> None:
        """L must be positive."""
        with pytest.raises(ValueError, match="length"):
            random_trajectory(N, 0.0)

    @pytest.mark.slow
    def test_residual_decays_with_length(self) -> None:
        """Residual slope in L is at most -1/(2(n-2)) + 0.1."""
        rows, slope = profile_decay(N, lengths=(20.0, 40.0, 80.0), seed=0)
        assert [r.length for r in rows] == [20.0, 40.0, 80.0]
        assert rows[-1].residual < rows[0].residual
        assert slope <= -1.0 / (2 * (N - 2)) + 0.1
