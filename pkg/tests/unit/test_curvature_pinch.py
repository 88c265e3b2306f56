"""
Unit tests for curvature.pinch module.

Tests cover:
1. Trivial values (h = M, h = 0)
2. Agreement with a bisection oracle on the semidefinite constraints
3. Homogeneity and sharpness
4. Error handling for non positive-definite weights and mismatched shapes
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from neck_lab.core.exceptions import InputValidationError, NotPositiveDefiniteError
from neck_lab.curvature.pinch import pinch_norm, weighted_pinch_norm


def _random_spd(rng: np.random.Generator, n: int) -> np.ndarray:
    x = rng.standard_normal((n, n))
    return x @ x.T + 0.5 * np.eye(n)


def _random_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    x = rng.standard_normal((n, n))
    return x + x.T


def _feasible(lam: float, h: np.ndarray, m: np.ndarray, slack: float = 0.0) -> bool:
    upper = np.linalg.eigvalsh(lam * m - h)[0]
    lower = np.linalg.eigvalsh(lam * m + h)[0]
    return bool(min(upper, lower) >= -slack)


def _bisection(h: np.ndarray, m: np.ndarray) -> float:
    lo, hi = 0.0, 1.0
    while not _feasible(hi, h, m):
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _feasible(mid, h, m):
            hi = mid
        else:
            lo = mid
    return hi


class TestWeightedPinchNorm:
    """Tests for weighted_pinch_norm function."""

    def test_h_equal_weight_gives_one(self) -> None:
        """h = Ric - rho g has norm exactly 1."""
        rng = np.random.default_rng(0)
        ric = _random_spd(rng, 4) + 2 * np.eye(4)
        h = ric - 1.5 * np.eye(4)
        assert weighted_pinch_norm(h, ric, 1.5) == pytest.approx(1.0, abs=1e-12)

    def test_zero_h_gives_zero(self) -> None:
        """h = 0 has norm 0."""
        assert weighted_pinch_norm(np.zeros((3, 3)), np.eye(3), 0.5) == 0.0

    @given(seed=st.integers(min_value=0, max_value=100_000))
    @settings(max_examples=30, deadline=None)
    def test_matches_bisection_oracle(self, seed: int) -> None:
        """Closed form equals bisection on both semidefinite constraints."""
        rng = np.random.default_rng(seed)
        m = _random_spd(rng, 4)
        h = _random_symmetric(rng, 4)
        rho = 0.25
        lam = weighted_pinch_norm(h, m + rho * np.eye(4), rho)
        assert lam == pytest.approx(_bisection(h, m), rel=1e-10, abs=1e-10)

    def test_homogeneity(self) -> None:
        """Scaling h by c scales the norm by |c|."""
        rng = np.random.default_rng(1)
        ric, h = _random_spd(rng, 5), _random_symmetric(rng, 5)
        base = weighted_pinch_norm(h, ric, 0.1)
        for c in (-3.0, 0.5, 7.0):
            assert weighted_pinch_norm(c * h, ric, 0.1) == pytest.approx(abs(c) * base, rel=1e-12)

    def test_sharpness(self) -> None:
        """Feasible just above the norm, infeasible 1e-6 below it."""
        rng = np.random.default_rng(2)
        m, h = _random_spd(rng, 4), _random_symmetric(rng, 4)
        lam = weighted_pinch_norm(h, m, 0.0)
        assert _feasible(lam + 1e-12, h, m, slack=1e-10)
        assert not _feasible(lam - 1e-6, h, m)

    def test_non_positive_definite_weight_rejected(self) -> None:
        """Ric - rho g must be positive definite."""
        with pytest.raises(NotPositiveDefiniteError, match="positive definite"):
            weighted_pinch_norm(np.eye(3), np.eye(3), 1.0)

    def test_asymmetric_h_rejected(self) -> None:
        """h must be symmetric."""
        h = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(InputValidationError, match="h must be symmetric"):
            weighted_pinch_norm(h, np.eye(2), 0.0)

    def test_shape_mismatch_rejected(self) -> None:
        """h and Ric of different sizes is an input error, not a solver error."""
        with pytest.raises(InputValidationError, match="same shape"):
            weighted_pinch_norm(np.eye(3), np.eye(4), 0.0)


class TestPinchNorm:
    """Tests for pinch_norm function."""

    def test_psi_weighting(self) -> None:
        """psi = exp(2 rho t) lambda."""
        result = pinch_norm(np.eye(3), 3 * np.eye(3), rho=1.0, t=-0.5)
        assert result.lam == pytest.approx(0.5)
        assert result.psi == pytest.approx(math.exp(-1.0) * 0.5)

    def test_rho_must_be_positive(self) -> None:
        """rho > 0 for the weighted norm."""
        with pytest.raises(ValueError, match="rho must be positive"):
            pinch_norm(np.eye(3), np.eye(3), rho=0.0, t=0.0)
