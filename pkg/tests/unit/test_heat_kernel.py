"""
Unit tests for heat.kernel module.

Tests cover:
1. Dirichlet boundary values and symmetry of the image sum
2. Free-space limit, positivity and mass
3. Semigroup property
4. Truncation order and tail bound
5. Boundary flux bound and its monotonicity in L
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import simpson

from neck_lab.core.exceptions import TimeDomainError
from neck_lab.heat.kernel import (
    DirichletKernel,
    boundary_kernel_bound,
    kernel_eval,
    truncation_bound,
    truncation_order,
)


class TestKernelEval:
    """Tests for kernel_eval function."""

    @pytest.mark.parametrize("t", [0.1, 1.0, 10.0, 100.0])
    def test_vanishes_on_boundary(self, t: float) -> None:
        """S(+-L, t; w) = 0 up to the tail bound."""
        w = np.linspace(-9.5, 9.5, 39)
        for edge in (-10.0, 10.0):
            assert np.max(np.abs(kernel_eval(edge, t, w, 10.0).value)) < 1e-14

    @given(
        z=st.floats(min_value=-4.9, max_value=4.9),
        w=st.floats(min_value=-4.9, max_value=4.9),
        t=st.floats(min_value=0.05, max_value=20.0),
    )
    @settings(max_examples=50)
    def test_symmetric_in_space_arguments(self, z: float, w: float, t: float) -> None:
        """S(z, t; w) = S(w, t; z)."""
        forward = float(kernel_eval(z, t, w, 5.0).value)
        backward = float(kernel_eval(w, t, z, 5.0).value)
        assert forward == pytest.approx(backward, rel=1e-12, abs=1e-15)

    def test_free_space_limit(self) -> None:
        """Far from the walls the kernel is the Gaussian, 1/sqrt(4 pi) at the peak."""
        value = float(kernel_eval(0.0, 1.0, 0.0, 50.0).value)
        assert value == pytest.approx(1.0 / math.sqrt(4.0 * math.pi), abs=1e-14)

    def test_positive_in_interior(self) -> None:
        """S > 0 strictly inside the interval."""
        z = np.linspace(-9.0, 9.0, 37)
        values = kernel_eval(z[:, None], 1.0, z[None, :], 10.0).value
        assert np.all(values > 0)

    @pytest.mark.parametrize("t", [0.5, 5.0, 50.0])
    def test_mass_at_most_one(self, t: float) -> None:
        """The kernel integrates to at most 1 in w."""
        w = np.linspace(-10.0, 10.0, 4001)
        mass = simpson(np.abs(kernel_eval(1.0, t, w, 10.0).value), x=w)
        assert mass <= 1.0 + 1e-10

    def test_semigroup(self) -> None:
        """S(t1 + t2) = S(t1) * S(t2) as an integral operator."""
        y = np.linspace(-5.0, 5.0, 4001)
        left = kernel_eval(1.0, 0.5, y, 5.0).value
        right = kernel_eval(y, 0.7, -0.5, 5.0).value
        composed = simpson(left * right, x=y)
        direct = float(kernel_eval(1.0, 1.2, -0.5, 5.0).value)
        assert composed == pytest.approx(direct, rel=1e-7)

    def test_nonpositive_time_rejected(self) -> None:
        """The kernel is defined for t > 0 only."""
        with pytest.raises(TimeDomainError, match="positive"):
            kernel_eval(0.0, 0.0, 0.0, 1.0)

    def test_w_derivative_matches_difference_quotient(self) -> None:
        """dS/dw agrees with a central difference."""
        kernel = DirichletKernel(3.0)
        h = 1e-5
        for w in (-2.5, 0.3, 2.9):
            numeric = (
                float(kernel.evaluate(0.4, 0.8, w + h).value)
                - float(kernel.evaluate(0.4, 0.8, w - h).value)
            ) / (2 * h)
            assert float(kernel.w_derivative(0.4, 0.8, w)) == pytest.approx(numeric, rel=1e-7)


class TestTruncation:
    """Tests for truncation_order and truncation_bound functions."""

    @pytest.mark.parametrize("t", [0.01, 1.0, 100.0, 1e4])
    def test_bound_meets_target(self, t: float) -> None:
        """The selected order meets the 1e-14 target."""
        order = truncation_order(10.0, t)
        assert truncation_bound(10.0, t, order) <= 1e-14

    def test_order_grows_with_time(self) -> None:
        """Longer times need more images."""
        orders = [truncation_order(1.0, t) for t in (0.1, 10.0, 100.0)]
        assert orders == sorted(orders)
        assert orders[-1] > orders[0]

    def test_reported_order_and_bound(self) -> None:
        """KernelValue carries the order and its bound."""
        result = kernel_eval(0.0, 2.0, 0.0, 10.0)
        assert result.order == truncation_order(10.0, 2.0)
        assert result.bound <= 1e-14

    def test_fixed_order_respected(self) -> None:
        """An explicit order overrides the adaptive choice."""
        assert kernel_eval(0.0, 2.0, 0.0, 10.0, order=3).order == 3

    def test_invalid_parameters_rejected(self) -> None:
        """length and target must be positive."""
        with pytest.raises(ValueError, match="length must be positive"):
            DirichletKernel(0.0)
        with pytest.raises(ValueError, match="order must be non-negative"):
            DirichletKernel(1.0, order=-1)


class TestBoundaryKernelBound:
    """Tests for boundary_kernel_bound function."""

    @pytest.mark.parametrize("tau", [0.5, 1.0, 10.0, 100.0, 1000.0])
    @pytest.mark.parametrize("fraction", [0.0, 0.2, 0.4])
    def test_flux_below_bound(self, tau: float, fraction: float) -> None:
        """The boundary flux obeys the Gaussian bound for |z| <= 0.4 L."""
        value, bound = boundary_kernel_bound(fraction * 10.0, 0.0, -tau, 10.0)
        assert value <= bound

    def test_bound_monotone_in_length(self) -> None:
        """The bound increases with L while L^2 <= 50 (t - s)."""
        tau = 8.0
        lengths = np.linspace(1.0, math.sqrt(50.0 * tau), 25)
        bounds = [boundary_kernel_bound(0.0, 0.0, -tau, float(L))[1] for L in lengths]
        assert np.all(np.diff(bounds) >= 0)

    def test_requires_s_before_t(self) -> None:
        """s must precede t."""
        with pytest.raises(TimeDomainError, match="s < t"):
            boundary_kernel_bound(0.0, 1.0, 1.0, 5.0)
