"""
Representation formula for the heat equation on [-L, L] x (t0, 0].

    u(z, t) = int S(z, t - t0; w) u(w, t0) dw
              - int_{t0}^{t} [ dS/dw(z, t - s; L) u(L, s)
                               - dS/dw(z, t - s; -L) u(-L, s) ] ds

The initial integral uses composite Simpson on a fine grid; the boundary
integrals use adaptive Gauss-Kronrod quadrature from scipy.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, simpson

from neck_lab.core.exceptions import DomainWindowError
from neck_lab.heat.kernel import DirichletKernel

logger = logging.getLogger(__name__)

DEFAULT_QUADRATURE_POINTS: int = 4001
MIN_POINTS_PER_WIDTH: float = 10.0
"""Simpson is used only when the kernel width spans this many grid cells."""

ScalarField = Callable[[float], float]


@dataclass(frozen=True)
class HeatWindow:
    """
    Space-time window [-L, L] x [t0, t1] of the boundary value problem.

    Attributes:
        length: Half-width L.
        t0: Initial time; defaults to -L.
        t1: Final admissible time.
    """

    length: float
    t0: float | None = None
    t1: float = 0.0

    def __post_init__(self) -> None:
        """Validate the window."""
        if self.length <= 0:
            raise ValueError(f"length must be positive: {self.length}")
        if self.start >= self.t1:
            raise ValueError(f"window must have t0 < t1: {self.start} >= {self.t1}")

    @property
    def start(self) -> float:
        """Initial time."""
        return -self.length if self.t0 is None else self.t0

    def check(self, z: float, t: float) -> None:
        """
        Reject queries outside the open-in-time window.

        Raises:
            DomainWindowError: If |z| > L or t is not in (t0, t1].
        """
        if abs(z) > self.length or not self.start < t <= self.t1:
            raise DomainWindowError(
                f"query ({z}, {t}) outside [-{self.length}, {self.length}] x "
                f"({self.start}, {self.t1}]",
                point=(z, t),
            )


def _initial_integral(
    kernel: DirichletKernel,
    initial: ScalarField,
    z: float,
    tau: float,
    points: int,
) -> float:
    length = kernel.length
    dz = 2.0 * length / (points - 1)
    if math.sqrt(tau) >= MIN_POINTS_PER_WIDTH * dz:
        w = np.linspace(-length, length, points)
        data = np.array([initial(float(x)) for x in w])
        return float(simpson(kernel.evaluate(z, tau, w).value * data, x=w))

    # narrow kernel: integrate around the peak adaptively
    def integrand(x: float) -> float:
        return float(kernel.evaluate(z, tau, x).value) * initial(x)

    value, _ = quad(integrand, -length, length, points=[z], limit=400, epsabs=1e-13)
    return float(value)


def representation_solve(
    initial: ScalarField,
    left: ScalarField,
    right: ScalarField,
    z: float,
    t: float,
    window: HeatWindow,
    points: int = DEFAULT_QUADRATURE_POINTS,
) -> float:
    """
    Evaluate u(z, t) from initial and Dirichlet data.

    Args:
        initial: u(w, t0).
        left: u(-L, s).
        right: u(L, s).
        z: Query position.
        t: Query time.
        window: The space-time window.
        points: Simpson nodes for the initial integral (odd).

    Returns:
        u(z, t).

    Raises:
        DomainWindowError: If (z, t) lies outside the window.
    """
    window.check(z, t)
    if points < 3 or points % 2 == 0:
        raise ValueError(f"points must be odd and at least 3: {points}")
    length = window.length
    if abs(z) == length:
        return float(right(t) if z > 0 else left(t))
    kernel = DirichletKernel(length)
    t0 = window.start
    value = _initial_integral(kernel, initial, z, t - t0, points)

    def flux(s: float) -> float:
        tau = t - s
        if tau <= 0:
            return 0.0
        d_right = float(kernel.w_derivative(z, tau, length))
        d_left = float(kernel.w_derivative(z, tau, -length))
        return d_right * right(s) - d_left * left(s)

    boundary, error = quad(flux, t0, t, limit=400, epsabs=1e-13, epsrel=1e-12)
    logger.debug("Boundary integral at (%g, %g): %.6e (+- %.1e)", z, t, boundary, error)
    return value - float(boundary)
