"""
Per-mode evolution of the Lichnerowicz system on the shrinking cylinder.

Each component of h = omega g_S + chi + dz.sigma + sigma.dz + beta dz^2
expands in eigen-objects of the sphere Laplacian. A coefficient c_j(z, t)
of eigenvalue e then obeys

    c_t = c_zz - (e + shift) / (2(n - 2)(-t)) * c

with shift 0 for omega and beta, n - 2 for sigma and 2(n - 1) for chi.
Writing p = (e + shift)/(2(n - 2)), the function (-t)^{-p} c solves the
plain heat equation. Vector fields evolving by dV/dt = Delta V + Ric(V)
follow the same pattern with the rough-Laplacian eigenvalue and shift
-(n - 2).
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from neck_lab.core.exceptions import DimensionError, TimeDomainError
from neck_lab.core.types import FloatArray, Grid, ModeKind
from neck_lab.heat.finite_difference import BoundaryData, HeatField, fd_solve

logger = logging.getLogger(__name__)

MIN_SIGMA_EIGENVALUE: float = 1.0
"""Lower bound of the one-form Laplacian spectrum on S^{n-1}."""

MIN_CHI_EIGENVALUE: float = 2.0
"""Lowest eigenvalue on tracefree 2-tensors (tracefree Hessians of second harmonics)."""


def mode_shift(kind: ModeKind, n: int) -> float:
    """
    Shift added to the sphere eigenvalue in the mode equation.

    Example:
        >>> mode_shift(ModeKind.CHI, 4)
        6.0
    """
    if n < 3:
        raise DimensionError(f"n must be at least 3: {n}", n=n, required=3)
    shifts = {
        ModeKind.OMEGA: 0.0,
        ModeKind.BETA: 0.0,
        ModeKind.SIGMA: float(n - 2),
        ModeKind.CHI: float(2 * (n - 1)),
        ModeKind.VECTOR: -float(n - 2),
    }
    return shifts[kind]


def substitution_power(kind: ModeKind, n: int, eigenvalue: float) -> float:
    """p = (e + shift) / (2(n - 2)); (-t)^{-p} c solves the heat equation."""
    return (eigenvalue + mode_shift(kind, n)) / (2.0 * (n - 2))


@dataclass(frozen=True)
class ModeCoefficient:
    """
    One spectral coefficient of the Lichnerowicz system.

    Attributes:
        n: Dimension of the cylinder R x S^{n-1}.
        kind: Tensor component the coefficient belongs to.
        eigenvalue: Eigenvalue of -Delta_S on the matching bundle
            (scalar level eigenvalue, one-form mu, tracefree nu, or the
            rough-Laplacian eigenvalue for vector fields).
        field: Values on a (t, z) grid once evolved.

    Example:
        >>> mode = ModeCoefficient(4, ModeKind.OMEGA, 3.0)
        >>> mode.exponent
        0.75
    """

    n: int
    kind: ModeKind
    eigenvalue: float
    field: HeatField | None = None

    def __post_init__(self) -> None:
        """Check the spectral lower bounds of each bundle."""
        if self.n < 3:
            raise DimensionError(f"n must be at least 3: {self.n}", n=self.n, required=3)
        if self.eigenvalue < 0:
            raise ValueError(f"eigenvalue must be non-negative: {self.eigenvalue}")
        if self.kind is ModeKind.SIGMA and self.eigenvalue < MIN_SIGMA_EIGENVALUE:
            raise ValueError(f"one-form eigenvalue must be at least 1: {self.eigenvalue}")
        if self.kind is ModeKind.CHI and self.eigenvalue < MIN_CHI_EIGENVALUE:
            raise ValueError(f"tracefree eigenvalue must be at least 2: {self.eigenvalue}")

    @property
    def shift(self) -> float:
        """Shift of this kind."""
        return mode_shift(self.kind, self.n)

    @property
    def power(self) -> float:
        """Substitution power p."""
        return substitution_power(self.kind, self.n, self.eigenvalue)

    @property
    def exponent(self) -> float:
        """
        Barred exponent: lambda/(2(n-2)) for omega and beta, mu/(2(n-2)) for
        sigma, (nu + 2)/(2(n-2)) for chi, and p for vector fields.

        Always p - {0, 1/2, 1, 0} for (omega/beta, sigma, chi, vector).
        """
        offsets = {
            ModeKind.OMEGA: 0.0,
            ModeKind.BETA: 0.0,
            ModeKind.SIGMA: 0.5,
            ModeKind.CHI: 1.0,
            ModeKind.VECTOR: 0.0,
        }
        return self.power - offsets[self.kind]

    def with_field(self, field: HeatField) -> ModeCoefficient:
        """Copy carrying evolved values."""
        return ModeCoefficient(self.n, self.kind, self.eigenvalue, field)

    def potential(self, time: float) -> float:
        """V(t) = p / (-t) in c_t = c_zz - V c."""
        return self.power / (-time)


def _check_times(t: Grid) -> None:
    if t[-1] >= 0:
        raise TimeDomainError(f"time range must lie in t < 0, got t1 = {t[-1]}", t=float(t[-1]))


def mode_evolve(
    mode: ModeCoefficient,
    initial: FloatArray,
    left: BoundaryData,
    right: BoundaryData,
    z: Grid,
    t: Grid,
) -> ModeCoefficient:
    """
    Evolve a coefficient through the exact substitution c = (-t)^p c_hat.

    c_hat solves the heat equation and is handed to the Crank-Nicolson
    solver; the power of (-t) is multiplied back on every time row.

    Args:
        mode: Coefficient to evolve; any stored field is ignored.
        initial: c(z, t[0]).
        left: c(z[0], s).
        right: c(z[-1], s).
        z: Uniform spatial grid.
        t: Uniform time grid in t < 0.

    Returns:
        The mode with its field attached.

    Raises:
        TimeDomainError: If the range reaches t = 0.
    """
    _check_times(t)
    p = mode.power

    def hat(data: BoundaryData) -> BoundaryData:
        return lambda s: (-s) ** (-p) * data(s)

    t0 = float(t[0])
    heat = fd_solve((-t0) ** (-p) * np.asarray(initial, dtype=float), hat(left), hat(right), z, t)
    factors = (-t) ** p
    values = heat.values * factors[:, None]
    values[:, 0] = [left(float(s)) for s in t]
    values[:, -1] = [right(float(s)) for s in t]
    logger.debug("Evolved %s mode (p = %.4f) over %d steps", mode.kind.value, p, t.size - 1)
    return mode.with_field(HeatField(z=z, t=t, values=values))


def mode_evolve_direct(
    mode: ModeCoefficient,
    initial: FloatArray,
    left: BoundaryData,
    right: BoundaryData,
    z: Grid,
    t: Grid,
) -> ModeCoefficient:
    """Evolve c_t = c_zz - p c/(-t) directly, with the potential in the scheme."""
    _check_times(t)
    potential: Callable[[float], float] = mode.potential
    field = fd_solve(np.asarray(initial, dtype=float), left, right, z, t, potential=potential)
    return mode.with_field(field)


def constant_mode_solution(mode: ModeCoefficient, amplitude: float, t: Grid) -> FloatArray:
    """z-independent solution amplitude * (-t)^p at the given times."""
    return np.asarray(amplitude * (-np.asarray(t, dtype=float)) ** mode.power)
