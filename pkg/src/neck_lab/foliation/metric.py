"""
Near-cylindrical metrics g = dz^2 + W(z, theta) g_S on S^{n-1} x [-10, 10].

The warp W = w0(z) + tau(z) cos(theta) carries perturbations of the unit
cylinder on harmonic levels 0 and 1, with theta the polar angle from a
fixed unit axis e (so cos(theta) = <x, e>). Both coefficients are stored
as Chebyshev series on the z-domain, which gives exact derivatives of
every order for the admissibility seminorm and the curvature formulas.
"""

from __future__ import annotations

import functools
import hashlib
import logging
from collections.abc import Callable
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.polynomial import Chebyshev

from neck_lab.core.exceptions import AdmissibilityError, DimensionError, InputValidationError
from neck_lab.core.types import EPSILON_0, FloatArray, Vector

logger = logging.getLogger(__name__)

HALF_LENGTH: float = 10.0
"""Default z-domain is [-HALF_LENGTH, HALF_LENGTH]."""

INTERPOLATION_DEGREE: int = 64
TRIM_TOLERANCE: float = 1e-15
SEMINORM_ORDER: int = 10
SEMINORM_SAMPLES: int = 2001
AXIS_TOLERANCE: float = 1e-12

ScalarProfile = Callable[[FloatArray], FloatArray]


class WarpSample(NamedTuple):
    """W and its partial derivatives in z and theta, up to second order."""

    w: FloatArray
    w_z: FloatArray
    w_zz: FloatArray
    w_t: FloatArray
    w_zt: FloatArray
    w_tt: FloatArray


def _interpolate(profile: ScalarProfile, half_length: float) -> Chebyshev:
    func = np.vectorize(lambda z: float(profile(z)), otypes=[float])
    series = Chebyshev.interpolate(func, INTERPOLATION_DEGREE, domain=[-half_length, half_length])
    return series.trim(TRIM_TOLERANCE)


def _unit_axis(n: int, axis: Vector | None) -> Vector:
    if axis is None:
        e = np.zeros(n)
        e[0] = 1.0
        return e
    e = np.asarray(axis, dtype=float)
    if e.shape != (n,):
        raise InputValidationError(f"axis must have length {n}", field="axis", value=e.shape)
    if abs(float(np.linalg.norm(e)) - 1.0) > AXIS_TOLERANCE:
        raise InputValidationError("axis must be a unit vector", field="axis")
    return e


@dataclass(frozen=True, eq=False)
class NeckMetric:
    """
    Metric dz^2 + (w0(z) + tau(z) <x, e>) g_S on the cylinder.

    Attributes:
        n: Dimension of the manifold.
        mean: Level-0 coefficient w0 as a Chebyshev series in z.
        tilt: Level-1 coefficient tau along the axis.
        axis: Unit vector e in R^n.

    Example:
        >>> metric = NeckMetric.cylinder(4)
        >>> metric.perturbation_norm
        0.0
    """

    n: int
    mean: Chebyshev
    tilt: Chebyshev
    axis: Vector

    def __post_init__(self) -> None:
        """Validate dimension, domains and positivity of W."""
        if self.n < 4:
            raise DimensionError(f"n must be at least 4: {self.n}", n=self.n, required=4)
        if not np.allclose(self.mean.domain, self.tilt.domain):
            raise InputValidationError("mean and tilt must share a z-domain", field="tilt")
        lo, hi = (float(v) for v in self.mean.domain)
        if hi <= 0 or abs(lo + hi) > 1e-12:
            raise InputValidationError(
                f"z-domain must be symmetric about 0: [{lo}, {hi}]", field="mean"
            )
        z = np.linspace(lo, hi, SEMINORM_SAMPLES)
        floor = self.mean(z) - np.abs(self.tilt(z))
        if np.min(floor) <= 0:
            bad = int(np.argmin(floor))
            raise InputValidationError(
                f"metric is not positive definite near z={z[bad]:.6g}",
                field="mean",
                value=float(floor[bad]),
            )
        object.__setattr__(self, "axis", _unit_axis(self.n, self.axis))

    # -------------------------------------------------------------------------
    # Constructors
    # -------------------------------------------------------------------------

    @classmethod
    def from_profiles(
        cls,
        n: int,
        mean: ScalarProfile,
        tilt: ScalarProfile | None = None,
        axis: Vector | None = None,
        half_length: float = HALF_LENGTH,
    ) -> NeckMetric:
        """Interpolate w0 and tau from callables on [-half_length, half_length]."""
        if half_length <= 0:
            raise ValueError(f"half_length must be positive: {half_length}")
        tilt_series = (
            Chebyshev([0.0], domain=[-half_length, half_length])
            if tilt is None
            else _interpolate(tilt, half_length)
        )
        return cls(n, _interpolate(mean, half_length), tilt_series, _unit_axis(n, axis))

    @classmethod
    def cylinder(cls, n: int, half_length: float = HALF_LENGTH) -> NeckMetric:
        """The unit cylinder dz^2 + g_S."""
        domain = [-half_length, half_length]
        return cls(
            n, Chebyshev([1.0], domain=domain), Chebyshev([0.0], domain=domain), _unit_axis(n, None)
        )

    @classmethod
    def warped(
        cls, n: int, phi: ScalarProfile, half_length: float = HALF_LENGTH
    ) -> NeckMetric:
        """Warped product dz^2 + phi(z)^2 g_S."""
        return cls.from_profiles(n, lambda z: phi(z) ** 2, half_length=half_length)

    @classmethod
    def bump(
        cls,
        n: int,
        delta: float,
        profile: ScalarProfile = np.sin,
        axis: Vector | None = None,
        half_length: float = HALF_LENGTH,
    ) -> NeckMetric:
        """Unit cylinder plus delta * profile(z) <x, e> g_S."""
        return cls.from_profiles(
            n,
            lambda z: np.ones_like(z),
            lambda z: delta * profile(z),
            axis=axis,
            half_length=half_length,
        )

    # -------------------------------------------------------------------------
    # Evaluation
    # -------------------------------------------------------------------------

    @property
    def half_length(self) -> float:
        """Right end of the z-domain."""
        return float(self.mean.domain[1])

    @functools.cached_property
    def _derivatives(self) -> tuple[Chebyshev, ...]:
        return (self.mean.deriv(1), self.mean.deriv(2), self.tilt.deriv(1), self.tilt.deriv(2))

    def warp(self, z: FloatArray, theta: FloatArray) -> FloatArray:
        """W(z, theta)."""
        return np.asarray(self.mean(z) + self.tilt(z) * np.cos(theta))

    def sample(self, z: FloatArray, theta: FloatArray) -> WarpSample:
        """W with its z and theta partials at broadcast (z, theta)."""
        z = np.asarray(z, dtype=float)
        theta = np.asarray(theta, dtype=float)
        dm, ddm, dt, ddt = self._derivatives
        c, s = np.cos(theta), np.sin(theta)
        tau = self.tilt(z)
        dtau = dt(z)
        return WarpSample(
            w=self.mean(z) + tau * c,
            w_z=dm(z) + dtau * c,
            w_zz=ddm(z) + ddt(z) * c,
            w_t=-tau * s,
            w_zt=-dtau * s,
            w_tt=-tau * c,
        )

    def polar_angle(self, points: FloatArray) -> FloatArray:
        """theta = arccos <x, e> for unit points x of shape (P, n)."""
        return np.asarray(np.arccos(np.clip(points @ self.axis, -1.0, 1.0)))

    # -------------------------------------------------------------------------
    # Admissibility
    # -------------------------------------------------------------------------

    @functools.cached_property
    def perturbation_norm(self) -> float:
        """
        epsilon_hat = max_{l <= 10} sup |d^l (w0 - 1)| + sup |d^l tau|.

        Derivatives are exact on the Chebyshev representation and the
        suprema are taken over a dense grid of the z-domain.
        """
        lo, hi = (float(v) for v in self.mean.domain)
        z = np.linspace(lo, hi, SEMINORM_SAMPLES)
        offset = self.mean - 1.0
        tilt = self.tilt
        best = 0.0
        for _ in range(SEMINORM_ORDER + 1):
            best = max(best, float(np.max(np.abs(offset(z))) + np.max(np.abs(tilt(z)))))
            offset = offset.deriv()
            tilt = tilt.deriv()
        return best

    def check_admissible(self, epsilon_0: float = EPSILON_0) -> float:
        """
        Return epsilon_hat, raising when it exceeds the gate.

        Raises:
            AdmissibilityError: If epsilon_hat > epsilon_0.
        """
        eps = self.perturbation_norm
        if eps > epsilon_0:
            raise AdmissibilityError(
                f"perturbation {eps:.4g} exceeds the admissibility gate {epsilon_0:.4g}",
                epsilon_hat=eps,
                epsilon_0=epsilon_0,
            )
        return eps

    def metric_hash(self) -> str:
        """Short digest of n, the axis and both coefficient series."""
        digest = hashlib.sha256()
        digest.update(str(self.n).encode())
        for array in (self.mean.domain, self.mean.coef, self.tilt.coef, self.axis):
            digest.update(np.ascontiguousarray(array, dtype=float).tobytes())
        return digest.hexdigest()[:16]

    def __repr__(self) -> str:
        return (
            f"NeckMetric(n={self.n}, half_length={self.half_length:g}, "
            f"mean_degree={self.mean.degree()}, tilt_degree={self.tilt.degree()})"
        )


def slice_mean_curvature(metric: NeckMetric, z0: float) -> float:
    """(n-1) w0'(z0) / (2 w0(z0)) for a metric without tilt; H of the slice z = z0."""
    if np.any(np.abs(metric.tilt.coef) > 0):
        raise InputValidationError("slices are CMC only when the tilt vanishes", field="tilt")
    w0 = float(metric.mean(z0))
    dw0 = float(metric.mean.deriv()(z0))
    return (metric.n - 1) * dw0 / (2.0 * w0)
