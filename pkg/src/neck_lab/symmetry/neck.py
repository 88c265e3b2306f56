"""
Neck samples and their rescaling to the shrinking cylinder.

A NeckSample observes a near-cylindrical metric g_hat = dz^2 + W g_S along
the self-similar evolution

    g(t) = dz^2 + lambda(t) W(z_bar + (z - z_bar)/sqrt(lambda(t))) g_S,
    lambda(t) = -2(n - 2)(t - t_sing),

which is lambda(t) g_hat up to a stretch of z. The unit cylinder then
evolves as the shrinking cylinder g_bar(t) = dz^2 + (-2(n-2)t) g_S. The
neck scale r at (x_bar, t_bar) is fixed by R = (n - 1)(n - 2) r^-2.

After rescaling by r^-2 around (x_bar, t_bar) with s = t_n + (t - t_bar)/r^2
and zeta = (z - z_bar)/r, the sample differs from g_bar(s) only in the
sphere block:

    g_tilde(s) - g_bar(s) = (mu(s) W(z_bar + zeta/sqrt(mu)) + 2(n - 2)s) g_S,
    mu(s) = lambda(t)/r^2.
"""

from __future__ import annotations

import dataclasses
import functools
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from neck_lab.core.exceptions import InputValidationError, TimeDomainError, WindowError
from neck_lab.core.types import FloatArray, Height, Time, reference_time
from neck_lab.foliation.geometry import scalar_curvature
from neck_lab.foliation.metric import NeckMetric

logger = logging.getLogger(__name__)

NECK_SPAN: float = 100.0
"""Radius of the neck ball in units of r; the parabolic window is span * r^2 long."""

MAX_ORDER: int = 10
"""Highest derivative order of the closeness seminorm."""

MIN_EPSILON: float = 1.0 / MAX_ORDER
MAX_EPSILON: float = 1.0
BISECTION_STEPS: int = 40
TIME_SAMPLES: int = 9
BAND_SAMPLES: int = 201
THETA_SAMPLES: int = 65
WINDOW_SLACK: float = 1e-12


# =============================================================================
# SAMPLE
# =============================================================================


@dataclass(frozen=True, eq=False)
class NeckSample:
    """
    A metric observed around a center point over a backward time window.

    Attributes:
        metric: The shape g_hat of the neck.
        t_bar: Time of the center point.
        t_sing: Time at which the self-similar evolution becomes singular.
        center_z: z-coordinate of the center x_bar.
        center_theta: Polar angle of x_bar from the metric axis.
        window_start: Earliest time the sample covers; -inf for ancient data.
        scale: Neck scale r; taken from the scalar curvature when omitted.

    Example:
        >>> sample = NeckSample.at_unit_radius(NeckMetric.cylinder(4))
        >>> round(sample.radius, 12)
        1.0
    """

    metric: NeckMetric
    t_bar: Time
    t_sing: Time = 0.0
    center_z: Height = 0.0
    center_theta: float = math.pi / 2.0
    window_start: Time = -math.inf
    scale: float | None = None

    def __post_init__(self) -> None:
        """Validate times, center and scale."""
        if not self.t_bar < self.t_sing:
            raise TimeDomainError(
                f"t_bar must precede the singular time {self.t_sing}: {self.t_bar}", t=self.t_bar
            )
        if self.window_start > self.t_bar:
            raise ValueError(f"window_start must not exceed t_bar: {self.window_start}")
        if abs(self.center_z) > self.metric.half_length:
            raise InputValidationError(
                f"center_z must lie in the z-domain: {self.center_z}",
                field="center_z",
                value=self.center_z,
            )
        if not 0.0 <= self.center_theta <= math.pi:
            raise ValueError(f"center_theta must lie in [0, pi]: {self.center_theta}")
        if self.scale is not None and self.scale <= 0:
            raise ValueError(f"scale must be positive: {self.scale}")

    @classmethod
    def at_unit_radius(cls, metric: NeckMetric, **kwargs: object) -> NeckSample:
        """Sample taken at t_n, where the unit cylinder has radius 1."""
        return cls(metric, reference_time(metric.n), **kwargs)  # type: ignore[arg-type]

    @property
    def n(self) -> int:
        """Dimension."""
        return self.metric.n

    def homothety(self, t: Time) -> float:
        """
        lambda(t) = -2(n - 2)(t - t_sing).

        Raises:
            TimeDomainError: If t is not before t_sing.
        """
        if t >= self.t_sing:
            raise TimeDomainError(f"time must precede {self.t_sing}: {t}", t=t)
        return -2.0 * (self.n - 2) * (t - self.t_sing)

    @functools.cached_property
    def curvature(self) -> float:
        """R(x_bar, t_bar) = R_hat(x_bar) / lambda(t_bar)."""
        r_hat = float(scalar_curvature(self.metric, self.center_z, self.center_theta))
        return r_hat / self.homothety(self.t_bar)

    @functools.cached_property
    def radius(self) -> float:
        """
        Neck scale r.

        Raises:
            InputValidationError: If R <= 0 at the center and no scale was given.
        """
        if self.scale is not None:
            return self.scale
        if self.curvature <= 0:
            raise InputValidationError(
                "scalar curvature at the center must be positive",
                field="metric",
                value=self.curvature,
            )
        return math.sqrt((self.n - 1) * (self.n - 2) / self.curvature)

    def rho(self, t: Time | None = None) -> float:
        """r / sqrt(lambda(t)), the neck scale measured in g_hat; t defaults to t_bar."""
        return self.radius / math.sqrt(self.homothety(self.t_bar if t is None else t))

    def window(self, span: float = NECK_SPAN) -> tuple[float, float]:
        """[t_bar - span r^2, t_bar]."""
        return (self.t_bar - span * self.radius**2, self.t_bar)

    def require_window(self, span: float = NECK_SPAN) -> tuple[float, float]:
        """
        The window of the given span, checked against the sample's coverage.

        Raises:
            WindowError: If the window starts before window_start.
        """
        start, end = self.window(span)
        if start < self.window_start - WINDOW_SLACK * max(1.0, abs(start)):
            missing = f"[{start:.6g}, {self.window_start:.6g})"
            raise WindowError(
                f"window of span {span:g} needs times {missing} the sample does not cover",
                missing=missing,
            )
        return start, end

    def band(self, span: float = NECK_SPAN) -> tuple[float, float]:
        """z-range |z - z_bar| <= span * rho, clipped to the z-domain."""
        half = span * self.rho()
        edge = self.metric.half_length
        return (max(-edge, self.center_z - half), min(edge, self.center_z + half))

    def scaled(self, c: float) -> NeckSample:
        """The same sample with every length multiplied by c and every time by c^2."""
        if c <= 0:
            raise ValueError(f"c must be positive: {c}")
        c2 = c * c
        return dataclasses.replace(
            self,
            t_bar=c2 * self.t_bar,
            t_sing=c2 * self.t_sing,
            window_start=c2 * self.window_start,
            scale=None if self.scale is None else c * self.scale,
        )


# =============================================================================
# CLOSENESS TO THE SHRINKING CYLINDER
# =============================================================================


def epsilon_order(epsilon: float) -> int:
    """Derivative count [1/epsilon], capped at MAX_ORDER."""
    return min(MAX_ORDER, int(math.floor(1.0 / epsilon)))


def _harmonic_weight(n: int, k: int, theta: FloatArray) -> FloatArray:
    """|nabla^k cos(theta)|^2 on the unit sphere for k >= 1."""
    base = np.cos(theta) ** 2 if k % 2 == 0 else np.sin(theta) ** 2
    return np.asarray((n - 1) ** (k // 2) * base)


def neck_distance(sample: NeckSample, order: int, span: float) -> float:
    """
    sup sum_{l <= order} |D^l (g_tilde(s) - g_bar(s))|_{g_bar(s)}.

    The supremum runs over s in [t_n - span, t_n] and |zeta| <= span, clipped
    to the z-domain. Derivatives are exact: zeta-derivatives act on the
    Chebyshev coefficients, sphere derivatives on the level-1 harmonic.

    Raises:
        WindowError: If the sample does not cover the time range.
    """
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"order must lie in [0, {MAX_ORDER}]: {order}")
    if span <= 0:
        raise ValueError(f"span must be positive: {span}")
    sample.require_window(span)
    n = sample.n
    metric = sample.metric
    t_n = reference_time(n)
    inv_rho2 = 1.0 / sample.rho() ** 2
    theta = np.linspace(0.0, math.pi, THETA_SAMPLES)
    cos = np.cos(theta)
    means = [metric.mean]
    tilts = [metric.tilt]
    for _ in range(order):
        means.append(means[-1].deriv())
        tilts.append(tilts[-1].deriv())
    edge = metric.half_length
    zeta = np.linspace(-span, span, BAND_SAMPLES)

    worst = 0.0
    for s in np.linspace(t_n - span, t_n, TIME_SAMPLES):
        cyl = -2.0 * (n - 2) * s
        mu = inv_rho2 + cyl - 1.0
        z = sample.center_z + zeta / math.sqrt(mu)
        z = z[(z >= -edge) & (z <= edge)]
        level0 = [mu ** (1.0 - 0.5 * j) * means[j](z) for j in range(order + 1)]
        level0[0] = level0[0] - cyl
        level1 = [mu ** (1.0 - 0.5 * j) * tilts[j](z) for j in range(order + 1)]
        total = np.zeros((z.size, theta.size))
        for l in range(order + 1):
            squared = np.zeros_like(total)
            for j in range(l + 1):
                k = l - j
                if k == 0:
                    term = (level0[j][:, None] + level1[j][:, None] * cos[None, :]) ** 2
                else:
                    weight = _harmonic_weight(n, k, theta) / cyl**k
                    term = level1[j][:, None] ** 2 * weight[None, :]
                squared += math.comb(l, j) * term
            total += np.sqrt((n - 1) * squared) / cyl
        worst = max(worst, float(np.max(total)))
    return worst


class NeckRescaling(NamedTuple):
    """
    Outcome of comparing a sample with the shrinking cylinder.

    Attributes:
        radius: Neck scale r.
        rho: r measured in the sample's own metric.
        epsilon: Smallest epsilon for which the sample is an evolving
            epsilon-neck; inf when it is not one for any epsilon <= 1.
        order: Derivative count used at that epsilon.
        distance: C^order distance over the matching window.
        window: Times [t_bar - r^2/epsilon, t_bar] of that window.
    """

    radius: float
    rho: float
    epsilon: float
    order: int
    distance: float
    window: tuple[float, float]

    @property
    def qualifies(self) -> bool:
        """True when some epsilon <= 1 qualifies."""
        return math.isfinite(self.epsilon)

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary; a missing epsilon is reported as None."""
        return {
            "radius": self.radius,
            "rho": self.rho,
            "epsilon": self.epsilon if self.qualifies else None,
            "order": self.order,
            "distance": self.distance,
            "window": list(self.window),
        }


def neck_rescale(sample: NeckSample, epsilon: float | None = None) -> NeckRescaling:
    """
    Rescale the sample to unit neck size and find how close it is to g_bar.

    A sample is an evolving epsilon-neck when its window covers
    [t_bar - r^2/epsilon, t_bar] and the C^[1/epsilon] distance over
    |zeta| <= 1/epsilon is at most epsilon. The test gets easier as epsilon
    grows, so the smallest qualifying epsilon is found by bisection.

    Args:
        sample: The neck sample.
        epsilon: Check this epsilon only instead of searching.

    Returns:
        NeckRescaling; with epsilon given, its epsilon field is that value
        when it qualifies and inf otherwise.

    Raises:
        WindowError: If the window cannot cover even epsilon = 1, or the
            requested epsilon.
    """
    rho = sample.rho()
    radius = sample.radius

    def check(eps: float) -> tuple[bool, float]:
        distance = neck_distance(sample, epsilon_order(eps), 1.0 / eps)
        logger.debug("epsilon %.6g: distance %.3e", eps, distance)
        return distance <= eps, distance

    def result(eps: float, distance: float, probe: float) -> NeckRescaling:
        return NeckRescaling(
            radius, rho, eps, epsilon_order(probe), distance, sample.window(1.0 / probe)
        )

    if epsilon is not None:
        if not MIN_EPSILON <= epsilon <= MAX_EPSILON:
            raise ValueError(f"epsilon must lie in [{MIN_EPSILON}, {MAX_EPSILON}]: {epsilon}")
        ok, distance = check(epsilon)
        return result(epsilon if ok else math.inf, distance, epsilon)

    available = sample.t_bar - sample.window_start
    coverage = radius**2 / available if math.isfinite(available) else 0.0
    if coverage > MAX_EPSILON:
        sample.require_window(1.0 / MAX_EPSILON)
    low = max(MIN_EPSILON, coverage)
    ok, distance = check(low)
    if ok:
        return result(low, distance, low)
    ok, distance = check(MAX_EPSILON)
    if not ok:
        logger.info("Sample is not an evolving neck for any epsilon <= %g", MAX_EPSILON)
        return result(math.inf, distance, MAX_EPSILON)
    high = MAX_EPSILON
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (low + high)
        ok, mid_distance = check(mid)
        if ok:
            high, distance = mid, mid_distance
        else:
            low = mid
    return result(high, distance, high)
