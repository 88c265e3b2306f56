"""
The shrinking round cylinder S^{n-1} x R.

g(t) = -2(n-2)t g_{S^{n-1}} + dz^2 for t < 0. The radius is 1 at the
reference time t_n = -1/(2(n-2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from neck_lab.core.exceptions import DimensionError, TimeDomainError
from neck_lab.core.types import Time, reference_time


def _validate(n: int, t: Time) -> None:
    if n < 4:
        raise DimensionError(f"n must be at least 4: {n}", n=n, required=4)
    if t >= 0:
        raise TimeDomainError(f"cylinder time must be negative: {t}", t=t)


def cylinder_scalar_curvature(n: int, t: Time) -> float:
    """
    Scalar curvature (n-1) / (-2t) of the shrinking cylinder.

    Example:
        >>> cylinder_scalar_curvature(4, -0.25)
        6.0
    """
    _validate(n, t)
    return (n - 1) / (-2.0 * t)


def cylinder_radius(n: int, t: Time) -> float:
    """Sphere radius (-2(n-2)t)^{1/2}."""
    _validate(n, t)
    return math.sqrt(-2.0 * (n - 2) * t)


@dataclass(frozen=True)
class CylinderBackground:
    """
    Time slice of the shrinking cylinder.

    Attributes:
        n: Dimension (>= 4).
        t: Time (< 0).
    """

    n: int
    t: Time

    def __post_init__(self) -> None:
        """Validate dimension and time."""
        _validate(self.n, self.t)

    @property
    def reference_time(self) -> float:
        """t_n = -1/(2(n-2))."""
        return reference_time(self.n)

    @property
    def radius(self) -> float:
        """Radius of the sphere factor."""
        return cylinder_radius(self.n, self.t)

    @property
    def scalar_curvature(self) -> float:
        """(n-1)/(-2t)."""
        return cylinder_scalar_curvature(self.n, self.t)

    @property
    def sphere_sectional_curvature(self) -> float:
        """Sectional curvature 1/radius^2 of sphere-tangent planes."""
        return 1.0 / self.radius**2
