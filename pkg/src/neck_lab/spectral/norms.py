"""
Norms of slice tensors with respect to the shrinking cylinder.

For g(t) = r^2 g_S + dz^2 with r^2 = -2(n-2)t, the components of a
decomposition are orthogonal and

    |h|^2 = (n-1) omega^2 / r^4 + |chi|^2 / r^4 + 2 |sigma|^2 / r^2 + beta^2.

The weighted component norms |omega|/(-t), |chi|/(-t), |sigma|/(-t)^{1/2}
and |beta| are therefore comparable with |h| up to constants depending
only on n.
"""

from __future__ import annotations

import logging
import math
from typing import NamedTuple

import numpy as np

from neck_lab.core.exceptions import TimeDomainError
from neck_lab.core.types import FloatArray, Time
from neck_lab.spectral.decomposition import (
    SliceTensor,
    TensorDecomposition,
    cylinder_radius_squared,
)
from neck_lab.sphere.quadrature import random_sphere_points

logger = logging.getLogger(__name__)

SUP_SAMPLES: int = 2048


def sup_points(n: int, count: int = SUP_SAMPLES, seed: int = 0) -> FloatArray:
    """Seeded sphere points plus the coordinate axes, for sup norms."""
    eye = np.eye(n)
    return np.concatenate([eye, -eye, random_sphere_points(n, count, seed)])


def norm_weights(n: int, t: Time) -> FloatArray:
    """Weights of (beta, mixed, tangential) squared ambient entries: 1, 1/r^2, 1/r^4."""
    if t >= 0:
        raise TimeDomainError(f"cylinder time must be negative: {t}", t=t)
    r2 = cylinder_radius_squared(n, t)
    return np.array([1.0, 1.0 / r2, 1.0 / r2**2])


def pointwise_norm(values: FloatArray, n: int, t: Time) -> FloatArray:
    """
    |h|_{g(t)} from ambient matrices (..., n + 1, n + 1) with index 0 = dz.

    The tangential block is a g_S tensor written in ambient coordinates, so
    its Frobenius norm is its g_S norm.
    """
    w_beta, w_mixed, w_tan = norm_weights(n, t)
    beta = values[..., 0, 0] ** 2
    mixed = 2.0 * np.sum(values[..., 0, 1:] ** 2, axis=-1)
    tangential = np.sum(values[..., 1:, 1:] ** 2, axis=(-2, -1))
    return np.asarray(np.sqrt(w_beta * beta + w_mixed * mixed + w_tan * tangential))


def comparability_constants(n: int) -> tuple[float, float]:
    """
    (lower, upper) with lower * S / 4 <= sup|h| <= upper * S for the sum S of
    the four weighted sup norms.

    The pointwise coefficients are sqrt(n-1)/(2(n-2)), 1/(2(n-2)),
    1/sqrt(n-2) and 1.
    """
    coefficients = (
        math.sqrt(n - 1) / (2.0 * (n - 2)),
        1.0 / (2.0 * (n - 2)),
        1.0 / math.sqrt(n - 2),
        1.0,
    )
    return min(coefficients), max(coefficients)


class WeightedNorm(NamedTuple):
    """
    Sup norm of h for g(t) next to the four weighted component norms.

    Attributes:
        total: sup |h|_{g(t)}.
        omega: sup |omega| / (-t).
        chi: sup |chi|_{g_S} / (-t).
        sigma: sup |sigma|_{g_S} / (-t)^{1/2}.
        beta: sup |beta|.
        lower: Lower comparability constant.
        upper: Upper comparability constant.
    """

    total: float
    omega: float
    chi: float
    sigma: float
    beta: float
    lower: float
    upper: float

    @property
    def weighted_sum(self) -> float:
        """Sum of the four weighted component norms."""
        return self.omega + self.chi + self.sigma + self.beta

    @property
    def comparable(self) -> bool:
        """Two-sided comparability holds."""
        s = self.weighted_sum
        slack = 1e-12 * max(s, 1.0)
        return bool(self.lower * s / 4.0 - slack <= self.total <= self.upper * s + slack)


def _sup(values: FloatArray) -> float:
    return float(np.max(values)) if values.size else 0.0


def weighted_norm(
    decomposition: TensorDecomposition, t: Time, points: FloatArray | None = None
) -> WeightedNorm:
    """
    Sup norm of a decomposed slice tensor on the cylinder at time t.

    Args:
        decomposition: Result of decompose.
        t: Time, negative.
        points: Sphere points for the sup; sup_points(n) by default.

    Returns:
        WeightedNorm; a warning is logged if comparability fails.

    Example:
        >>> from neck_lab.spectral.decomposition import decompose
        >>> from neck_lab.sphere.polynomials import SpherePolynomial
        >>> h = SliceTensor.of_omega(SpherePolynomial.constant(4, 2.0))
        >>> round(weighted_norm(decompose(h), -2.0).total, 12)
        0.433012701892
    """
    n = decomposition.n
    pts = sup_points(n) if points is None else points
    whole = decomposition.reassemble().evaluate(pts)
    total = _sup(pointwise_norm(whole, n, t))

    omega = np.abs(decomposition.omega.evaluate(pts))
    chi_values = decomposition.chi_tensor.evaluate(pts)[:, 1:, 1:]
    chi = np.sqrt(np.sum(chi_values**2, axis=(-2, -1)))
    sigma = np.linalg.norm(decomposition.sigma.evaluate(pts), axis=1)
    beta = np.abs(decomposition.beta.evaluate(pts))

    lower, upper = comparability_constants(n)
    result = WeightedNorm(
        total=total,
        omega=_sup(omega) / (-t),
        chi=_sup(chi) / (-t),
        sigma=_sup(sigma) / math.sqrt(-t),
        beta=_sup(beta),
        lower=lower,
        upper=upper,
    )
    if not result.comparable:
        logger.warning(
            "Weighted norms not comparable: |h| = %.3e, weighted sum = %.3e",
            result.total,
            result.weighted_sum,
        )
    return result


def slice_norm(h: SliceTensor, t: Time, points: FloatArray | None = None) -> float:
    """sup |h|_{g(t)} of a slice tensor without decomposing it."""
    pts = sup_points(h.n) if points is None else points
    return _sup(pointwise_norm(h.evaluate(pts), h.n, t))
