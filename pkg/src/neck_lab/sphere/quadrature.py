"""
Integration over the unit sphere S^{n-1}.

Polynomials of degree up to EXACT_QUADRATURE_DEGREE are integrated with
exact monomial moments. Other integrands use either the symmetric
degree-5 rule on the points +-e_i and (+-e_i +- e_j)/sqrt(2), or seeded
Monte Carlo with a reported standard error.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Callable
from enum import Enum
from typing import NamedTuple

import numpy as np

from neck_lab.core.exceptions import DimensionError
from neck_lab.core.types import EXACT_QUADRATURE_DEGREE, FloatArray
from neck_lab.sphere.polynomials import SpherePolynomial, sphere_volume

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES: int = 20_000

PointFunction = Callable[[FloatArray], FloatArray]


class QuadratureMethod(Enum):
    """Integration strategies over the sphere."""

    EXACT = "exact"
    DEGREE_FIVE = "degree5"
    MONTE_CARLO = "monte_carlo"


class QuadratureResult(NamedTuple):
    """Integral with its error estimate (0 for exact rules)."""

    value: float
    error: float
    method: QuadratureMethod


def random_sphere_points(n: int, count: int, seed: int = 0) -> FloatArray:
    """Uniform random points on S^{n-1}, shape (count, n)."""
    rng = np.random.default_rng(seed)
    points = rng.standard_normal((count, n))
    return points / np.linalg.norm(points, axis=1, keepdims=True)


def degree_five_rule(n: int) -> tuple[FloatArray, FloatArray]:
    """
    Points and weights of the symmetric rule exact up to degree 5.

    Weights sum to vol(S^{n-1}): A = (4 - n)/(2n(n + 2)) on +-e_i and
    B = 1/(n(n + 2)) on (+-e_i +- e_j)/sqrt(2), both times the volume.
    """
    if n < 2:
        raise DimensionError(f"n must be at least 2: {n}", n=n, required=2)
    eye = np.eye(n)
    axes = np.concatenate([eye, -eye])
    diagonals = [
        (s1 * eye[i] + s2 * eye[j]) / math.sqrt(2.0)
        for i, j in itertools.combinations(range(n), 2)
        for s1, s2 in itertools.product((1.0, -1.0), repeat=2)
    ]
    points = np.concatenate([axes, np.array(diagonals).reshape(-1, n)])
    vol = sphere_volume(n)
    a = (4.0 - n) / (2.0 * n * (n + 2))
    b = 1.0 / (n * (n + 2))
    weights = np.concatenate([np.full(2 * n, a * vol), np.full(len(diagonals), b * vol)])
    return points, weights


def quadrature(
    integrand: SpherePolynomial | PointFunction,
    n: int | None = None,
    method: QuadratureMethod | None = None,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> QuadratureResult:
    """
    Integrate over S^{n-1}.

    Args:
        integrand: A SpherePolynomial, or a vectorized function of points (P, n).
        n: Ambient dimension; taken from the polynomial when omitted.
        method: Forced strategy. By default polynomials of degree <= 6 are
            exact and everything else is Monte Carlo.
        samples: Monte Carlo sample count.
        seed: Monte Carlo seed.

    Returns:
        QuadratureResult with the integral and an error estimate.

    Example:
        >>> round(quadrature(SpherePolynomial.constant(4, 1.0)).value, 10)
        19.7392088022
    """
    if isinstance(integrand, SpherePolynomial):
        n = integrand.n
        if method is None:
            exact = integrand.degree <= EXACT_QUADRATURE_DEGREE
            method = QuadratureMethod.EXACT if exact else QuadratureMethod.MONTE_CARLO
        if method is QuadratureMethod.EXACT:
            return QuadratureResult(integrand.integrate(), 0.0, method)
        function: PointFunction = integrand.evaluate
    else:
        if n is None:
            raise ValueError("n is required for point-function integrands")
        if method is QuadratureMethod.EXACT:
            raise ValueError("exact quadrature needs a SpherePolynomial")
        method = method or QuadratureMethod.MONTE_CARLO
        function = integrand

    if method is QuadratureMethod.DEGREE_FIVE:
        points, weights = degree_five_rule(n)
        return QuadratureResult(float(np.dot(weights, function(points))), 0.0, method)

    points = random_sphere_points(n, samples, seed)
    values = np.asarray(function(points), dtype=float)
    vol = sphere_volume(n)
    mean = float(np.mean(values))
    error = vol * float(np.std(values, ddof=1)) / math.sqrt(samples)
    logger.debug(
        "Monte Carlo sphere integral: %.6e +- %.1e (%d samples)", vol * mean, error, samples
    )
    return QuadratureResult(vol * mean, error, method)
