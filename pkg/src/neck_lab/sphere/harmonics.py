"""
Spherical harmonics of level 0, 1 and 2 on S^{n-1}.

Level 1 is spanned by the coordinates, level 2 by the off-diagonal
products x_i x_j and the Helmert combinations of the squares, which are
tracefree and so harmonic. The eigenvalues of -Delta_S are j(j + n - 2):
0, n - 1 and 2n.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import helmert

from neck_lab.core.exceptions import DimensionError, UnsupportedRepresentationError
from neck_lab.core.types import FloatArray
from neck_lab.sphere.fields import SphereVectorField, conformal_killing_residual
from neck_lab.sphere.polynomials import SpherePolynomial

logger = logging.getLogger(__name__)

MAX_LEVEL: int = 2


def level_eigenvalue(n: int, level: int) -> float:
    """Eigenvalue j(j + n - 2) of -Delta_S on level j."""
    return float(level * (level + n - 2))


@dataclass(frozen=True)
class HarmonicFunction:
    """
    Homogeneous harmonic polynomial restricted to the sphere.

    Attributes:
        n: Ambient dimension.
        level: Degree j in {0, 1, 2}.
        coefficient: Scalar (level 0), vector a (level 1, a.x) or tracefree
            symmetric S (level 2, x^T S x).
    """

    n: int
    level: int
    coefficient: FloatArray

    def __post_init__(self) -> None:
        """Validate level and coefficient shape."""
        if not 0 <= self.level <= MAX_LEVEL:
            raise UnsupportedRepresentationError(
                f"harmonic level must be in [0, {MAX_LEVEL}]: {self.level}", detail="level"
            )
        array = np.asarray(self.coefficient, dtype=float)
        if array.shape != (self.n,) * self.level:
            raise ValueError(f"coefficient shape {array.shape} does not match level {self.level}")
        if self.level == 2:
            if np.max(np.abs(array - array.T)) > 1e-12 or abs(np.trace(array)) > 1e-12:
                raise ValueError("level-2 coefficient must be symmetric and tracefree")
        object.__setattr__(self, "coefficient", array)

    @property
    def eigenvalue(self) -> float:
        """Eigenvalue of -Delta_S."""
        return level_eigenvalue(self.n, self.level)

    @property
    def polynomial(self) -> SpherePolynomial:
        """The function as a SpherePolynomial."""
        return SpherePolynomial(self.n, {self.level: self.coefficient})

    def evaluate(self, points: FloatArray) -> FloatArray:
        """Values at sphere points."""
        return self.polynomial.evaluate(points)


def harmonic_basis(n: int, level: int) -> list[HarmonicFunction]:
    """
    L^2-orthogonal basis of the harmonics of one level.

    Args:
        n: Ambient dimension (>= 2).
        level: 0, 1 or 2.

    Returns:
        1, n or (n - 1)(n + 2)/2 functions.

    Raises:
        UnsupportedRepresentationError: For level > 2.
    """
    if n < 2:
        raise DimensionError(f"n must be at least 2: {n}", n=n, required=2)
    if level < 0 or level > MAX_LEVEL:
        raise UnsupportedRepresentationError(
            f"harmonic level must be in [0, {MAX_LEVEL}]: {level}", detail="level"
        )
    if level == 0:
        return [HarmonicFunction(n, 0, np.array(1.0))]
    if level == 1:
        return [HarmonicFunction(n, 1, row) for row in np.eye(n)]
    basis = []
    for row in helmert(n):
        basis.append(HarmonicFunction(n, 2, np.diag(row)))
    for i, j in itertools.combinations(range(n), 2):
        s = np.zeros((n, n))
        s[i, j] = s[j, i] = 0.5
        basis.append(HarmonicFunction(n, 2, s))
    return basis


def gradient_field(u: HarmonicFunction) -> SphereVectorField:
    """
    Sphere gradient of a harmonic as a SphereVectorField.

    Level 0 gives the zero field, level 1 gives P a, level 2 gives P(2 S x).
    """
    if u.level == 0:
        return SphereVectorField.zero(u.n)
    if u.level == 1:
        return SphereVectorField(u.coefficient, np.zeros((u.n, u.n)))
    return SphereVectorField(np.zeros(u.n), 2.0 * u.coefficient)


def conformal_identity_residual(u: HarmonicFunction, points: FloatArray) -> float:
    """
    sup |L_{grad u} g_S - (2/(n-1)) div(grad u) g_S| for a first harmonic.

    Raises:
        UnsupportedRepresentationError: If u is not a first harmonic.
    """
    if u.level != 1:
        raise UnsupportedRepresentationError(
            f"gradients of level {u.level} harmonics are not conformal Killing", detail="level"
        )
    return conformal_killing_residual(gradient_field(u), points)


class LevelProjection(NamedTuple):
    """Harmonic coefficients per level and the L^2 norm of the remainder."""

    coefficients: dict[int, FloatArray]
    residual: float


def project_levels(
    function: SpherePolynomial, levels: tuple[int, ...] = (0, 1, 2)
) -> LevelProjection:
    """
    L^2 projection of a polynomial onto harmonic levels.

    Inner products use the exact monomial moments.
    """
    n = function.n
    coefficients: dict[int, FloatArray] = {}
    remainder = function
    for level in levels:
        basis = harmonic_basis(n, level)
        polys = [u.polynomial for u in basis]
        gram = np.array([[p.l2_inner(q) for q in polys] for p in polys])
        rhs = np.array([function.l2_inner(p) for p in polys])
        coeffs = np.linalg.solve(gram, rhs)
        coefficients[level] = coeffs
        for c, p in zip(coeffs, polys):
            remainder = remainder - p.scale(float(c))
    residual_sq = max(remainder.l2_inner(remainder), 0.0)
    return LevelProjection(coefficients, float(np.sqrt(residual_sq)))
