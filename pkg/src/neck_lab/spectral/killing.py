"""
Vector fields on the shrinking cylinder and the growing conformal mode.

On g(t) = r^2 g_S + dz^2 with r^2 = -2(n-2)t, a sphere-tangent field Y
obeys (Delta + Ric) Y = r^{-2} (Delta_S + (n - 2)) Y + Y_zz. Gradients of
first harmonics are eigenfields with eigenvalue (n - 3)/r^2, Killing
fields and d/dz are in the kernel. The growing first-harmonic solution
(-t)^{(n-1)/(2(n-2))} psi g_S of the Lichnerowicz system is the Lie
derivative of g(t) along

    xi(t) = -(1/(4(n-2))) (-t)^{-(n-3)/(2(n-2))} grad_S psi,

which is how it is removed from a neck.
"""

from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np

from neck_lab.core.exceptions import DimensionError, TimeDomainError
from neck_lab.core.types import FloatArray, Height, Time, Vector
from neck_lab.spectral.decomposition import cylinder_radius_squared
from neck_lab.sphere.fields import (
    CylinderVectorField,
    SphereTensorField,
    SphereVectorField,
    lie_derivative_metric,
)
from neck_lab.sphere.polynomials import SpherePolynomial

logger = logging.getLogger(__name__)

Z_STEP: float = 1e-3
"""Step of the five-point second derivative in z."""


def growing_exponent(n: int) -> float:
    """(n - 1)/(2(n - 2)), the time power of the growing omega mode."""
    return (n - 1) / (2.0 * (n - 2))


def killing_exponent(n: int) -> float:
    """-(n - 3)/(2(n - 2)), the time power of xi and of |growing mode|_{g(t)}."""
    return -(n - 3) / (2.0 * (n - 2))


class ConformalKillingRemoval(NamedTuple):
    """
    The field xi(t) and the tensor k(t) = L_xi g(t).

    Attributes:
        xi: Sphere-tangent field, the gradient of a first harmonic.
        k: Coefficient (-t)^{(n-1)/(2(n-2))} psi of g_S.
        t: Time.
    """

    xi: SphereVectorField
    k: SpherePolynomial
    t: Time


def _check_time(t: Time) -> None:
    if t >= 0:
        raise TimeDomainError(f"cylinder time must be negative: {t}", t=t)


def conformal_killing_removal(psi: Vector, t: Time) -> ConformalKillingRemoval:
    """
    Field whose Lie derivative reproduces the growing first-harmonic mode.

    Args:
        psi: Vector a with psi(x) = a . x.
        t: Time, negative.

    Returns:
        ConformalKillingRemoval with L_xi g(t) = k(t) g_S exactly.

    Example:
        >>> removal = conformal_killing_removal(np.zeros(4), -0.25)
        >>> float(np.abs(removal.xi.vector).max())
        0.0
    """
    _check_time(t)
    a = np.asarray(psi, dtype=float)
    n = a.size
    if n < 3:
        raise DimensionError(f"n must be at least 3: {n}", n=n, required=3)
    factor = -(1.0 / (4.0 * (n - 2))) * (-t) ** killing_exponent(n)
    xi = SphereVectorField(factor * a, np.zeros((n, n)))
    k = SpherePolynomial.linear(a).scale((-t) ** growing_exponent(n))
    return ConformalKillingRemoval(xi, k, t)


def killing_identity_residual(removal: ConformalKillingRemoval, points: FloatArray) -> float:
    """sup |L_xi g(t) - k(t) g_S| over points, with L_xi g(t) = r^2 L_xi g_S."""
    n = removal.xi.n
    r2 = cylinder_radius_squared(n, removal.t)
    lie = lie_derivative_metric(removal.xi)
    scaled = SphereTensorField(lie.conformal.scale(r2), lie.weight.scale(r2), lie.shear)
    target = SphereTensorField(removal.k, SpherePolynomial.zero(n), np.zeros((n, n)))
    diff = scaled.evaluate(points) - target.evaluate(points)
    return float(np.max(np.abs(diff)))


def bochner_operator(field: SphereVectorField, t: Time) -> SphereVectorField:
    """(Delta + Ric) of a z-independent sphere-tangent field on g(t)."""
    _check_time(t)
    r2 = cylinder_radius_squared(field.n, t)
    return (field.rough_laplacian() + field.ricci()).scale(1.0 / r2)


def bochner_residual(removal: ConformalKillingRemoval, points: FloatArray) -> float:
    """sup |(Delta + Ric) xi - (n - 3)/(-2(n-2)t) xi| over points."""
    n = removal.xi.n
    eigen = (n - 3) / cylinder_radius_squared(n, removal.t)
    lhs = bochner_operator(removal.xi, removal.t).evaluate(points)
    return float(np.max(np.abs(lhs - eigen * removal.xi.evaluate(points))))


# =============================================================================
# VECTOR HEAT OPERATOR
# =============================================================================


class CylinderVectorValue(NamedTuple):
    """A cylinder field at one height: axial part and sphere-tangent part."""

    axial: float
    sphere: SphereVectorField


def _second_z_derivative(
    field: CylinderVectorField, z: Height, h: float = Z_STEP
) -> CylinderVectorValue:
    weights = (-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0)
    offsets = (-2, -1, 0, 1, 2)
    slices = [field.slice(z + k * h) for k in offsets]
    axial = [field.axial_value(z + k * h) for k in offsets]
    dv = sum(w * s.vector for w, s in zip(weights, slices)) / h**2
    dm = sum(w * s.matrix for w, s in zip(weights, slices)) / h**2
    da = sum(w * a for w, a in zip(weights, axial)) / h**2
    return CylinderVectorValue(float(da), SphereVectorField(np.asarray(dv), np.asarray(dm)))


def vector_heat_operator(field: CylinderVectorField, z: Height, t: Time) -> CylinderVectorValue:
    """
    X -> r^{-2} (Delta_S + (n - 2)) X|_S + X_zz at height z.

    The axial coefficient is constant on each slice, so only its z-derivative
    contributes.

    Args:
        field: Cylinder field a(z) d/dz + P(v(z) + M(z) x).
        z: Height.
        t: Time, negative.

    Returns:
        CylinderVectorValue of the operator at z.
    """
    _check_time(t)
    second = _second_z_derivative(field, z)
    sphere = bochner_operator(field.slice(z), t) + second.sphere
    return CylinderVectorValue(second.axial, sphere)


def rough_eigenvalue(field: SphereVectorField) -> float:
    """
    Eigenvalue e with Delta_S Y = -e Y for a pure field.

    Raises:
        ValueError: If the field mixes eigenspaces or vanishes.
    """
    n = field.n
    lap = field.rough_laplacian()
    scale = max(float(np.max(np.abs(field.vector))), float(np.max(np.abs(field.matrix))))
    if scale == 0.0:
        raise ValueError("the zero field has no eigenvalue")
    for e in (1.0, float(n - 2), float(n + 2)):
        residual = max(
            float(np.max(np.abs(lap.vector + e * field.vector))),
            float(np.max(np.abs(_tangential(lap.matrix + e * field.matrix)))),
        )
        if residual <= 1e-12 * scale:
            return e
    raise ValueError("field is not a rough-Laplacian eigenfield")


def _tangential(m: FloatArray) -> FloatArray:
    """Drop the multiple of the identity, which vanishes on the sphere."""
    n = m.shape[0]
    return np.asarray(m - np.trace(m) / n * np.eye(n))
