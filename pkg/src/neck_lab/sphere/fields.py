"""
Vector fields and symmetric 2-tensors on the sphere and on the cylinder.

A SphereVectorField is V(x) = P(x)(v + M x) with P = I - x x^T. This class
holds the gradients of harmonics of level 1 (v = a) and level 2 (M = 2S),
the rotational fields (M antisymmetric) and their sums. With
phi = x.v + x^T M x,

    nabla V      = P M P - phi P
    L_V g_S      = P (M + M^T) P - 2 phi P
    div V        = tr M - (n - 1) x.v - n x^T M x
    rough Lap V  = P(-v + M' x),  M' = -(n - 2) A - (n + 2) S_0

where A and S_0 are the antisymmetric and tracefree symmetric parts of M.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from neck_lab.core.exceptions import (
    DimensionError,
    InputValidationError,
    UnsupportedRepresentationError,
)
from neck_lab.core.types import FloatArray, Matrix, Vector
from neck_lab.sphere.polynomials import SpherePolynomial

logger = logging.getLogger(__name__)

DERIVATIVE_STEP: float = 1e-4
"""Central-difference step for z-derivatives of cylinder fields."""


def tangent_projectors(points: FloatArray) -> FloatArray:
    """P(x) = I - x x^T for each row, shape (P, n, n)."""
    points = np.atleast_2d(points)
    n = points.shape[1]
    return np.asarray(np.eye(n)[None] - np.einsum("pi,pj->pij", points, points))


def symmetric_parts(m: Matrix) -> tuple[Matrix, Matrix, float]:
    """Split M into antisymmetric A, tracefree symmetric S_0 and trace/n."""
    n = m.shape[0]
    antisym = 0.5 * (m - m.T)
    sym = 0.5 * (m + m.T)
    mean = float(np.trace(sym)) / n
    return antisym, sym - mean * np.eye(n), mean


@dataclass(frozen=True)
class SphereTensorField:
    """
    Symmetric 2-tensor c(x) P + w(x) P B P on S^{n-1}.

    Attributes:
        conformal: Coefficient c of the round metric.
        weight: Coefficient w of the constant shear.
        shear: Symmetric matrix B.
    """

    conformal: SpherePolynomial
    weight: SpherePolynomial
    shear: Matrix

    @property
    def n(self) -> int:
        """Ambient dimension."""
        return self.conformal.n

    def evaluate(self, points: FloatArray) -> FloatArray:
        """Tensor values as ambient n x n matrices, shape (P, n, n)."""
        points = np.atleast_2d(points)
        proj = tangent_projectors(points)
        c = self.conformal.evaluate(points)
        w = self.weight.evaluate(points)
        return np.asarray(c[:, None, None] * proj + w[:, None, None] * (proj @ self.shear @ proj))

    def norm(self, points: FloatArray) -> FloatArray:
        """Pointwise |T|_{g_S}."""
        values = self.evaluate(points)
        return np.asarray(np.sqrt(np.einsum("pij,pij->p", values, values)))

    def __add__(self, other: SphereTensorField) -> SphereTensorField:
        if np.allclose(self.shear, other.shear) or other.weight.degree < 0:
            return SphereTensorField(
                self.conformal + other.conformal, self.weight + other.weight, self.shear
            )
        if self.weight.degree < 0:
            return SphereTensorField(self.conformal + other.conformal, other.weight, other.shear)
        raise UnsupportedRepresentationError(
            "sum of tensors with different shears leaves the representation",
            detail="shear",
        )


@dataclass(frozen=True)
class SphereVectorField:
    """
    Tangent field V(x) = P(x)(v + M x) on S^{n-1}.

    Attributes:
        vector: Constant part v.
        matrix: Linear part M.

    Example:
        >>> e = np.zeros((3, 3)); e[0, 1], e[1, 0] = 1.0, -1.0
        >>> field = SphereVectorField.rotation(e)
        >>> field.evaluate(np.array([[0.0, 1.0, 0.0]])).tolist()
        [[1.0, 0.0, 0.0]]
    """

    vector: Vector
    matrix: Matrix

    def __post_init__(self) -> None:
        """Validate shapes."""
        v = np.asarray(self.vector, dtype=float)
        m = np.asarray(self.matrix, dtype=float)
        if v.ndim != 1 or m.shape != (v.size, v.size):
            raise InputValidationError(
                f"vector {v.shape} and matrix {m.shape} do not match", field="matrix"
            )
        object.__setattr__(self, "vector", v)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def zero(cls, n: int) -> SphereVectorField:
        """Zero field."""
        return cls(np.zeros(n), np.zeros((n, n)))

    @classmethod
    def rotation(cls, m: Matrix) -> SphereVectorField:
        """Rotational field x -> M x for antisymmetric M."""
        m = np.asarray(m, dtype=float)
        if np.max(np.abs(m + m.T)) > 1e-12:
            raise InputValidationError("rotation matrix must be antisymmetric", field="matrix")
        return cls(np.zeros(m.shape[0]), m)

    @property
    def n(self) -> int:
        """Ambient dimension."""
        return int(self.vector.size)

    @property
    def is_rotational(self) -> bool:
        """True when v = 0 and M is antisymmetric (M x is then tangent)."""
        return bool(
            np.max(np.abs(self.vector), initial=0.0) == 0.0
            and np.max(np.abs(self.matrix + self.matrix.T)) <= 1e-12
        )

    def __add__(self, other: SphereVectorField) -> SphereVectorField:
        return SphereVectorField(self.vector + other.vector, self.matrix + other.matrix)

    def scale(self, factor: float) -> SphereVectorField:
        """Multiply by a constant."""
        return SphereVectorField(factor * self.vector, factor * self.matrix)

    def evaluate(self, points: FloatArray) -> FloatArray:
        """Field values at the rows of points, shape (P, n)."""
        points = np.atleast_2d(points)
        raw = self.vector[None, :] + points @ self.matrix.T
        radial = np.sum(raw * points, axis=1)
        return np.asarray(raw - radial[:, None] * points)

    def radial_function(self) -> SpherePolynomial:
        """phi(x) = x.v + x^T M x."""
        return SpherePolynomial(self.n, {1: self.vector, 2: self.matrix})

    def covariant_derivative(self, points: FloatArray) -> FloatArray:
        """nabla V = P M P - phi P at each point, shape (P, n, n)."""
        points = np.atleast_2d(points)
        proj = tangent_projectors(points)
        phi = self.radial_function().evaluate(points)
        return np.asarray(proj @ self.matrix @ proj - phi[:, None, None] * proj)

    def divergence(self) -> SpherePolynomial:
        """div V = tr M - (n - 1) x.v - n x^T M x."""
        n = self.n
        return SpherePolynomial(
            n,
            {
                0: np.array(np.trace(self.matrix)),
                1: -(n - 1) * self.vector,
                2: -n * self.matrix,
            },
        )

    def apply(self, function: SpherePolynomial) -> SpherePolynomial:
        """Directional derivative V(f) = grad_S f . V as a polynomial."""
        radial = self.radial_function()
        return (
            function.directional(self.vector)
            + function.linear_directional(self.matrix)
            - function.euler() * radial
        )

    def rough_laplacian(self) -> SphereVectorField:
        """Connection Laplacian of the round sphere."""
        antisym, tracefree, _ = symmetric_parts(self.matrix)
        n = self.n
        return SphereVectorField(-self.vector, -(n - 2) * antisym - (n + 2) * tracefree)

    def ricci(self) -> SphereVectorField:
        """Ric_{g_S}(V) = (n - 2) V."""
        return self.scale(float(self.n - 2))

    def lie_bracket(self, other: SphereVectorField) -> SphereVectorField:
        """
        Vector-field bracket of two rotational fields.

        M x -> [M x, M' x] = (M' M - M M') x, so the matrix of the bracket
        is -[M, M'].

        Raises:
            UnsupportedRepresentationError: Unless both fields are rotational.
        """
        if not (self.is_rotational and other.is_rotational):
            raise UnsupportedRepresentationError(
                "brackets are closed only for rotational fields", detail="bracket"
            )
        m, mp = self.matrix, other.matrix
        return SphereVectorField(np.zeros(self.n), mp @ m - m @ mp)


# =============================================================================
# METRICS AND LIE DERIVATIVES
# =============================================================================


@dataclass(frozen=True)
class ConformalSphereMetric:
    """
    The metric w(x) g_S on S^{n-1}; w = 1 is the round metric.

    Attributes:
        weight: Conformal factor as a polynomial.
    """

    weight: SpherePolynomial

    @classmethod
    def round(cls, n: int) -> ConformalSphereMetric:
        """Round unit sphere."""
        return cls(SpherePolynomial.constant(n, 1.0))

    @classmethod
    def perturbed(cls, n: int, epsilon: float, a: Vector) -> ConformalSphereMetric:
        """(1 + epsilon a.x) g_S."""
        return cls(SpherePolynomial.constant(n, 1.0) + SpherePolynomial.linear(a).scale(epsilon))


def lie_derivative_metric(
    field: SphereVectorField, metric: ConformalSphereMetric | None = None
) -> SphereTensorField:
    """
    L_V (w g_S) = (V(w) - 2 w phi) g_S + w P (M + M^T) P.

    Args:
        field: Tangent field in the (v, M) representation.
        metric: Conformal metric; the round metric when omitted.

    Returns:
        SphereTensorField holding the Lie derivative exactly.

    Raises:
        DimensionError: If field and metric dimensions differ.
    """
    n = field.n
    metric = metric or ConformalSphereMetric.round(n)
    weight = metric.weight
    if weight.n != n:
        raise DimensionError(f"metric lives in dimension {weight.n}, field in {n}", n=n)
    conformal = field.apply(weight) - weight * field.radial_function().scale(2.0)
    return SphereTensorField(conformal, weight, field.matrix + field.matrix.T)


def conformal_killing_residual(field: SphereVectorField, points: FloatArray) -> float:
    """sup |L_V g_S - (2/(n-1)) div(V) g_S| over points."""
    n = field.n
    lie = lie_derivative_metric(field).evaluate(points)
    div = field.divergence().evaluate(points)
    target = (2.0 / (n - 1)) * div[:, None, None] * tangent_projectors(points)
    return float(np.max(np.abs(lie - target)))


# =============================================================================
# CYLINDER FIELDS
# =============================================================================

SliceVector = Callable[[float], Vector]
SliceMatrix = Callable[[float], Matrix]


@dataclass(frozen=True)
class CylinderVectorField:
    """
    Field V(z, x) = P(v(z) + M(z) x) + a(z) d/dz on R x S^{n-1}.

    Attributes:
        n: Ambient dimension of the sphere factor.
        vector: z -> v(z).
        matrix: z -> M(z).
        axial: z -> a(z); zero when omitted.
    """

    n: int
    vector: SliceVector
    matrix: SliceMatrix
    axial: Callable[[float], float] | None = None

    @classmethod
    def constant(cls, field: SphereVectorField, axial: float = 0.0) -> CylinderVectorField:
        """z-independent field."""
        return cls(field.n, lambda z: field.vector, lambda z: field.matrix, lambda z: axial)

    def slice(self, z: float) -> SphereVectorField:
        """Sphere-tangent part at height z."""
        return SphereVectorField(self.vector(z), self.matrix(z))

    def axial_value(self, z: float) -> float:
        """a(z)."""
        return 0.0 if self.axial is None else float(self.axial(z))

    def z_derivative(self, z: float, h: float = DERIVATIVE_STEP) -> tuple[SphereVectorField, float]:
        """Central differences of (v, M) and a in z."""
        upper, lower = self.slice(z + h), self.slice(z - h)
        dv = (upper.vector - lower.vector) / (2 * h)
        dm = (upper.matrix - lower.matrix) / (2 * h)
        da = (self.axial_value(z + h) - self.axial_value(z - h)) / (2 * h)
        return SphereVectorField(dv, dm), da


class CylinderLieDerivative:
    """
    Blocks of L_V g for g = dz^2 + r^2 g_S at one height.

    Attributes:
        zz: The dz dz coefficient 2 a'(z).
        mixed: The field P(v' + M' x); the dz-sphere block is r^2 times its dual.
        sphere: The sphere block r^2 L_{V(z)} g_S.
        radius: r.
    """

    def __init__(
        self, zz: float, mixed: SphereVectorField, sphere: SphereTensorField, radius: float
    ) -> None:
        self.zz = zz
        self.mixed = mixed
        self.sphere = sphere
        self.radius = radius

    def norm(self, points: FloatArray) -> FloatArray:
        """Pointwise |L_V g|_g."""
        sphere_sq = self.sphere.norm(points) ** 2
        mixed_sq = np.sum(self.mixed.evaluate(points) ** 2, axis=1) * self.radius**2
        return np.asarray(np.sqrt(self.zz**2 + 2.0 * mixed_sq + sphere_sq))


def cylinder_lie_derivative(
    field: CylinderVectorField, z: float, radius: float = 1.0
) -> CylinderLieDerivative:
    """L_V g on the round cylinder dz^2 + r^2 g_S at height z."""
    if radius <= 0:
        raise ValueError(f"radius must be positive: {radius}")
    derivative, da = field.z_derivative(z)
    sphere = lie_derivative_metric(field.slice(z))
    return CylinderLieDerivative(2.0 * da, derivative, sphere, radius)
