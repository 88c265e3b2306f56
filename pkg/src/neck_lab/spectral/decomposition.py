"""
Slice-wise decomposition of symmetric 2-tensors on R x S^{n-1}.

A tensor on one slice is held as polynomial data

    h = omega g_S + P S P + dz.sigma + sigma.dz + beta dz^2,

with omega and beta polynomials of degree <= 2, S a constant symmetric
matrix and sigma = P(v + M x). The tangential block splits into a trace
part, absorbed into omega, and the tracefree part

    chi = P S_0 P + (x^T S_0 x / (n - 1)) P,

the tracefree Hessian of x^T S_0 x / 2, an eigentensor with nu = 2.
omega and beta split into harmonic levels, sigma into the gradient of a
first harmonic (mu = 1), a Killing field (mu = n - 2) and the gradient of
a second harmonic (mu = n + 2).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from neck_lab.core.exceptions import InputValidationError, UnsupportedRepresentationError
from neck_lab.core.types import FloatArray, Matrix, ModeKind, Time
from neck_lab.sphere.fields import SphereVectorField, symmetric_parts, tangent_projectors
from neck_lab.sphere.harmonics import MAX_LEVEL, harmonic_basis, level_eigenvalue, project_levels
from neck_lab.sphere.polynomials import SpherePolynomial, sphere_volume

logger = logging.getLogger(__name__)

PROJECTION_TOLERANCE: float = 1e-10


def cylinder_radius_squared(n: int, t: Time) -> float:
    """r^2 = -2(n - 2) t of the shrinking cylinder."""
    return -2.0 * (n - 2) * t


@dataclass(frozen=True)
class SliceTensor:
    """
    Symmetric 2-tensor on one slice {z} x S^{n-1} in polynomial form.

    Attributes:
        omega: Coefficient of g_S.
        shear: Constant symmetric S of the block P S P.
        sigma: Mixed one-form, identified with a tangent field.
        beta: Coefficient of dz^2.
    """

    omega: SpherePolynomial
    shear: Matrix
    sigma: SphereVectorField
    beta: SpherePolynomial

    def __post_init__(self) -> None:
        """Check dimensions and symmetry of the shear."""
        n = self.omega.n
        shear = np.asarray(self.shear, dtype=float)
        if shear.shape != (n, n) or self.sigma.n != n or self.beta.n != n:
            raise InputValidationError("slice components live in different dimensions", field="n")
        if np.max(np.abs(shear - shear.T), initial=0.0) > 1e-12:
            raise InputValidationError("shear must be symmetric", field="shear")
        object.__setattr__(self, "shear", shear)

    @classmethod
    def zero(cls, n: int) -> SliceTensor:
        """The zero tensor."""
        return cls(
            SpherePolynomial.zero(n),
            np.zeros((n, n)),
            SphereVectorField.zero(n),
            SpherePolynomial.zero(n),
        )

    @classmethod
    def cylinder_metric(cls, n: int, t: Time) -> SliceTensor:
        """The shrinking cylinder g(t) = -2(n-2)t g_S + dz^2."""
        zero = cls.zero(n)
        return cls(
            SpherePolynomial.constant(n, cylinder_radius_squared(n, t)),
            zero.shear,
            zero.sigma,
            SpherePolynomial.constant(n, 1.0),
        )

    @classmethod
    def of_omega(cls, omega: SpherePolynomial) -> SliceTensor:
        """omega g_S."""
        zero = cls.zero(omega.n)
        return cls(omega, zero.shear, zero.sigma, zero.beta)

    @classmethod
    def of_sigma(cls, sigma: SphereVectorField) -> SliceTensor:
        """dz.sigma + sigma.dz."""
        zero = cls.zero(sigma.n)
        return cls(zero.omega, zero.shear, sigma, zero.beta)

    @classmethod
    def of_beta(cls, beta: SpherePolynomial) -> SliceTensor:
        """beta dz^2."""
        zero = cls.zero(beta.n)
        return cls(zero.omega, zero.shear, zero.sigma, beta)

    @classmethod
    def of_chi(cls, tracefree: Matrix) -> SliceTensor:
        """The tracefree eigentensor P S_0 P + (x^T S_0 x/(n-1)) P."""
        s0 = np.asarray(tracefree, dtype=float)
        n = s0.shape[0]
        zero = cls.zero(n)
        trace_part = SpherePolynomial.quadratic(s0).scale(1.0 / (n - 1))
        return cls(trace_part, s0, zero.sigma, zero.beta)

    @property
    def n(self) -> int:
        """Ambient dimension of the sphere factor."""
        return self.omega.n

    def __add__(self, other: SliceTensor) -> SliceTensor:
        return SliceTensor(
            self.omega + other.omega,
            self.shear + other.shear,
            self.sigma + other.sigma,
            self.beta + other.beta,
        )

    def scale(self, factor: float) -> SliceTensor:
        """Multiply by a constant."""
        return SliceTensor(
            self.omega.scale(factor),
            factor * self.shear,
            self.sigma.scale(factor),
            self.beta.scale(factor),
        )

    def evaluate(self, points: FloatArray) -> FloatArray:
        """
        Ambient matrices of shape (P, n + 1, n + 1); index 0 is dz.

        The tangential block is omega P + P S P, the mixed row is sigma.
        """
        points = np.atleast_2d(points)
        n = self.n
        proj = tangent_projectors(points)
        out = np.zeros((points.shape[0], n + 1, n + 1))
        out[:, 0, 0] = self.beta.evaluate(points)
        sigma = self.sigma.evaluate(points)
        out[:, 0, 1:] = sigma
        out[:, 1:, 0] = sigma
        omega = self.omega.evaluate(points)
        out[:, 1:, 1:] = omega[:, None, None] * proj + proj @ self.shear @ proj
        return out

    def squared_norm(self, radius: float = 1.0) -> SpherePolynomial:
        """
        |h|^2 for the metric r^2 g_S + dz^2 as an exact polynomial.

        |omega P + P S P|^2 = (n-1) omega^2 + 2 omega tr(PSP) + tr(PSPS), with
        tr(PSP) = tr S - x^T S x and tr(PSPS) = tr S^2 - 2 x^T S^2 x + (x^T S x)^2.
        """
        n = self.n
        s = self.shear
        quad = SpherePolynomial.quadratic(s)
        tr_psp = SpherePolynomial.constant(n, float(np.trace(s))) - quad
        tr_psps = (
            SpherePolynomial.constant(n, float(np.trace(s @ s)))
            - SpherePolynomial.quadratic(s @ s).scale(2.0)
            + quad * quad
        )
        tangential = (
            (self.omega * self.omega).scale(float(n - 1))
            + (self.omega * tr_psp).scale(2.0)
            + tr_psps
        )
        sigma_sq = _tangent_square(self.sigma)
        return (
            self.beta * self.beta
            + sigma_sq.scale(2.0 / radius**2)
            + tangential.scale(1.0 / radius**4)
        )

    def l2_norm(self, radius: float = 1.0) -> float:
        """Square root of the exact integral of |h|^2 over the unit sphere."""
        return float(np.sqrt(max(self.squared_norm(radius).integrate(), 0.0)))


def _tangent_square(sigma: SphereVectorField) -> SpherePolynomial:
    """|P(v + M x)|^2 = |v + M x|^2 - (x.v + x^T M x)^2."""
    n = sigma.n
    v, m = sigma.vector, sigma.matrix
    full = SpherePolynomial(n, {0: np.array(float(v @ v)), 1: 2.0 * (m.T @ v), 2: m.T @ m})
    radial = sigma.radial_function()
    return full - radial * radial


# =============================================================================
# DECOMPOSITION
# =============================================================================


@dataclass(frozen=True)
class DecomposedComponent:
    """
    One spectral component of a slice tensor.

    Attributes:
        kind: Tensor component.
        eigenvalue: Eigenvalue of -Delta_S on the matching bundle.
        level: Harmonic level (scalar kinds) or -1 for sigma and chi.
        tensor: The component as a slice tensor.
    """

    kind: ModeKind
    eigenvalue: float
    level: int
    tensor: SliceTensor

    @property
    def norm(self) -> float:
        """L^2 norm on the unit cylinder slice."""
        return self.tensor.l2_norm()


@dataclass(frozen=True)
class TensorDecomposition:
    """
    Slice decomposition h = omega g_S + chi + dz.sigma + sigma.dz + beta dz^2.

    Attributes:
        n: Ambient dimension of the sphere factor.
        omega: Scalar coefficient of g_S, trace of the shear included.
        chi: Tracefree shear S_0 generating chi.
        sigma: Mixed one-form.
        beta: Coefficient of dz^2.
        components: Spectral components in a fixed order.
    """

    n: int
    omega: SpherePolynomial
    chi: Matrix
    sigma: SphereVectorField
    beta: SpherePolynomial
    components: tuple[DecomposedComponent, ...] = field(default_factory=tuple)

    @property
    def omega_bar(self) -> float:
        """Slice average of omega."""
        return self.omega.integrate() / sphere_volume(self.n)

    @property
    def beta_bar(self) -> float:
        """Slice average of beta."""
        return self.beta.integrate() / sphere_volume(self.n)

    @property
    def psi(self) -> FloatArray:
        """First-harmonic part of omega as a vector a with omega_1 = a.x."""
        return np.asarray(self.component(ModeKind.OMEGA, level=1).tensor.omega.parts[1])

    @property
    def chi_tensor(self) -> SliceTensor:
        """chi as a slice tensor."""
        return SliceTensor.of_chi(self.chi)

    def component(
        self, kind: ModeKind, level: int | None = None, eigenvalue: float | None = None
    ) -> DecomposedComponent:
        """Look up a component by level (scalar kinds) or eigenvalue."""
        for comp in self.components:
            if comp.kind is not kind:
                continue
            if level is not None and comp.level == level:
                return comp
            if eigenvalue is not None and abs(comp.eigenvalue - eigenvalue) < 1e-12:
                return comp
        raise KeyError(f"no {kind.value} component with level={level}, eigenvalue={eigenvalue}")

    def reassemble(self) -> SliceTensor:
        """Sum of all components."""
        total = SliceTensor.zero(self.n)
        for comp in self.components:
            total = total + comp.tensor
        return total


def _scalar_components(
    function: SpherePolynomial, kind: ModeKind, name: str
) -> list[DecomposedComponent]:
    n = function.n
    if function.degree > MAX_LEVEL:
        raise UnsupportedRepresentationError(
            f"{name} has degree {function.degree}; only levels <= {MAX_LEVEL} are represented",
            detail=name,
        )
    projection = project_levels(function)
    if projection.residual > PROJECTION_TOLERANCE:
        raise UnsupportedRepresentationError(
            f"{name} is not captured by levels <= {MAX_LEVEL} (residual {projection.residual:.2e})",
            detail=name,
        )
    out = []
    for level, coeffs in projection.coefficients.items():
        poly = SpherePolynomial.zero(n)
        for c, u in zip(coeffs, harmonic_basis(n, level)):
            poly = poly + u.polynomial.scale(float(c))
        tensor = SliceTensor.of_omega(poly) if kind is ModeKind.OMEGA else SliceTensor.of_beta(poly)
        out.append(DecomposedComponent(kind, level_eigenvalue(n, level), level, tensor))
    return out


def decompose(h: SliceTensor) -> TensorDecomposition:
    """
    Split a slice tensor into its spectral components.

    Args:
        h: Slice tensor with omega and beta of degree <= 2.

    Returns:
        TensorDecomposition whose components reassemble h.

    Raises:
        UnsupportedRepresentationError: If omega or beta reach level 3.

    Example:
        >>> d = decompose(SliceTensor.cylinder_metric(4, -0.25))
        >>> round(d.omega_bar, 12), round(d.beta_bar, 12)
        (1.0, 1.0)
    """
    n = h.n
    s = h.shear
    s_mean = float(np.trace(s)) / n
    s0 = s - s_mean * np.eye(n)
    trace_poly = (
        SpherePolynomial.constant(n, float(np.trace(s))) - SpherePolynomial.quadratic(s)
    ).scale(1.0 / (n - 1))
    omega = h.omega + trace_poly

    components = _scalar_components(omega, ModeKind.OMEGA, "omega")
    components.append(DecomposedComponent(ModeKind.CHI, 2.0, -1, SliceTensor.of_chi(s0)))
    antisym, tracefree, _ = symmetric_parts(h.sigma.matrix)
    zero_v = np.zeros(n)
    zero_m = np.zeros((n, n))
    sigma_parts = [
        (1.0, SphereVectorField(h.sigma.vector, zero_m)),
        (float(n - 2), SphereVectorField(zero_v, antisym)),
        (float(n + 2), SphereVectorField(zero_v, tracefree)),
    ]
    for mu, part in sigma_parts:
        components.append(DecomposedComponent(ModeKind.SIGMA, mu, -1, SliceTensor.of_sigma(part)))
    components.extend(_scalar_components(h.beta, ModeKind.BETA, "beta"))

    return TensorDecomposition(
        n=n,
        omega=omega,
        chi=s0,
        sigma=h.sigma,
        beta=h.beta,
        components=tuple(components),
    )


def reassembly_residual(h: SliceTensor, points: FloatArray) -> float:
    """sup over points of |h - reassemble(decompose(h))| in ambient entries."""
    rebuilt = decompose(h).reassemble()
    return float(np.max(np.abs(h.evaluate(points) - rebuilt.evaluate(points))))
