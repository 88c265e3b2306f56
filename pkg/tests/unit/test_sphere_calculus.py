"""
Unit tests for sphere.polynomials, sphere.quadrature, sphere.harmonics and
sphere.fields modules.

Tests cover:
1. Exact monomial integration, the degree-5 rule and Monte Carlo errors
2. Harmonic bases, eigenvalues and L^2 orthogonality
3. Sphere gradients, Hessians and Laplacians of polynomials
4. Conformal Killing identity and Bochner values for gradient fields
5. Lie derivatives of round and perturbed metrics
6. Brackets of rotational fields and level preservation
7. Lie derivatives on the cylinder
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neck_lab.core.exceptions import UnsupportedRepresentationError
from neck_lab.sphere.fields import (
    ConformalSphereMetric,
    CylinderVectorField,
    SphereVectorField,
    cylinder_lie_derivative,
    lie_derivative_metric,
    tangent_projectors,
)
from neck_lab.sphere.harmonics import (
    HarmonicFunction,
    conformal_identity_residual,
    gradient_field,
    harmonic_basis,
    project_levels,
)
from neck_lab.sphere.polynomials import SpherePolynomial, coordinate, sphere_volume
from neck_lab.sphere.quadrature import (
    QuadratureMethod,
    degree_five_rule,
    quadrature,
    random_sphere_points,
)
from neck_lab.sphere.rotations import canonical_basis


@pytest.fixture(scope="module")
def points() -> np.ndarray:
    """1000 seeded points on S^3."""
    return random_sphere_points(4, 1000, seed=7)


def _random_tracefree(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    s = rng.standard_normal((n, n))
    s = 0.5 * (s + s.T)
    return s - np.trace(s) / n * np.eye(n)


# =============================================================================
# QUADRATURE TESTS
# =============================================================================


class TestQuadrature:
    """Tests for quadrature function."""

    def test_volume_of_three_sphere(self) -> None:
        """int 1 = 2 pi^2 on S^3."""
        result = quadrature(SpherePolynomial.constant(4, 1.0))
        assert result.value == pytest.approx(2 * math.pi**2, rel=1e-14)
        assert result.method is QuadratureMethod.EXACT
        assert result.error == 0.0

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_second_and_fourth_moments(self, n: int) -> None:
        """int x_1^2 = vol/n and int x_1^4 = 3 vol/(n(n+2))."""
        vol = sphere_volume(n)
        x1 = coordinate(n, 0)
        x2 = coordinate(n, 1)
        assert quadrature(x1 * x1).value == pytest.approx(vol / n, rel=1e-12)
        assert quadrature(x1 * x1 * x1 * x1).value == pytest.approx(
            3 * vol / (n * (n + 2)), rel=1e-12
        )
        assert quadrature(x1 * x1 * x2 * x2).value == pytest.approx(
            vol / (n * (n + 2)), rel=1e-12
        )

    def test_mixed_second_moments(self) -> None:
        """int x_i x_j = delta_ij vol / n."""
        n = 5
        for i in range(n):
            for j in range(n):
                value = quadrature(coordinate(n, i) * coordinate(n, j)).value
                expected = sphere_volume(n) / n if i == j else 0.0
                assert value == pytest.approx(expected, abs=1e-10)

    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_degree_five_rule_exact_on_low_degrees(self, n: int) -> None:
        """The symmetric rule integrates degree <= 5 monomials exactly."""
        points, weights = degree_five_rule(n)
        x = points
        assert np.sum(weights) == pytest.approx(sphere_volume(n), rel=1e-13)
        assert np.dot(weights, x[:, 0] ** 4) == pytest.approx(
            3 * sphere_volume(n) / (n * (n + 2)), rel=1e-12
        )
        assert np.dot(weights, x[:, 0] ** 2 * x[:, 1] ** 2) == pytest.approx(
            sphere_volume(n) / (n * (n + 2)), rel=1e-12
        )
        assert abs(np.dot(weights, x[:, 0] ** 3 * x[:, 1] ** 2)) < 1e-14

    def test_monte_carlo_within_error(self) -> None:
        """Seeded Monte Carlo of x_1^8 lies within five standard errors."""
        n = 4
        exact = sphere_volume(n) * 105.0 / (n * (n + 2) * (n + 4) * (n + 6))
        result = quadrature(lambda p: p[:, 0] ** 8, n=n, samples=50_000, seed=3)
        assert result.method is QuadratureMethod.MONTE_CARLO
        assert abs(result.value - exact) < 5 * result.error

    def test_monte_carlo_is_deterministic(self) -> None:
        """The same seed gives the same estimate."""
        first = quadrature(lambda p: np.cos(p[:, 0]), n=3, samples=1000, seed=11)
        second = quadrature(lambda p: np.cos(p[:, 0]), n=3, samples=1000, seed=11)
        assert first == second

    def test_point_function_needs_dimension(self) -> None:
        """n is required for point functions."""
        with pytest.raises(ValueError, match="n is required"):
            quadrature(lambda p: p[:, 0])


# =============================================================================
# HARMONIC TESTS
# =============================================================================


class TestHarmonicBasis:
    """Tests for harmonic_basis function."""

    @pytest.mark.parametrize(
        ("level", "size", "eigenvalue"), [(0, 1, 0.0), (1, 4, 3.0), (2, 9, 8.0)]
    )
    def test_sizes_and_eigenvalues(self, level: int, size: int, eigenvalue: float) -> None:
        """n = 4: 1, 4 and 9 functions with eigenvalues 0, 3 and 8."""
        basis = harmonic_basis(4, level)
        assert len(basis) == size
        assert all(u.eigenvalue == eigenvalue for u in basis)

    @pytest.mark.parametrize("n", [4, 5])
    @pytest.mark.parametrize("level", [1, 2])
    def test_laplacian_eigenfunctions(self, n: int, level: int) -> None:
        """Delta_S u = -lambda u at 1000 random points."""
        pts = random_sphere_points(n, 1000, seed=level)
        for u in harmonic_basis(n, level):
            lap = u.polynomial.sphere_laplacian().evaluate(pts)
            assert np.max(np.abs(lap + u.eigenvalue * u.evaluate(pts))) < 1e-12

    def test_l2_orthogonal(self) -> None:
        """Distinct basis functions are L^2-orthogonal."""
        n = 4
        basis = [u.polynomial for level in (0, 1, 2) for u in harmonic_basis(n, level)]
        gram = np.array([[p.l2_inner(q) for q in basis] for p in basis])
        off_diagonal = gram - np.diag(np.diag(gram))
        assert np.max(np.abs(off_diagonal)) < 1e-12
        assert np.all(np.diag(gram) > 0)

    def test_level_above_two_rejected(self) -> None:
        """Levels above 2 are outside the representation."""
        with pytest.raises(UnsupportedRepresentationError, match="level"):
            harmonic_basis(4, 3)

    def test_non_tracefree_coefficient_rejected(self) -> None:
        """Level-2 coefficients must be tracefree."""
        with pytest.raises(ValueError, match="tracefree"):
            HarmonicFunction(3, 2, np.eye(3))


class TestPolynomialCalculus:
    """Tests for SpherePolynomial derivatives."""

    def test_laplacian_of_square(self) -> None:
        """Delta_S x_1^2 = 2 - 2n x_1^2."""
        n = 5
        pts = random_sphere_points(n, 200, seed=1)
        square = coordinate(n, 0) * coordinate(n, 0)
        lap = square.sphere_laplacian().evaluate(pts)
        assert np.allclose(lap, 2.0 - 2.0 * n * pts[:, 0] ** 2, atol=1e-12)

    def test_hessian_trace_is_laplacian(self, points: np.ndarray) -> None:
        """tr Hess_S f = Delta_S f."""
        f = SpherePolynomial.quadratic(_random_tracefree(4, 2)) + coordinate(4, 1) * 0.3
        hess = f.sphere_hessian(points)
        trace = np.trace(hess, axis1=1, axis2=2)
        assert np.max(np.abs(trace - f.sphere_laplacian().evaluate(points))) < 1e-12

    def test_hessian_of_first_harmonic(self, points: np.ndarray) -> None:
        """Hess_S x_1 = -x_1 g_S."""
        hess = coordinate(4, 0).sphere_hessian(points)
        expected = -points[:, 0, None, None] * tangent_projectors(points)
        assert np.max(np.abs(hess - expected)) < 1e-14

    def test_gradient_is_tangent(self, points: np.ndarray) -> None:
        """Sphere gradients are orthogonal to x."""
        f = SpherePolynomial.quadratic(_random_tracefree(4, 5)) * coordinate(4, 2)
        grad = f.sphere_gradient(points)
        assert np.max(np.abs(np.sum(grad * points, axis=1))) < 1e-13


# =============================================================================
# VECTOR FIELD TESTS
# =============================================================================


class TestGradientField:
    """Tests for gradient_field function."""

    def test_conformal_killing_identity(self, points: np.ndarray) -> None:
        """L_{grad u} g_S = (2/(n-1)) div(grad u) g_S for first harmonics."""
        for u in harmonic_basis(4, 1):
            assert conformal_identity_residual(u, points) < 1e-12

    def test_divergence_of_coordinate_gradient(self, points: np.ndarray) -> None:
        """div grad x_1 = -(n-1) x_1."""
        field = gradient_field(harmonic_basis(4, 1)[0])
        div = field.divergence().evaluate(points)
        assert np.max(np.abs(div + 3.0 * points[:, 0])) < 1e-12

    def test_level_two_matches_polynomial_gradient(self, points: np.ndarray) -> None:
        """The (v, M) field of a second harmonic is its sphere gradient."""
        u = HarmonicFunction(4, 2, _random_tracefree(4, 9))
        field = gradient_field(u)
        difference = field.evaluate(points) - u.polynomial.sphere_gradient(points)
        assert np.max(np.abs(difference)) < 1e-12

    def test_constant_gives_zero_field(self, points: np.ndarray) -> None:
        """grad 1 = 0."""
        field = gradient_field(harmonic_basis(4, 0)[0])
        assert np.max(np.abs(field.evaluate(points))) == 0.0

    def test_conformal_identity_rejects_level_two(self, points: np.ndarray) -> None:
        """Only first harmonics take the conformal path."""
        with pytest.raises(UnsupportedRepresentationError):
            conformal_identity_residual(harmonic_basis(4, 2)[0], points)

    def test_vector_operator_eigenvalue(self, points: np.ndarray) -> None:
        """(Delta + (n-2)) grad x_1 = (n-3) grad x_1; value 1 for n = 4."""
        field = gradient_field(harmonic_basis(4, 1)[0])
        shifted = field.rough_laplacian() + field.ricci()
        assert np.max(np.abs(shifted.evaluate(points) - field.evaluate(points))) < 1e-12

    def test_bochner_for_second_harmonics(self, points: np.ndarray) -> None:
        """Delta grad u = grad(Delta u) + Ric(grad u) with the polynomial gradient."""
        u = HarmonicFunction(4, 2, _random_tracefree(4, 4))
        lhs = gradient_field(u).rough_laplacian().evaluate(points)
        rhs = u.polynomial.sphere_laplacian().sphere_gradient(points) + 2.0 * gradient_field(
            u
        ).evaluate(points)
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_killing_fields_in_kernel(self, points: np.ndarray) -> None:
        """Delta X + Ric X = 0 for rotations."""
        for m in canonical_basis(4):
            field = SphereVectorField.rotation(m)
            total = field.rough_laplacian() + field.ricci()
            assert np.max(np.abs(total.evaluate(points))) < 1e-14


class TestSphereVectorField:
    """Tests for SphereVectorField calculus."""

    @given(seed=st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=20, deadline=None)
    def test_covariant_derivative_matches_difference_quotient(self, seed: int) -> None:
        """nabla_X V = P dV(X) for the homogeneous extension."""
        rng = np.random.default_rng(seed)
        field = SphereVectorField(rng.standard_normal(4), rng.standard_normal((4, 4)))
        x = random_sphere_points(4, 1, seed=seed)[0]
        direction = rng.standard_normal(4)
        direction -= direction.dot(x) * x
        h = 1e-6
        upper = field.evaluate((x + h * direction)[None])[0]
        lower = field.evaluate((x - h * direction)[None])[0]
        numeric = tangent_projectors(x[None])[0] @ ((upper - lower) / (2 * h))
        exact = field.covariant_derivative(x[None])[0] @ direction
        assert np.allclose(numeric, exact, atol=1e-7)

    def test_divergence_is_trace_of_derivative(self, points: np.ndarray) -> None:
        """div V = tr nabla V."""
        rng = np.random.default_rng(3)
        field = SphereVectorField(rng.standard_normal(4), rng.standard_normal((4, 4)))
        trace = np.trace(field.covariant_derivative(points), axis1=1, axis2=2)
        assert np.max(np.abs(trace - field.divergence().evaluate(points))) < 1e-12

    def test_bracket_of_rotations(self) -> None:
        """[Mx, M'x] is the rotation with matrix -[M, M']."""
        basis = canonical_basis(4)
        for m in basis:
            for mp in basis:
                bracket = SphereVectorField.rotation(m).lie_bracket(SphereVectorField.rotation(mp))
                assert np.array_equal(bracket.matrix, -(m @ mp - mp @ m))
                assert bracket.is_rotational

    def test_bracket_rejects_gradients(self) -> None:
        """Brackets are closed only for rotations."""
        grad = gradient_field(harmonic_basis(4, 1)[0])
        with pytest.raises(UnsupportedRepresentationError, match="rotational"):
            grad.lie_bracket(grad)

    def test_rotations_preserve_levels(self) -> None:
        """V(u) stays in the level of u for rotational V."""
        u = HarmonicFunction(4, 2, _random_tracefree(4, 6)).polynomial
        for m in canonical_basis(4):
            image = SphereVectorField.rotation(m).apply(u)
            projection = project_levels(image)
            assert projection.residual < 1e-10
            assert np.max(np.abs(projection.coefficients[0])) < 1e-10
            assert np.max(np.abs(projection.coefficients[1])) < 1e-10


class TestLieDerivativeMetric:
    """Tests for lie_derivative_metric function."""

    def test_rotations_are_isometries(self, points: np.ndarray) -> None:
        """L_{Mx} g_S = 0."""
        for m in canonical_basis(4):
            lie = lie_derivative_metric(SphereVectorField.rotation(m))
            assert np.max(lie.norm(points)) < 1e-13

    def test_gradient_of_first_harmonic(self, points: np.ndarray) -> None:
        """L_{grad x_1} g_S = -2 x_1 g_S."""
        lie = lie_derivative_metric(gradient_field(harmonic_basis(4, 1)[0])).evaluate(points)
        expected = -2.0 * points[:, 0, None, None] * tangent_projectors(points)
        assert np.max(np.abs(lie - expected)) < 1e-13

    def test_matches_symmetrized_derivative(self, points: np.ndarray) -> None:
        """L_V g_S = nabla V + nabla V^T."""
        rng = np.random.default_rng(8)
        field = SphereVectorField(rng.standard_normal(4), rng.standard_normal((4, 4)))
        nabla = field.covariant_derivative(points)
        lie = lie_derivative_metric(field).evaluate(points)
        assert np.max(np.abs(lie - (nabla + np.transpose(nabla, (0, 2, 1))))) < 1e-12

    def test_rotation_on_perturbed_metric_stays_in_level_one(self) -> None:
        """Rotations map a level-1 conformal perturbation into level 1."""
        metric = ConformalSphereMetric.perturbed(4, 0.1, np.array([0.3, -0.2, 0.5, 0.1]))
        for m in canonical_basis(4):
            lie = lie_derivative_metric(SphereVectorField.rotation(m), metric)
            projection = project_levels(lie.conformal)
            assert projection.residual < 1e-10
            assert abs(projection.coefficients[0][0]) < 1e-10
            assert np.max(np.abs(projection.coefficients[2])) < 1e-10
            assert np.max(np.abs(lie.shear)) == 0.0


class TestCylinderLieDerivative:
    """Tests for cylinder_lie_derivative function."""

    def test_constant_rotation_is_killing(self, points: np.ndarray) -> None:
        """z-independent rotations are isometries of the cylinder."""
        field = CylinderVectorField.constant(SphereVectorField.rotation(canonical_basis(4)[2]))
        lie = cylinder_lie_derivative(field, 0.3, radius=2.0)
        assert np.max(lie.norm(points)) < 1e-12

    def test_axial_dilation(self, points: np.ndarray) -> None:
        """a(z) = z gives L_V g = 2 dz^2."""
        zero = SphereVectorField.zero(4)
        field = CylinderVectorField(4, lambda z: zero.vector, lambda z: zero.matrix, lambda z: z)
        lie = cylinder_lie_derivative(field, 1.0)
        assert lie.zz == pytest.approx(2.0, rel=1e-8)
        assert np.allclose(lie.norm(points), 2.0, rtol=1e-8)

    def test_twisting_rotation(self, points: np.ndarray) -> None:
        """V = z M x has the mixed block M x, of norm |Mx| r."""
        m = canonical_basis(4)[0]
        field = CylinderVectorField(4, lambda z: np.zeros(4), lambda z: z * m)
        lie = cylinder_lie_derivative(field, 0.5, radius=1.5)
        expected = math.sqrt(2.0) * 1.5 * np.linalg.norm(points @ m.T, axis=1)
        assert np.allclose(lie.norm(points), expected, rtol=1e-8)
