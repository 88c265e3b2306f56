"""
Unit tests for sphere.rotations and sphere.alignment modules.

Tests cover:
1. Canonical so(n) basis, brackets and structure constants
2. Conjugated bases and transformed constants
3. Gram normalization of the standard family
4. Procrustes alignment (exact, identity, noisy, rank deficient)
5. Quintic cutoff profile
6. Cutoff gluing deficits
"""

import logging
import math

import numpy as np
import pytest
from scipy.stats import ortho_group

from neck_lab.core.exceptions import FrameError, InputValidationError
from neck_lab.sphere.alignment import SampledFamily, SmoothStep, cutoff_glue, procrustes_align
from neck_lab.sphere.fields import SphereVectorField
from neck_lab.sphere.harmonics import HarmonicFunction, gradient_field
from neck_lab.sphere.polynomials import SpherePolynomial
from neck_lab.sphere.quadrature import quadrature, random_sphere_points
from neck_lab.sphere.rotations import (
    RotationFamily,
    canonical_basis,
    canonical_index,
    canonical_scale,
    family_gram,
    reconstruction_residual,
    structure_constants,
    transform_constants,
)


@pytest.fixture(scope="module")
def sample_points() -> np.ndarray:
    """300 seeded points on S^3."""
    return random_sphere_points(4, 300, seed=21)


def _rotate(omega: np.ndarray, fields: list[SphereVectorField]) -> list[SphereVectorField]:
    return [
        SphereVectorField(
            sum(w * f.vector for w, f in zip(row, fields)),
            sum(w * f.matrix for w, f in zip(row, fields)),
        )
        for row in omega
    ]


def _perturbed_family(n: int, epsilon: float, seed: int) -> list[SphereVectorField]:
    rng = np.random.default_rng(seed)
    fields = []
    for m in canonical_basis(n):
        a = rng.standard_normal(n)
        s = rng.standard_normal((n, n))
        s = 0.5 * (s + s.T)
        s -= np.trace(s) / n * np.eye(n)
        bump = gradient_field(HarmonicFunction(n, 1, a)) + gradient_field(HarmonicFunction(n, 2, s))
        fields.append(SphereVectorField.rotation(m) + bump.scale(epsilon))
    return fields


# =============================================================================
# ROTATION TESTS
# =============================================================================


class TestRotationFamily:
    """Tests for RotationFamily and structure_constants."""

    def test_canonical_basis_is_orthonormal(self) -> None:
        """The E_ij are orthonormal for tr(M^T M')/2."""
        family = RotationFamily.canonical(5)
        assert family.size == 10
        assert np.allclose(RotationFamily.gram_matrix(family.matrices), np.eye(10), atol=0)

    def test_bracket_table(self) -> None:
        """[E_12, E_23] = E_13 exactly."""
        basis = canonical_basis(4)
        e12 = basis[canonical_index(4, 0, 1)]
        e23 = basis[canonical_index(4, 1, 2)]
        e13 = basis[canonical_index(4, 0, 2)]
        assert np.array_equal(e12 @ e23 - e23 @ e12, e13)

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_reconstruction_identity(self, n: int) -> None:
        """sigma^a = sum k_abc [sigma^b, sigma^c] for the canonical basis."""
        family = RotationFamily.canonical(n)
        assert reconstruction_residual(family) < 1e-14
        assert np.max(np.abs(structure_constants(family))) <= 1.0

    def test_conjugated_basis(self) -> None:
        """Constants of an O(6)-conjugated basis follow the triple-omega rule."""
        family = RotationFamily.canonical(4)
        omega = ortho_group.rvs(6, random_state=5)
        conjugated = family.conjugate(omega)
        direct = structure_constants(conjugated)
        transformed = transform_constants(structure_constants(family), omega)
        assert np.max(np.abs(direct - transformed)) < 1e-12
        assert reconstruction_residual(conjugated, transformed) < 1e-12

    def test_non_orthonormal_basis_rejected(self) -> None:
        """A scaled basis is refused."""
        with pytest.raises(FrameError, match="not orthonormal"):
            RotationFamily(4, 2.0 * canonical_basis(4))

    def test_symmetric_matrices_rejected(self) -> None:
        """Basis matrices must be antisymmetric."""
        mats = canonical_basis(3)
        mats[0] = np.abs(mats[0])
        with pytest.raises(FrameError, match="antisymmetric"):
            RotationFamily(3, mats)


class TestFamilyGram:
    """Tests for family_gram and canonical_scale functions."""

    @pytest.mark.parametrize("n", [4, 5])
    @pytest.mark.parametrize("radius", [1.0, 2.5])
    def test_canonical_scale_normalizes(self, n: int, radius: float) -> None:
        """The scaled standard family has Gram delta_ab on every round sphere."""
        family = RotationFamily.canonical(n)
        gram = family_gram(family, canonical_scale(n), radius)
        assert np.allclose(gram, np.eye(family.size), atol=1e-12)

    def test_gram_integrals_by_quadrature(self) -> None:
        """int <E_ij x, E_kl x> = 2 vol/n delta by monomial quadrature."""
        n = 4
        basis = canonical_basis(n)
        vol = quadrature(SpherePolynomial.constant(n, 1.0)).value
        for a, ma in enumerate(basis):
            for b, mb in enumerate(basis):
                integrand = SpherePolynomial.quadratic(ma.T @ mb)
                expected = 2 * vol / n if a == b else 0.0
                assert quadrature(integrand).value == pytest.approx(expected, abs=1e-12)


# =============================================================================
# ALIGNMENT TESTS
# =============================================================================


class TestProcrustesAlign:
    """Tests for procrustes_align function."""

    def test_recovers_exact_rotation(self, sample_points: np.ndarray) -> None:
        """U~ = omega_0 U gives back omega_0 with zero misfit."""
        fields = RotationFamily.canonical(4).fields()
        omega0 = ortho_group.rvs(6, random_state=2)
        family = SampledFamily.from_fields(fields, sample_points)
        target = SampledFamily.from_fields(_rotate(omega0, fields), sample_points)
        result = procrustes_align(family, target)
        assert np.allclose(result.omega, omega0, atol=1e-10)
        assert result.misfit <= 1e-12
        assert not result.rank_deficient

    def test_identity_for_equal_families(self, sample_points: np.ndarray) -> None:
        """U = U~ gives the identity."""
        family = SampledFamily.from_fields(RotationFamily.canonical(4).fields(), sample_points)
        result = procrustes_align(family, family)
        assert np.allclose(result.omega, np.eye(6), atol=1e-12)

    def test_noise_perturbation(self, sample_points: np.ndarray) -> None:
        """omega stays within O(delta) of omega_0 and the misfit is O(delta)."""
        fields = RotationFamily.canonical(4).fields()
        omega0 = ortho_group.rvs(6, random_state=9)
        family = SampledFamily.from_fields(fields, sample_points)
        clean = SampledFamily.from_fields(_rotate(omega0, fields), sample_points)
        rng = np.random.default_rng(0)
        for delta in (1e-2, 1e-3):
            noise = delta * rng.standard_normal(clean.values.shape)
            noisy = SampledFamily(clean.values + noise, clean.weights)
            result = procrustes_align(family, noisy)
            assert np.max(np.abs(result.omega - omega0)) < 10 * delta
            assert result.misfit < 10 * delta

    def test_rank_deficiency_flagged(
        self, sample_points: np.ndarray, caplog: pytest.LogCaptureFixture
    ) -> None:
        """A vanishing family is flagged and logged."""
        zeros = SampledFamily(np.zeros((6, 300, 4)), np.full(300, 1 / 300))
        with caplog.at_level(logging.WARNING):
            result = procrustes_align(zeros, zeros)
        assert result.rank_deficient
        assert "rank deficient" in caplog.text
        assert np.allclose(result.omega @ result.omega.T, np.eye(6))

    def test_shape_mismatch_rejected(self, sample_points: np.ndarray) -> None:
        """Families must be sampled alike."""
        family = SampledFamily.from_fields(RotationFamily.canonical(4).fields(), sample_points)
        other = SampledFamily.from_fields(RotationFamily.canonical(4).fields(), sample_points[:10])
        with pytest.raises(InputValidationError, match="differ in shape"):
            procrustes_align(family, other)


# =============================================================================
# GLUING TESTS
# =============================================================================


class TestSmoothStep:
    """Tests for SmoothStep profile."""

    def test_plateaus(self) -> None:
        """eta = 1 left of the transition and 0 right of it."""
        eta = SmoothStep(-1.0, 1.0)
        assert np.all(eta.value(np.linspace(-20, -1, 50)) == 1.0)
        assert np.all(eta.value(np.linspace(1, 20, 50)) == 0.0)

    def test_monotone_with_consistent_derivatives(self) -> None:
        """eta decreases and its derivatives match difference quotients."""
        eta = SmoothStep(-1.0, 1.0)
        z = np.linspace(-0.99, 0.99, 199)
        assert np.all(np.diff(eta.value(z)) < 0)
        h = 1e-6
        numeric = (eta.value(z + h) - eta.value(z - h)) / (2 * h)
        assert np.allclose(numeric, eta.derivative(z), atol=1e-8)
        numeric2 = (eta.derivative(z + h) - eta.derivative(z - h)) / (2 * h)
        assert np.allclose(numeric2, eta.second_derivative(z), atol=1e-6)

    def test_invalid_interval_rejected(self) -> None:
        """end must exceed start."""
        with pytest.raises(ValueError, match="end must exceed start"):
            SmoothStep(1.0, 1.0)


class TestCutoffGlue:
    """Tests for cutoff_glue function."""

    def test_identical_rotations(self, sample_points: np.ndarray) -> None:
        """Standard rotations glued to themselves have zero deficit."""
        fields = RotationFamily.canonical(4).fields()
        z = np.linspace(-2.0, 2.0, 41)
        result = cutoff_glue(fields, fields, np.eye(6), SmoothStep(), z, sample_points)
        assert result.deficit <= 1e-12

    def test_exactly_rotated_families(self, sample_points: np.ndarray) -> None:
        """After alignment, families differing by omega_0 glue with deficit <= 1e-10."""
        fields = RotationFamily.canonical(4).fields()
        target = _rotate(ortho_group.rvs(6, random_state=4), fields)
        omega = procrustes_align(
            SampledFamily.from_fields(fields, sample_points),
            SampledFamily.from_fields(target, sample_points),
        ).omega
        z = np.linspace(-1.0, 1.0, 41)
        result = cutoff_glue(fields, target, omega, SmoothStep(), z, sample_points)
        assert result.deficit <= 1e-10

    def test_blend_equals_inputs_outside_transition(self, sample_points: np.ndarray) -> None:
        """Left of the cutoff the blend is omega U, right of it U~."""
        fields = _perturbed_family(4, 0.01, seed=1)
        target = _perturbed_family(4, 0.01, seed=2)
        omega = ortho_group.rvs(6, random_state=8)
        result = cutoff_glue(
            fields, target, omega, SmoothStep(), np.array([-3.0, 3.0]), sample_points
        )
        left, right = result.fields
        for blended, expected in zip(left, _rotate(omega, fields)):
            assert np.allclose(blended.matrix, expected.matrix, rtol=0, atol=1e-14)
        for blended, expected in zip(right, target):
            assert np.array_equal(blended.matrix, expected.matrix)
            assert np.array_equal(blended.vector, expected.vector)

    def test_deficit_scales_linearly(self, sample_points: np.ndarray) -> None:
        """Independent O(eps) perturbations give an O(eps) transition deficit."""
        z = np.linspace(-1.0, 1.0, 21)
        deficits = []
        for epsilon in (1e-2, 1e-3, 1e-4):
            fields = _perturbed_family(4, epsilon, seed=1)
            target = _perturbed_family(4, epsilon, seed=2)
            omega = procrustes_align(
                SampledFamily.from_fields(fields, sample_points),
                SampledFamily.from_fields(target, sample_points),
            ).omega
            glued = cutoff_glue(fields, target, omega, SmoothStep(), z, sample_points)
            deficits.append(glued.deficit)
        assert deficits[0] / deficits[1] == pytest.approx(10.0, rel=0.2)
        assert deficits[1] / deficits[2] == pytest.approx(10.0, rel=0.2)
        assert deficits[0] < 100 * 1e-2 * math.sqrt(6)
