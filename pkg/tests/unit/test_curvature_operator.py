"""
Unit tests for curvature.operator module.

Tests cover:
1. Symmetry projection (idempotence, validation)
2. Rotationally symmetric assembly and the two-form identity
3. Isotropic form on the unit cylinder and the round sphere
4. Frame validation and rotation invariance
5. JSON serialization
"""

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from neck_lab.core.exceptions import DimensionError, FrameError, InputValidationError
from neck_lab.curvature.operator import (
    CurvatureOperator,
    FourFrame,
    cylinder_operator,
    isotropic_value,
    project_curvature_tensor,
    rotationally_symmetric_operator,
    sphere_operator,
    symmetry_defects,
    two_form_value,
)


def _random_antisymmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    x = rng.standard_normal((n, n))
    return x - x.T


# =============================================================================
# PROJECTION TESTS
# =============================================================================


class TestProjectCurvatureTensor:
    """Tests for project_curvature_tensor function."""

    @given(seed=st.integers(min_value=0, max_value=10_000), n=st.integers(min_value=4, max_value=6))
    @settings(max_examples=25, deadline=None)
    def test_projection_is_idempotent(self, seed: int, n: int) -> None:
        """Projecting an already projected tensor changes nothing."""
        rng = np.random.default_rng(seed)
        once = project_curvature_tensor(rng.standard_normal((n,) * 4))
        twice = project_curvature_tensor(once)
        assert np.max(np.abs(once - twice)) < 1e-12

    def test_projection_satisfies_all_symmetries(self) -> None:
        """Every defect of the projected tensor vanishes."""
        rng = np.random.default_rng(3)
        projected = project_curvature_tensor(rng.standard_normal((5,) * 4))
        assert max(symmetry_defects(projected).values()) < 1e-12

    def test_from_components_accepts_arbitrary_array(self) -> None:
        """from_components projects before validating."""
        rng = np.random.default_rng(4)
        op = CurvatureOperator.from_components(rng.standard_normal((4,) * 4))
        assert op.n == 4

    def test_unprojected_components_rejected(self) -> None:
        """Direct construction validates the symmetries."""
        rng = np.random.default_rng(5)
        with pytest.raises(InputValidationError, match="curvature symmetries"):
            CurvatureOperator(n=4, components=rng.standard_normal((4,) * 4))

    def test_dimension_below_four_rejected(self) -> None:
        """n < 4 is not supported."""
        with pytest.raises(DimensionError, match="at least 4"):
            CurvatureOperator.zero(3)

    def test_wrong_shape_rejected(self) -> None:
        """Shape must be (n, n, n, n)."""
        with pytest.raises(InputValidationError, match="shape"):
            CurvatureOperator(n=5, components=np.zeros((4,) * 4))


# =============================================================================
# ROTATIONALLY SYMMETRIC OPERATORS
# =============================================================================


class TestRotationallySymmetricOperator:
    """Tests for rotationally_symmetric_operator function."""

    def test_zero_matrix_gives_zero_operator(self) -> None:
        """A = 0 assembles R = 0."""
        op = rotationally_symmetric_operator(np.zeros((5, 5)))
        assert np.all(op.components == 0.0)

    def test_asymmetric_matrix_rejected(self) -> None:
        """A must be symmetric."""
        a = np.eye(4)
        a[0, 1] = 1.0
        with pytest.raises(InputValidationError, match="symmetric"):
            rotationally_symmetric_operator(a)

    def test_cylinder_sectional_curvatures(self) -> None:
        """Sphere-pair planes have curvature 1, mixed planes 0."""
        op = cylinder_operator(5)
        for i in range(4):
            assert op.sectional(i, 4) == pytest.approx(0.0, abs=1e-14)
            for j in range(i + 1, 4):
                assert op.sectional(i, j) == pytest.approx(1.0)

    def test_cylinder_scalar_curvature(self) -> None:
        """Unit S^{n-1} x R has scal = (n-1)(n-2)."""
        assert cylinder_operator(4).scalar_curvature == pytest.approx(6.0)
        assert cylinder_operator(5).scalar_curvature == pytest.approx(12.0)

    def test_two_form_identity(self) -> None:
        """R(phi, phi) = 4 A_ij phi_ik phi_jk for random A and phi."""
        rng = np.random.default_rng(11)
        x = rng.standard_normal((5, 5))
        a = x + x.T
        op = rotationally_symmetric_operator(a)
        for _ in range(20):
            phi = _random_antisymmetric(rng, 5)
            expected = 4.0 * np.einsum("ij,ik,jk->", a, phi, phi)
            assert two_form_value(op, phi) == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_positive_definite_a_gives_positive_operator(self) -> None:
        """Positive definite A makes R(phi, phi) > 0 for 100 random phi."""
        rng = np.random.default_rng(12)
        x = rng.standard_normal((4, 4))
        op = rotationally_symmetric_operator(x @ x.T + 0.1 * np.eye(4))
        values = [two_form_value(op, _random_antisymmetric(rng, 4)) for _ in range(100)]
        assert min(values) > 0.0


# =============================================================================
# ISOTROPIC FORM
# =============================================================================


class TestIsotropicValue:
    """Tests for isotropic_value function."""

    def test_zero_operator(self) -> None:
        """R = 0 gives 0 on any frame."""
        frame = FourFrame.standard(6, (0, 2, 3, 5))
        assert isotropic_value(CurvatureOperator.zero(6), frame) == 0.0

    def test_cylinder_frame_containing_axis(self) -> None:
        """Unit 4-cylinder with e4 along the axis gives 2."""
        assert isotropic_value(cylinder_operator(4), FourFrame.standard(4)) == pytest.approx(2.0)

    def test_cylinder_n4_constant_over_frames(self) -> None:
        """In n = 4 every frame spans R^4, so the PIC form is 2 everywhere."""
        rng = np.random.default_rng(1)
        q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
        assert isotropic_value(cylinder_operator(4), FourFrame(q)) == pytest.approx(2.0)

    def test_cylinder_n5_frame_inside_sphere_factor(self) -> None:
        """Unit 5-cylinder with the frame tangent to S^4 gives 4."""
        frame = FourFrame.standard(5, (0, 1, 2, 3))
        assert isotropic_value(cylinder_operator(5), frame) == pytest.approx(4.0)

    def test_round_sphere_parameters(self) -> None:
        """Round sphere value is (1 + lam^2)(1 + mu^2)."""
        frame = FourFrame(np.eye(4), lam=0.5, mu=0.25)
        value = isotropic_value(sphere_operator(4), frame)
        assert value == pytest.approx((1 + 0.25) * (1 + 0.0625))

    def test_rotation_invariance_for_rotationally_symmetric_operator(self) -> None:
        """PIC form depends only on the 4-plane for rotationally symmetric operators."""
        rng = np.random.default_rng(21)
        x = rng.standard_normal((6, 6))
        op = rotationally_symmetric_operator(x + x.T)
        base, _ = np.linalg.qr(rng.standard_normal((6, 4)))
        reference = isotropic_value(op, FourFrame(base))
        for _ in range(100):
            rot, _ = np.linalg.qr(rng.standard_normal((4, 4)))
            value = isotropic_value(op, FourFrame(base @ rot))
            assert value == pytest.approx(reference, abs=1e-10)

    def test_dimension_mismatch_rejected(self) -> None:
        """Frame and operator must share n."""
        with pytest.raises(DimensionError, match="differs"):
            isotropic_value(cylinder_operator(5), FourFrame.standard(4))


class TestFourFrame:
    """Tests for FourFrame validation."""

    def test_non_orthonormal_rejected(self) -> None:
        """Columns must be orthonormal to 1e-10."""
        vectors = np.eye(5)[:, :4]
        vectors[0, 1] = 1e-6
        with pytest.raises(FrameError, match="not orthonormal"):
            FourFrame(vectors)

    def test_parameter_out_of_range_rejected(self) -> None:
        """lam and mu live in [0, 1]."""
        with pytest.raises(ValueError, match="lam must be"):
            FourFrame(np.eye(4), lam=1.5)
        with pytest.raises(ValueError, match="mu must be"):
            FourFrame(np.eye(4), mu=-0.1)


# =============================================================================
# SERIALIZATION
# =============================================================================


class TestSerialization:
    """Tests for CurvatureOperator.to_dict / from_dict."""

    def test_json_round_trip_preserves_components(self) -> None:
        """Operators survive a JSON dump with row-major components."""
        op = CurvatureOperator.random(4, np.random.default_rng(8))
        restored = CurvatureOperator.from_dict(json.loads(json.dumps(op.to_dict())))
        assert np.array_equal(restored.components, op.components)

    def test_wrong_component_count_rejected(self) -> None:
        """Flat array length must be n^4."""
        with pytest.raises(InputValidationError, match="Expected 256"):
            CurvatureOperator.from_dict({"n": 4, "components": [0.0] * 10})
