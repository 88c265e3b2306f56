"""
Orthogonal alignment and cutoff gluing of vector-field families.

Two families {U^b} and {U~^a} sampled on a common region are aligned by
the omega in O(N) minimizing sum_a || sum_b omega_ab U^b - U~^a ||^2 in
the weighted L^2 norm; scipy.linalg.orthogonal_procrustes solves this
from the singular value decomposition of the cross-Gram matrix. Reflections
are allowed. The aligned family is then blended into the other with a
quintic smoothstep cutoff eta(z).
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import orthogonal_procrustes

from neck_lab.core.exceptions import InputValidationError
from neck_lab.core.types import FloatArray, Grid, Matrix
from neck_lab.sphere.fields import SphereVectorField, lie_derivative_metric

logger = logging.getLogger(__name__)

RANK_TOLERANCE: float = 1e-12


@dataclass(frozen=True)
class SampledFamily:
    """
    Values of N vector fields at P weighted sample points.

    Attributes:
        values: Array (N, P, d).
        weights: Quadrature weights (P,), non-negative.
    """

    values: FloatArray
    weights: FloatArray

    def __post_init__(self) -> None:
        """Validate shapes and weights."""
        if self.values.ndim != 3:
            raise InputValidationError("values must have shape (N, P, d)", field="values")
        if self.weights.shape != (self.values.shape[1],):
            raise InputValidationError("one weight per sample point is required", field="weights")
        if np.any(self.weights < 0):
            raise InputValidationError("weights must be non-negative", field="weights")

    @classmethod
    def from_fields(
        cls,
        fields: Sequence[SphereVectorField],
        points: FloatArray,
        weights: FloatArray | None = None,
    ) -> SampledFamily:
        """Sample sphere fields at points with uniform weights by default."""
        values = np.array([f.evaluate(points) for f in fields])
        w = np.full(points.shape[0], 1.0 / points.shape[0]) if weights is None else weights
        return cls(values, np.asarray(w, dtype=float))

    @property
    def size(self) -> int:
        """Number of fields N."""
        return int(self.values.shape[0])

    def design_matrix(self) -> FloatArray:
        """Columns sqrt(w) U^a flattened, shape (P * d, N)."""
        scaled = self.values * np.sqrt(self.weights)[None, :, None]
        return np.asarray(scaled.reshape(self.size, -1).T)


class AlignmentResult(NamedTuple):
    """Optimal omega, the achieved misfit and the rank flag."""

    omega: Matrix
    misfit: float
    rank_deficient: bool


def procrustes_align(family: SampledFamily, target: SampledFamily) -> AlignmentResult:
    """
    omega in O(N) minimizing sum_a || sum_b omega_ab U^b - U~^a ||^2.

    Args:
        family: The family U to be rotated.
        target: The family U~ on the same points with the same weights.

    Returns:
        AlignmentResult. When the cross-Gram matrix is rank deficient the
        minimizer is not unique; scipy's choice is kept and flagged.
    """
    if family.values.shape != target.values.shape:
        raise InputValidationError(
            f"families differ in shape: {family.values.shape} vs {target.values.shape}",
            field="target",
        )
    if not np.allclose(family.weights, target.weights):
        raise InputValidationError("families must share the sample weights", field="weights")
    a = family.design_matrix()
    b = target.design_matrix()
    rotation, _ = orthogonal_procrustes(a, b)
    omega = rotation.T
    singular = np.linalg.svd(a.T @ b, compute_uv=False)
    rank_deficient = bool(singular.min() <= RANK_TOLERANCE * max(singular.max(), 1.0))
    if rank_deficient:
        logger.warning(
            "Procrustes cross-Gram is rank deficient (smallest singular value %.3e)",
            singular.min(),
        )
    misfit = float(np.linalg.norm(a @ rotation - b))
    return AlignmentResult(omega, misfit, rank_deficient)


# =============================================================================
# CUTOFF GLUING
# =============================================================================


@dataclass(frozen=True)
class SmoothStep:
    """
    eta(z) = 1 for z <= start, 0 for z >= end, quintic smoothstep between.

    Attributes:
        start: Left end of the transition.
        end: Right end of the transition.
    """

    start: float = -1.0
    end: float = 1.0

    def __post_init__(self) -> None:
        """Validate the transition interval."""
        if self.end <= self.start:
            raise ValueError(f"end must exceed start: {self.start} >= {self.end}")

    @property
    def width(self) -> float:
        """end - start."""
        return self.end - self.start

    def _s(self, z: FloatArray) -> FloatArray:
        return np.clip((np.asarray(z, dtype=float) - self.start) / self.width, 0.0, 1.0)

    def value(self, z: FloatArray | float) -> FloatArray:
        """eta(z)."""
        s = self._s(np.asarray(z))
        return np.asarray(1.0 - s**3 * (10.0 - 15.0 * s + 6.0 * s**2))

    def derivative(self, z: FloatArray | float) -> FloatArray:
        """eta'(z)."""
        s = self._s(np.asarray(z))
        return np.asarray(-30.0 * s**2 * (1.0 - s) ** 2 / self.width)

    def second_derivative(self, z: FloatArray | float) -> FloatArray:
        """eta''(z)."""
        s = self._s(np.asarray(z))
        return np.asarray(-60.0 * s * (1.0 - s) * (1.0 - 2.0 * s) / self.width**2)


class GlueResult(NamedTuple):
    """Blended family on a z-grid and its transition deficit."""

    z: Grid
    fields: list[list[SphereVectorField]]
    deficit: float


def combine_fields(omega: Matrix, fields: Sequence[SphereVectorField]) -> list[SphereVectorField]:
    """Fields sum_b omega_ab U^b, one per row of omega."""
    out = []
    for row in omega:
        v = np.einsum("b,bi->i", row, np.array([f.vector for f in fields]))
        m = np.einsum("b,bij->ij", row, np.array([f.matrix for f in fields]))
        out.append(SphereVectorField(v, m))
    return out


def cutoff_glue(
    family: Sequence[SphereVectorField],
    target: Sequence[SphereVectorField],
    omega: Matrix,
    eta: SmoothStep,
    z: Grid,
    points: FloatArray,
) -> GlueResult:
    """
    Blend V^a = eta sum_b omega_ab U^b + (1 - eta) U~^a on the unit cylinder.

    The families are z-independent slices, so all z-derivatives come from
    eta in closed form:

        L_V g     = [[0, eta' W^T], [eta' W, L_{V(z)} g_S]],   W = sum omega U - U~
        d/dz L_V g = [[0, eta'' W^T], [eta'' W, eta' L_W g_S]]

    Args:
        family: U.
        target: U~.
        omega: Alignment matrix.
        eta: Cutoff profile.
        z: Heights at which the blend is returned and the deficit measured.
        points: Sphere sample points.

    Returns:
        GlueResult whose deficit is sup |L_V g| + |d/dz L_V g| over the
        heights in the transition interval.
    """
    if len(family) != len(target) or omega.shape != (len(family), len(family)):
        raise InputValidationError("family, target and omega sizes disagree", field="omega")
    aligned = combine_fields(omega, family)
    differences = [a + t.scale(-1.0) for a, t in zip(aligned, target)]
    blended: list[list[SphereVectorField]] = []
    deficit = 0.0
    for height in np.asarray(z, dtype=float):
        e0 = float(eta.value(height))
        e1 = float(eta.derivative(height))
        e2 = float(eta.second_derivative(height))
        if e0 == 1.0:
            slice_fields = list(aligned)
        elif e0 == 0.0:
            slice_fields = list(target)
        else:
            slice_fields = [t + d.scale(e0) for t, d in zip(target, differences)]
        blended.append(slice_fields)
        if not eta.start <= height <= eta.end:
            continue
        for field, diff in zip(slice_fields, differences):
            w_values = diff.evaluate(points)
            sphere = lie_derivative_metric(field).norm(points)
            diff_lie = lie_derivative_metric(diff).norm(points)
            w_norm = np.linalg.norm(w_values, axis=1)
            value = np.sqrt(sphere**2 + 2.0 * (e1 * w_norm) ** 2)
            derivative = np.sqrt((e1 * diff_lie) ** 2 + 2.0 * (e2 * w_norm) ** 2)
            deficit = max(deficit, float(np.max(value + derivative)))
    return GlueResult(np.asarray(z, dtype=float), blended, deficit)
