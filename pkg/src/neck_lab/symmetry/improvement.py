"""
Smoothing harness for the symmetry improvement step.

A rotation family on the shrinking cylinder is contaminated by gradients
of first harmonics,

    U^a = c M^a x + c(z, t) grad(psi^a . x).

The coefficient c evolves by the vector heat equation, a VECTOR mode of
rough eigenvalue 1 whose time power -(n-3)/(2(n-2)) is also the power of
the conformal Killing field xi(t). Over z in [-L/4, L/4] and t in
[-L/4, t_n] the z-dependent part of c decays, the z-independent part is a
multiple of xi(t_n) and is removed, and the deficits of the family are
measured on |z| <= 1 at t_n before and after.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from typing import NamedTuple

import numpy as np
import pandas as pd
from scipy.interpolate import CubicSpline

from neck_lab.core.exceptions import (
    DimensionError,
    InputValidationError,
    UnsupportedRepresentationError,
)
from neck_lab.core.types import FloatArray, Grid, ModeKind, reference_time
from neck_lab.spectral.killing import conformal_killing_removal
from neck_lab.spectral.modes import ModeCoefficient, mode_evolve
from neck_lab.sphere.fields import CylinderVectorField, cylinder_lie_derivative
from neck_lab.sphere.polynomials import sphere_volume
from neck_lab.sphere.quadrature import random_sphere_points
from neck_lab.sphere.rotations import RotationFamily, canonical_scale, family_gram
from neck_lab.symmetry.deficits import SymmetryReport
from neck_lab.symmetry.neck import NeckSample

logger = logging.getLogger(__name__)

DEFAULT_LENGTHS: tuple[float, ...] = (20.0, 40.0, 80.0)
CONTAMINATION: float = 0.01
GRID_STEP: float = 0.25
TIME_STEP: float = 0.05
CENTER_HALF_WIDTH: float = 1.0
CENTER_SAMPLES: int = 21
SPHERE_SAMPLES: int = 400


class ImprovementRow(NamedTuple):
    """
    Deficits for one window length.

    Attributes:
        length: L.
        before: Deficits of the contaminated family at t_n without smoothing.
        after: Deficits after evolution and removal of the neutral part.
        normalized: epsilon_after * L^{1/(2(n-2))} / delta.
        removed: Multiple of xi(t_n), per unit direction psi^a, subtracted
            from each member as the neutral part.
    """

    length: float
    before: SymmetryReport
    after: SymmetryReport
    normalized: float
    removed: float = 0.0


class ImprovementResult(NamedTuple):
    """
    Outcome of the improvement experiment over several window lengths.

    Attributes:
        n: Dimension.
        delta: Contamination amplitude.
        rows: One row per length, in the order given.
    """

    n: int
    delta: float
    rows: tuple[ImprovementRow, ...]

    @property
    def decay_slope(self) -> float:
        """Least-squares slope of log epsilon_after against log L; nan without decay data."""
        lengths = np.array([row.length for row in self.rows])
        after = np.array([row.after.epsilon for row in self.rows])
        if lengths.size < 2 or np.any(after <= 0):
            return math.nan
        slope, _ = np.polyfit(np.log(lengths), np.log(after), 1)
        return float(slope)

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary, one entry per length."""
        return {
            "n": self.n,
            "delta": self.delta,
            "rows": [
                {
                    "L": row.length,
                    "before": row.before.to_dict(),
                    "after": row.after.to_dict(),
                    "normalized": row.normalized,
                    "removed": row.removed,
                }
                for row in self.rows
            ],
            "decay_slope": None if math.isnan(self.decay_slope) else self.decay_slope,
        }

    def to_frame(self) -> pd.DataFrame:
        """One row per length."""
        return pd.DataFrame(
            {
                "L": [row.length for row in self.rows],
                "epsilon_before": [row.before.epsilon for row in self.rows],
                "epsilon_after": [row.after.epsilon for row in self.rows],
                "normalized": [row.normalized for row in self.rows],
                "removed": [row.removed for row in self.rows],
            }
        )


def contamination_directions(n: int, size: int, seed: int = 0) -> FloatArray:
    """Random unit vectors psi^a, shape (size, n)."""
    return random_sphere_points(n, size, seed)


class _Evolution(NamedTuple):
    z: Grid
    before: FloatArray
    after: FloatArray
    start: float


def _evolve(n: int, length: float, delta: float) -> _Evolution:
    """
    Evolve c from c(z, -L/4) = delta (-t)^p (1 + cos(2 pi z / L)) to t_n.

    The boundary values delta (-t)^p are the z-independent solution, so
    the z-dependent part decays like exp(-(2 pi / L)^2 (t - t0)).
    """
    mode = ModeCoefficient(n, ModeKind.VECTOR, 1.0)
    p = mode.power
    t_n = reference_time(n)
    t0 = -length / 4.0
    if t0 >= t_n:
        raise InputValidationError(f"window length too short: {length}", field="lengths")
    z = np.linspace(-length / 4.0, length / 4.0, int(round(length / (2.0 * GRID_STEP))) + 1)
    t = np.linspace(t0, t_n, int(math.ceil((t_n - t0) / TIME_STEP)) + 1)
    profile = delta * (1.0 + np.cos(2.0 * math.pi * z / length))

    def boundary(s: float) -> float:
        return delta * (-s) ** p

    evolved = mode_evolve(mode, (-t0) ** p * profile, boundary, boundary, z, t)
    assert evolved.field is not None
    return _Evolution(z, (-t_n) ** p * profile, evolved.field.final, t0)


def _member_field(
    n: int, spline: CubicSpline, order: int, direction: FloatArray, rotation: FloatArray
) -> CylinderVectorField:
    """The z-derivative of order `order` of c(z) grad(psi . x) + c M x."""
    zero = np.zeros((n, n))

    def vector(z: float) -> FloatArray:
        return np.asarray(float(spline(z, order)) * direction)

    def matrix(z: float) -> FloatArray:
        return rotation if order == 0 else zero

    return CylinderVectorField(n, vector, matrix)


def _center_report(
    family: RotationFamily,
    scale: float,
    directions: FloatArray,
    z: Grid,
    coefficient: FloatArray,
    points: FloatArray,
    window: tuple[float, float],
    length: float,
) -> SymmetryReport:
    """Deficits of the contaminated family on |z| <= 1 of the unit cylinder."""
    n = family.n
    spline = CubicSpline(z, coefficient)
    heights = np.linspace(-CENTER_HALF_WIDTH, CENTER_HALF_WIDTH, CENTER_SAMPLES)
    lie = 0.0
    for height in heights:
        total = np.zeros(points.shape[0])
        for direction, matrix in zip(directions, family.matrices):
            for order in range(3):
                field = _member_field(n, spline, order, direction, scale * matrix)
                total += cylinder_lie_derivative(field, float(height)).norm(points) ** 2
        lie = max(lie, float(np.max(total)))

    vol = sphere_volume(n)
    harmonic = vol ** (-(n + 1) / (n - 1)) * vol * (n - 1) / n * (directions @ directions.T)
    rotational = family_gram(family, scale)
    identity = np.eye(family.size)
    gram = max(
        float(np.sum((identity - rotational - float(spline(h)) ** 2 * harmonic) ** 2))
        for h in heights
    )
    deficits = (lie, 0.0, gram)
    return SymmetryReport(deficits, math.sqrt(max(deficits)), window, length)


def improvement_experiment(
    sample: NeckSample,
    family: RotationFamily,
    lengths: Sequence[float] = DEFAULT_LENGTHS,
    delta: float = CONTAMINATION,
    directions: FloatArray | None = None,
    scale: float | None = None,
    seed: int = 0,
) -> ImprovementResult:
    """
    Deficits of a contaminated family before and after smoothing.

    Args:
        sample: Neck sample; its metric must be the exact cylinder.
        family: Rotation matrices M^a.
        lengths: Window lengths L.
        delta: Contamination amplitude.
        directions: psi^a, shape (N, n); seeded random unit vectors when omitted.
        scale: Factor c; canonical when omitted.
        seed: Seed for the default directions and the sphere sample points.

    Returns:
        ImprovementResult.

    Raises:
        UnsupportedRepresentationError: If the background is not the cylinder.
    """
    metric = sample.metric
    n = metric.n
    if metric.perturbation_norm > 0:
        raise UnsupportedRepresentationError(
            "the improvement experiment runs on the exact cylinder only", detail="background"
        )
    if family.n != n:
        raise DimensionError(
            f"family dimension {family.n} differs from {n}", n=family.n, required=n
        )
    if delta < 0:
        raise ValueError(f"delta must be non-negative: {delta}")
    if not lengths:
        raise InputValidationError("at least one window length is required", field="lengths")
    c = canonical_scale(n) if scale is None else scale
    psi = contamination_directions(n, family.size, seed) if directions is None else directions
    psi = np.asarray(psi, dtype=float)
    if psi.shape != (family.size, n):
        raise InputValidationError(
            f"directions must have shape {(family.size, n)}: {psi.shape}", field="directions"
        )
    points = random_sphere_points(n, SPHERE_SAMPLES, seed)
    t_n = reference_time(n)
    unit = np.zeros(n)
    unit[0] = 1.0
    xi = conformal_killing_removal(unit, t_n).xi
    exponent = 1.0 / (2.0 * (n - 2))

    rows = []
    for length in lengths:
        evolution = _evolve(n, float(length), delta)
        center = np.abs(evolution.z) <= CENTER_HALF_WIDTH
        amount = float(np.mean(evolution.after[center])) / float(xi.vector[0])
        neutral = xi.scale(amount)
        residual = evolution.after - float(neutral.vector[0])
        window = (evolution.start, t_n)
        before = _center_report(
            family, c, psi, evolution.z, evolution.before, points, window, float(length)
        )
        after = _center_report(family, c, psi, evolution.z, residual, points, window, float(length))
        normalized = after.epsilon * float(length) ** exponent / delta if delta > 0 else 0.0
        logger.info(
            "L = %g: epsilon %.3e -> %.3e (normalized %.3e)",
            length,
            before.epsilon,
            after.epsilon,
            normalized,
        )
        rows.append(ImprovementRow(float(length), before, after, normalized, amount))
    return ImprovementResult(n, delta, tuple(rows))
