"""
Band-local CMC foliations, their lapse and the Gram evolution along them.

Each base height z0 is solved together with its neighbours z0 +- ds. The
vertical velocity dZ/dz0 of the family, divided by Q, is the lapse of
the base-height parametrization; dividing it by its integral over the
leaf gives the lapse v with int v dmu = 1, and the cumulative integral of
that normalizer gives the matching parameter s. The lapse satisfies the
Jacobi equation

    Delta_Sigma v + (|A|^2 + Ric(nu, nu)) v = -dH/ds

and the area obeys d/ds area = int H v dmu.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import pandas as pd
from scipy.integrate import cumulative_trapezoid

from neck_lab.core.exceptions import FoliationBreakdownError, InputValidationError
from neck_lab.core.types import FloatArray, Height
from neck_lab.foliation.geometry import jacobi_operator, mean_curvature, normal_speed
from neck_lab.foliation.leaf import EQUATOR, LEAF_MODES, Leaf, cmc_solve, cosine_jet
from neck_lab.foliation.metric import NeckMetric
from neck_lab.foliation.roundness import RoundnessReport, roundness_report
from neck_lab.sphere.rotations import RotationFamily, canonical_scale

logger = logging.getLogger(__name__)

LAPSE_STEP: float = 1e-3
"""Base-height offset of the neighbour leaves used for differencing."""

CROSSING_SAMPLES: int = 201


# =============================================================================
# LAPSE
# =============================================================================


class LeafLapse(NamedTuple):
    """
    Normalized lapse of a leaf and the identities it satisfies.

    Attributes:
        theta: Quadrature angles.
        values: v at theta, with int v dmu = 1.
        scale: int of the base-height lapse, ds/dz0.
        area: Area of the leaf.
        jacobi_constant: Area mean of the Jacobi operator applied to v.
        jacobi_residual: sup |J v - jacobi_constant|.
        mean_curvature_rate: dH/ds from the neighbour leaves.
        area_rate: d area/ds from the neighbour leaves.
        first_variation: int H v dmu.
    """

    theta: FloatArray
    values: FloatArray
    scale: float
    area: float
    jacobi_constant: float
    jacobi_residual: float
    mean_curvature_rate: float
    area_rate: float
    first_variation: float

    @property
    def deviation(self) -> float:
        """sup |v - 1/area|."""
        return float(np.max(np.abs(self.values - 1.0 / self.area)))

    def stats(self) -> dict[str, float]:
        """Summary used in reports."""
        return {
            "min": float(np.min(self.values)),
            "max": float(np.max(self.values)),
            "deviation": self.deviation,
            "jacobi_residual": self.jacobi_residual,
        }


def leaf_lapse(metric: NeckMetric, leaf: Leaf, lower: Leaf, upper: Leaf) -> LeafLapse:
    """
    Lapse of the family through lower, leaf, upper by central differences.

    Raises:
        FoliationBreakdownError: If the lapse integral is not positive.
    """
    step = 0.5 * (upper.z0 - lower.z0)
    if step <= 0:
        raise InputValidationError("upper leaf must sit above the lower leaf", field="upper")
    rule = leaf.quadrature(metric)
    jet = rule.jet
    velocity = cosine_jet((upper.coefficients - lower.coefficients) / (2.0 * step), jet.theta)
    v, dv, ddv = normal_speed(metric, jet, velocity.u, velocity.du, velocity.ddu)
    scale = rule.integrate(v)
    if not scale > 0:
        raise FoliationBreakdownError(
            f"lapse integral {scale:.3e} is not positive at z0={leaf.z0:.6g}",
            heights=(lower.z0, upper.z0),
        )
    v, dv, ddv = v / scale, dv / scale, ddv / scale
    area = float(np.sum(rule.weights))
    jacobi = jacobi_operator(metric, jet, v, dv, ddv)
    constant = rule.integrate(jacobi) / area
    rate = (upper.mean_curvature - lower.mean_curvature) / (2.0 * step * scale)
    area_rate = (upper.area(metric) - lower.area(metric)) / (2.0 * step * scale)
    first_variation = rule.integrate(mean_curvature(metric, jet) * v)
    return LeafLapse(
        theta=jet.theta,
        values=v,
        scale=scale,
        area=area,
        jacobi_constant=constant,
        jacobi_residual=float(np.max(np.abs(jacobi - constant))),
        mean_curvature_rate=rate,
        area_rate=area_rate,
        first_variation=first_variation,
    )


# =============================================================================
# FOLIATION
# =============================================================================


@dataclass(frozen=True, eq=False)
class FoliationLeaf:
    """A leaf with its neighbours, lapse, roundness and parameter s."""

    leaf: Leaf
    lower: Leaf
    upper: Leaf
    lapse: LeafLapse
    roundness: RoundnessReport
    parameter: float

    def to_dict(self) -> dict[str, object]:
        """Entry of the foliation report."""
        return {
            "z0": self.leaf.z0,
            "s": self.parameter,
            "H": self.leaf.mean_curvature,
            "area": self.lapse.area,
            "lapse_stats": self.lapse.stats(),
            "roundness": self.roundness.to_dict(),
        }


@dataclass(frozen=True, eq=False)
class Foliation:
    """
    Leaves ordered by base height.

    Attributes:
        n: Dimension.
        leaves: FoliationLeaf per height, increasing.
        metric_hash: Digest of the metric the leaves were solved in.
        step: Neighbour offset used for the lapse.
    """

    n: int
    leaves: tuple[FoliationLeaf, ...]
    metric_hash: str
    step: float

    @property
    def heights(self) -> FloatArray:
        """Base heights z0."""
        return np.array([item.leaf.z0 for item in self.leaves])

    @property
    def parameters(self) -> FloatArray:
        """Lapse-normalized parameter s, zero at the first leaf."""
        return np.array([item.parameter for item in self.leaves])

    def to_dict(self) -> dict[str, object]:
        """{leaves: [...], metric_hash}."""
        return {
            "leaves": [item.to_dict() for item in self.leaves],
            "metric_hash": self.metric_hash,
        }

    def to_frame(self) -> pd.DataFrame:
        """One row per leaf."""
        rows = [
            {
                "z0": item.leaf.z0,
                "s": item.parameter,
                "H": item.leaf.mean_curvature,
                "area": item.lapse.area,
                "lapse_deviation": item.lapse.deviation,
                "jacobi_residual": item.lapse.jacobi_residual,
                "umbilic": item.roundness.umbilic,
                "einstein": item.roundness.einstein,
            }
            for item in self.leaves
        ]
        return pd.DataFrame(rows)


class _HeightSolution(NamedTuple):
    leaf: Leaf
    lower: Leaf
    upper: Leaf


def _solve_height(
    metric: NeckMetric, z0: Height, step: float, modes: int, theta0: float
) -> _HeightSolution:
    def solve(height: float) -> Leaf:
        return cmc_solve(metric, height, theta0=theta0, modes=modes, check=False)

    return _HeightSolution(solve(z0), solve(z0 - step), solve(z0 + step))


def _check_order(solutions: Sequence[_HeightSolution]) -> None:
    theta = np.linspace(0.0, math.pi, CROSSING_SAMPLES)
    for below, above in zip(solutions, solutions[1:]):
        gap = above.leaf.heights(theta) - below.leaf.heights(theta)
        if np.min(gap) <= 0:
            raise FoliationBreakdownError(
                f"leaves at z0={below.leaf.z0:.6g} and z0={above.leaf.z0:.6g} intersect",
                heights=(below.leaf.z0, above.leaf.z0),
            )


def foliate(
    metric: NeckMetric,
    heights: Sequence[float] | FloatArray,
    step: float = LAPSE_STEP,
    jobs: int = 1,
    modes: int = LEAF_MODES,
    theta0: float = EQUATOR,
) -> Foliation:
    """
    Solve CMC leaves through the given base heights and measure their lapse.

    Args:
        metric: Admissible metric.
        heights: Base heights; sorted and deduplicated.
        step: Neighbour offset for the lapse differences.
        jobs: Worker processes; 1 solves in-process.
        modes: Cosine modes per leaf.
        theta0: Polar angle of every basepoint.

    Returns:
        Foliation ordered by height.

    Raises:
        AdmissibilityError: If the metric fails the gate.
        NewtonDivergenceError: If a leaf cannot be solved.
        FoliationBreakdownError: If consecutive leaves intersect.
    """
    metric.check_admissible()
    z = np.unique(np.asarray(heights, dtype=float))
    if z.size == 0:
        raise InputValidationError("at least one base height is required", field="heights")
    if step <= 0:
        raise ValueError(f"step must be positive: {step}")
    if jobs < 1:
        raise ValueError(f"jobs must be at least 1: {jobs}")

    if jobs == 1 or z.size == 1:
        solutions = [_solve_height(metric, float(h), step, modes, theta0) for h in z]
    else:
        found: dict[float, _HeightSolution] = {}
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {
                pool.submit(_solve_height, metric, float(h), step, modes, theta0): float(h)
                for h in z
            }
            for future in as_completed(futures):
                found[futures[future]] = future.result()
        solutions = [found[float(h)] for h in z]

    _check_order(solutions)
    lapses = [leaf_lapse(metric, s.leaf, s.lower, s.upper) for s in solutions]
    if z.size > 1:
        parameters = cumulative_trapezoid([lapse.scale for lapse in lapses], z, initial=0.0)
    else:
        parameters = np.zeros(1)
    leaves = tuple(
        FoliationLeaf(
            leaf=s.leaf,
            lower=s.lower,
            upper=s.upper,
            lapse=lapse,
            roundness=roundness_report(s.leaf, metric),
            parameter=float(p),
        )
        for s, lapse, p in zip(solutions, lapses, parameters)
    )
    worst = max(item.lapse.jacobi_residual for item in leaves)
    logger.info("Foliated %d leaves, worst Jacobi residual %.3e", len(leaves), worst)
    return Foliation(metric.n, leaves, metric.metric_hash(), step)


# =============================================================================
# GRAM EVOLUTION
# =============================================================================


def leaf_gram(
    metric: NeckMetric, leaf: Leaf, family: RotationFamily, scale: float | None = None
) -> FloatArray:
    """
    area^{-(n+1)/(n-1)} int_Sigma <U^a, U^b> for U^a = scale M^a x.

    The fiber integral is exact: averaging x^T S x over the S^{n-2} at
    polar angle theta gives cos^2 e^T S e + sin^2 (tr S - e^T S e)/(n - 1).
    """
    n = metric.n
    if family.n != n:
        raise InputValidationError(
            f"family dimension {family.n} differs from metric dimension {n}", field="family"
        )
    c = canonical_scale(n) if scale is None else scale
    rule = leaf.quadrature(metric)
    theta = rule.jet.theta
    warp = metric.warp(rule.jet.u, theta)
    products = np.einsum("aki,bkj->abij", family.matrices, family.matrices)
    along = np.einsum("i,abij,j->ab", metric.axis, products, metric.axis)
    trace = np.trace(products, axis1=2, axis2=3)
    cos2 = np.cos(theta) ** 2
    sin2 = np.sin(theta) ** 2
    radial = np.sum(rule.weights * warp * cos2)
    transverse = np.sum(rule.weights * warp * sin2) / (n - 1)
    integral = c**2 * (radial * along + transverse * (trace - along))
    area = float(np.sum(rule.weights))
    return np.asarray(area ** (-(n + 1) / (n - 1)) * integral)


class GramEvolution(NamedTuple):
    """
    Derivative of the normalized Gram matrix along a foliation.

    Attributes:
        derivative: sup over leaves and entries of |d/ds Gram|.
        area_defect: sup |d/ds area - int H v dmu|.
        per_leaf: sup |d/ds Gram| for each leaf.
    """

    derivative: float
    area_defect: float
    per_leaf: FloatArray


def gram_evolution_check(
    foliation: Foliation,
    metric: NeckMetric,
    family: RotationFamily,
    scale: float | None = None,
) -> GramEvolution:
    """
    Differentiate the normalized Gram matrix in s across each leaf's neighbours.

    Raises:
        InputValidationError: If the foliation was solved in another metric.
    """
    if foliation.metric_hash != metric.metric_hash():
        raise InputValidationError("foliation belongs to a different metric", field="metric")
    rates = []
    defect = 0.0
    for item in foliation.leaves:
        lower = leaf_gram(metric, item.lower, family, scale)
        upper = leaf_gram(metric, item.upper, family, scale)
        step = 0.5 * (item.upper.z0 - item.lower.z0)
        rate = (upper - lower) / (2.0 * step * item.lapse.scale)
        rates.append(float(np.max(np.abs(rate))))
        defect = max(defect, abs(item.lapse.area_rate - item.lapse.first_variation))
    per_leaf = np.array(rates)
    return GramEvolution(float(np.max(per_leaf)), defect, per_leaf)
