"""
Constant mean curvature leaves near the slices of a NeckMetric.

A leaf is the axisymmetric graph z = Z(theta) = sum_k c_k cos(k theta),
k = 0..K. cmc_solve finds (c, H) with H(Z) = H at the K + 1 collocation
angles theta_j = pi (j + 1/2) / (K + 1) and Z(theta_0) = z_0 at the
basepoint, by Newton's method on the augmented (c, H) system. The
linearization is collocation_linearization, built from central differences
of H in (u, u', u''); on a slice it equals minus the Jacobi operator
Delta + |A|^2 + Ric(nu, nu). The unknown H absorbs the level-0 part, so
the solve inverts the Jacobi operator on the mean-zero complement, and
the sup of H(Z) minus its sphere-weighted mean at the nodes is kept as
the projection residual of the leaf. Integrals over a leaf use
Gauss-Legendre nodes in theta and the exact S^{n-2} factor.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from neck_lab.core.exceptions import (
    EmbeddingError,
    InputValidationError,
    NewtonDivergenceError,
)
from neck_lab.core.types import NEWTON_TOLERANCE, FloatArray, Height
from neck_lab.foliation.geometry import GraphJet, area_density, jacobi_operator, mean_curvature
from neck_lab.foliation.metric import NeckMetric
from neck_lab.sphere.polynomials import sphere_volume

logger = logging.getLogger(__name__)

LEAF_MODES: int = 16
"""Highest cosine mode K of a leaf."""

LEAF_QUADRATURE: int = 96
"""Gauss-Legendre nodes in theta for integrals over a leaf."""

MAX_NEWTON_ITERATIONS: int = 20
PARTIAL_STEP: float = 1e-6
DIVERGENCE_RESIDUAL: float = 1e3
EMBEDDING_LIMIT: float = 1.0
BAND_MARGIN: float = 2.0
EQUATOR: float = math.pi / 2.0

QUADRATIC_REGIME: float = 1e-2
"""Residuals below this enter the quadratic convergence check."""

QUADRATIC_RATE_LIMIT: float = 1e3
"""Largest r_{k+1} / r_k^2 accepted as quadratic convergence."""

RESIDUAL_FLOOR: float = 1e-12


# =============================================================================
# COSINE SERIES
# =============================================================================


def collocation_nodes(modes: int) -> FloatArray:
    """theta_j = pi (j + 1/2) / (K + 1), j = 0..K."""
    return np.asarray(math.pi * (np.arange(modes + 1) + 0.5) / (modes + 1))


def cosine_basis(theta: FloatArray, modes: int, order: int = 0) -> FloatArray:
    """Matrix of d^order/dtheta^order cos(k theta), shape (len(theta), K + 1)."""
    k = np.arange(modes + 1, dtype=float)
    phase = np.outer(theta, k) + order * math.pi / 2.0
    return np.asarray(k**order * np.cos(phase))


def cosine_jet(coefficients: FloatArray, theta: FloatArray) -> GraphJet:
    """Z and its first three derivatives at theta."""
    theta = np.asarray(theta, dtype=float)
    modes = coefficients.size - 1
    u, du, ddu, dddu = (cosine_basis(theta, modes, order) @ coefficients for order in range(4))
    return GraphJet(theta, u, du, ddu, dddu)


def _padded(values: Sequence[float] | FloatArray, modes: int, name: str) -> FloatArray:
    array = np.asarray(values, dtype=float).ravel()
    if array.size > modes + 1:
        raise InputValidationError(
            f"{name} has {array.size} coefficients; at most {modes + 1} allowed", field=name
        )
    out = np.zeros(modes + 1)
    out[: array.size] = array
    return out


class LeafQuadrature(NamedTuple):
    """Nodes and weights with sum(weights * phi) = int_Sigma phi dmu for axisymmetric phi."""

    jet: GraphJet
    weights: FloatArray

    def integrate(self, values: FloatArray) -> float:
        """Integral of an axisymmetric function sampled at the nodes."""
        return float(np.sum(self.weights * values))


def leaf_quadrature(
    metric: NeckMetric, coefficients: FloatArray, nodes: int = LEAF_QUADRATURE
) -> LeafQuadrature:
    """Gauss-Legendre rule on (0, pi) times vol(S^{n-2}) and the area density."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    theta = 0.5 * math.pi * (x + 1.0)
    jet = cosine_jet(coefficients, theta)
    density = area_density(metric, jet)
    weights = 0.5 * math.pi * w * sphere_volume(metric.n - 1) * density
    return LeafQuadrature(jet, np.asarray(weights))


# =============================================================================
# LEAF
# =============================================================================


@dataclass(frozen=True, eq=False)
class Leaf:
    """
    A solved CMC leaf z = Z(theta).

    Attributes:
        n: Dimension of the ambient manifold.
        z0: Height of the leaf at the basepoint.
        theta0: Polar angle of the basepoint.
        coefficients: Cosine coefficients of Z.
        mean_curvature: The constant H.
        history: Newton residuals max|R| per iteration.
        projection_residual: sup |H(Z) - mean H| at the collocation nodes of
            the final iterate, the residual of the mean-zero equation.
    """

    n: int
    z0: Height
    theta0: float
    coefficients: FloatArray
    mean_curvature: float
    history: tuple[float, ...] = field(default=())
    projection_residual: float = math.nan

    @property
    def modes(self) -> int:
        """K."""
        return int(self.coefficients.size - 1)

    @property
    def residual(self) -> float:
        """Final Newton residual."""
        return self.history[-1] if self.history else math.nan

    @property
    def iterations(self) -> int:
        """Newton steps taken."""
        return max(len(self.history) - 1, 0)

    @property
    def graph(self) -> FloatArray:
        """Cosine coefficients of f = Z - z0."""
        out = self.coefficients.copy()
        out[0] -= self.z0
        return out

    def heights(self, theta: FloatArray) -> FloatArray:
        """Z(theta)."""
        basis = cosine_basis(np.asarray(theta, dtype=float), self.modes)
        return np.asarray(basis @ self.coefficients)

    def jet(self, theta: FloatArray) -> GraphJet:
        """Z and derivatives at theta."""
        return cosine_jet(self.coefficients, theta)

    def graph_norm(self, samples: int = 257) -> float:
        """sup |f| on a uniform theta grid."""
        theta = np.linspace(0.0, math.pi, samples)
        return float(np.max(np.abs(self.heights(theta) - self.z0)))

    def levels(self) -> tuple[float, float]:
        """
        Level-0 and level-1 parts of f in the sphere L^2 sense.

        Returns the mean of f and the coefficient of <x, e> = cos(theta).
        """
        x, w = np.polynomial.legendre.leggauss(LEAF_QUADRATURE)
        theta = 0.5 * math.pi * (x + 1.0)
        weight = w * np.sin(theta) ** (self.n - 2)
        f = self.heights(theta) - self.z0
        c = np.cos(theta)
        mean = float(np.sum(weight * f) / np.sum(weight))
        tilt = float(np.sum(weight * f * c) / np.sum(weight * c**2))
        return mean, tilt

    def quadrature(self, metric: NeckMetric, nodes: int = LEAF_QUADRATURE) -> LeafQuadrature:
        """Integration rule on this leaf."""
        return leaf_quadrature(metric, self.coefficients, nodes)

    def area(self, metric: NeckMetric) -> float:
        """Area of the leaf."""
        rule = self.quadrature(metric)
        return float(np.sum(rule.weights))

    def mean_curvature_spread(self, metric: NeckMetric, samples: int = 201) -> float:
        """sup |H(theta) - H| on interior angles off the collocation grid."""
        theta = np.linspace(0.0, math.pi, samples + 2)[1:-1]
        values = mean_curvature(metric, self.jet(theta))
        return float(np.max(np.abs(values - self.mean_curvature)))

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary."""
        return {
            "z0": self.z0,
            "H": self.mean_curvature,
            "coefficients": [float(c) for c in self.coefficients],
            "residual": self.residual,
            "iterations": self.iterations,
            "projection_residual": self.projection_residual,
        }


# =============================================================================
# MEAN CURVATURE OF A GRAPH
# =============================================================================


class GraphCurvature(NamedTuple):
    """
    Mean curvature of a graph over a slice.

    Attributes:
        theta: Sample angles.
        values: H at theta.
        levels: Coefficients on 1, cos(theta) and cos^2(theta) - 1/n.
        residual: sup of H minus its projection to levels <= 2.
    """

    theta: FloatArray
    values: FloatArray
    levels: FloatArray
    residual: float


def _check_graph(metric: NeckMetric, z0: Height, graph: FloatArray) -> None:
    theta = np.linspace(0.0, math.pi, 257)
    norm = float(np.max(np.abs(cosine_basis(theta, graph.size - 1) @ graph)))
    if norm > EMBEDDING_LIMIT:
        raise EmbeddingError(
            f"graph norm {norm:.4g} exceeds the embedding limit {EMBEDDING_LIMIT}",
            graph_norm=norm,
        )
    if abs(z0) + norm > metric.half_length:
        raise EmbeddingError(
            f"graph over z0={z0:.6g} leaves the domain [-{metric.half_length:g}, "
            f"{metric.half_length:g}]",
            graph_norm=norm,
        )


def mean_curvature_of_graph(
    metric: NeckMetric,
    z0: Height,
    graph: Sequence[float] | FloatArray,
    nodes: int = LEAF_QUADRATURE,
) -> GraphCurvature:
    """
    Mean curvature of the graph z = z0 + f(theta) with f = sum_k graph[k] cos(k theta).

    The values are projected onto the zonal harmonics 1, cos(theta) and
    cos^2(theta) - 1/n in L^2(S^{n-1}) and the sup of the remainder is
    reported.

    Raises:
        EmbeddingError: If sup |f| > 1 or the graph leaves the domain.

    Example:
        >>> result = mean_curvature_of_graph(NeckMetric.cylinder(4), 0.0, [0.0])
        >>> float(np.abs(result.values).max())
        0.0
    """
    f = np.asarray(graph, dtype=float).ravel()
    if f.size == 0:
        raise InputValidationError("graph needs at least one coefficient", field="graph")
    _check_graph(metric, z0, f)
    coefficients = f.copy()
    coefficients[0] += z0
    x, w = np.polynomial.legendre.leggauss(nodes)
    theta = 0.5 * math.pi * (x + 1.0)
    values = mean_curvature(metric, cosine_jet(coefficients, theta))
    c = np.cos(theta)
    design = np.column_stack([np.ones_like(c), c, c**2 - 1.0 / metric.n])
    root = np.sqrt(w * np.sin(theta) ** (metric.n - 2))
    levels, *_ = np.linalg.lstsq(design * root[:, None], values * root, rcond=None)
    residual = float(np.max(np.abs(values - design @ levels)))
    return GraphCurvature(theta, values, np.asarray(levels), residual)


def linearized_mean_curvature(
    metric: NeckMetric, z0: Height, graph: Sequence[float] | FloatArray, theta: FloatArray
) -> FloatArray:
    """
    -J f on a slice z = z0 of a metric without tilt.

    For a vertical variation f of a slice the normal speed is f itself, so
    the derivative of H is minus the Jacobi operator applied to f.
    """
    f = np.asarray(graph, dtype=float).ravel()
    theta = np.asarray(theta, dtype=float)
    slice_jet = GraphJet(theta, np.full_like(theta, z0), *(np.zeros_like(theta),) * 3)
    variation = cosine_jet(f, theta)
    return np.asarray(
        -jacobi_operator(metric, slice_jet, variation.u, variation.du, variation.ddu)
    )


# =============================================================================
# NEWTON SOLVER
# =============================================================================


def quadratic_rate(
    history: Sequence[float],
    threshold: float = QUADRATIC_REGIME,
    floor: float = RESIDUAL_FLOOR,
) -> float:
    """
    max r_{k+1} / r_k^2 over steps with r_k < threshold and r_{k+1} > floor.

    Returns 0.0 when no step qualifies.

    Example:
        >>> round(quadratic_rate([1e-1, 1e-3, 1e-6, 1e-12]), 6)
        1.0
    """
    rates = [
        later / earlier**2
        for earlier, later in zip(history, history[1:])
        if 0 < earlier < threshold and later > floor
    ]
    return max(rates, default=0.0)


def _pointwise_partials(
    metric: NeckMetric, jet: GraphJet, step: float
) -> tuple[FloatArray, FloatArray, FloatArray]:
    def shifted(du: float = 0.0, dp: float = 0.0, dq: float = 0.0) -> FloatArray:
        moved = GraphJet(jet.theta, jet.u + du, jet.du + dp, jet.ddu + dq, jet.dddu)
        return mean_curvature(metric, moved)

    h_u = (shifted(du=step) - shifted(du=-step)) / (2.0 * step)
    h_p = (shifted(dp=step) - shifted(dp=-step)) / (2.0 * step)
    h_q = (shifted(dq=step) - shifted(dq=-step)) / (2.0 * step)
    return h_u, h_p, h_q


def collocation_linearization(
    metric: NeckMetric, coefficients: FloatArray, theta: FloatArray
) -> FloatArray:
    """
    Derivative of H(Z) at theta in the cosine coefficients of Z.

    Column k is H_u cos(k theta) + H_u' (cos k theta)' + H_u'' (cos k theta)'',
    with the partials taken by central differences of step PARTIAL_STEP.
    """
    theta = np.asarray(theta, dtype=float)
    modes = int(np.asarray(coefficients).size - 1)
    basis = [cosine_basis(theta, modes, order) for order in range(3)]
    h_u, h_p, h_q = _pointwise_partials(metric, cosine_jet(coefficients, theta), PARTIAL_STEP)
    return np.asarray(
        h_u[:, None] * basis[0] + h_p[:, None] * basis[1] + h_q[:, None] * basis[2]
    )


def _projection_residual(values: FloatArray, theta: FloatArray, n: int) -> float:
    """sup |H - mean H| with the mean weighted by sin^{n-2} theta."""
    weight = np.sin(theta) ** (n - 2)
    return float(np.max(np.abs(values - np.sum(weight * values) / np.sum(weight))))


def cmc_solve(
    metric: NeckMetric,
    z0: Height,
    theta0: float = EQUATOR,
    initial: Sequence[float] | FloatArray | None = None,
    modes: int = LEAF_MODES,
    tolerance: float = NEWTON_TOLERANCE,
    max_iterations: int = MAX_NEWTON_ITERATIONS,
    check: bool = True,
) -> Leaf:
    """
    Solve for the CMC leaf through the basepoint (z0, theta0).

    Args:
        metric: Ambient metric.
        z0: Height of the basepoint, within BAND_MARGIN of the domain ends.
        theta0: Polar angle of the basepoint.
        initial: Cosine coefficients of the starting graph f (default 0).
        modes: Highest cosine mode K.
        tolerance: Target for max |residual|.
        max_iterations: Newton step limit.
        check: Apply the admissibility gate first.

    Returns:
        Leaf with its residual history.

    Raises:
        AdmissibilityError: If check is set and epsilon_hat > epsilon_0.
        InputValidationError: If z0 is outside the interior band.
        NewtonDivergenceError: If the residual does not reach tolerance.
    """
    if check:
        metric.check_admissible()
    band = metric.half_length - BAND_MARGIN
    if not -band <= z0 <= band:
        raise InputValidationError(
            f"z0 must lie in [-{band:g}, {band:g}]: {z0}", field="z0", value=z0
        )
    if not 0.0 < theta0 < math.pi:
        raise InputValidationError(f"theta0 must lie in (0, pi): {theta0}", field="theta0")
    if modes < 1:
        raise ValueError(f"modes must be positive: {modes}")

    nodes = collocation_nodes(modes)
    basis = [cosine_basis(nodes, modes, order) for order in range(4)]
    anchor = cosine_basis(np.array([theta0]), modes)[0]
    c = _padded(np.zeros(1) if initial is None else initial, modes, "initial")
    c[0] += z0
    start = GraphJet(nodes, *(b @ c for b in basis))
    h = float(np.mean(mean_curvature(metric, start)))

    history: list[float] = []
    for iteration in range(max_iterations + 1):
        jet = GraphJet(nodes, *(b @ c for b in basis))
        offset = float(np.max(np.abs(jet.u - z0)))
        if offset > EMBEDDING_LIMIT:
            raise NewtonDivergenceError(
                f"iterate left the embedding range (sup|f| = {offset:.4g}) at z0={z0:.6g}",
                last_residual=history[-1] if history else None,
                iterations=iteration,
            )
        values = mean_curvature(metric, jet)
        residual_vector = np.append(values - h, anchor @ c - z0)
        residual = float(np.max(np.abs(residual_vector)))
        history.append(residual)
        logger.debug("Newton z0=%.6g iteration %d residual %.3e", z0, iteration, residual)
        if residual <= tolerance:
            break
        if iteration == max_iterations or not math.isfinite(residual):
            raise NewtonDivergenceError(
                f"Newton did not converge at z0={z0:.6g} "
                f"(residual {residual:.3e} after {iteration} iterations)",
                last_residual=residual,
                iterations=iteration,
            )
        if residual > DIVERGENCE_RESIDUAL:
            raise NewtonDivergenceError(
                f"Newton diverged at z0={z0:.6g} (residual {residual:.3e})",
                last_residual=residual,
                iterations=iteration,
            )
        jacobian = np.zeros((modes + 2, modes + 2))
        jacobian[:-1, :-1] = collocation_linearization(metric, c, nodes)
        jacobian[:-1, -1] = -1.0
        jacobian[-1, :-1] = anchor
        try:
            update = np.linalg.solve(jacobian, -residual_vector)
        except np.linalg.LinAlgError as exc:
            raise NewtonDivergenceError(
                f"singular linearization at z0={z0:.6g}",
                last_residual=residual,
                iterations=iteration,
            ) from exc
        c = c + update[:-1]
        h += float(update[-1])

    rate = quadratic_rate(history)
    if rate > QUADRATIC_RATE_LIMIT:
        logger.warning("Newton at z0=%.6g converged only linearly (rate %.3g)", z0, rate)
    projection = _projection_residual(values, nodes, metric.n)
    logger.debug("Newton z0=%.6g projection residual %.3e", z0, projection)
    return Leaf(metric.n, float(z0), float(theta0), c, h, tuple(history), projection)
