"""
How far a leaf is from a round sphere in an Einstein ambient slice.

Both diagnostics are sup norms over the leaf of tensors restricted to
T Sigma, in the orthonormal frame of the unit meridian T = (u', 1)/sqrt(a)
and the n - 2 fiber directions:

    umbilic  = sup |A - H g / (n-1)|
    einstein = inf_rho sup |Ric - rho g|,  rho fitted by least squares
"""

from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np

from neck_lab.foliation.geometry import (
    fiber_ricci,
    horizontal_ricci,
    induced_metric,
    shape_operator,
)
from neck_lab.foliation.leaf import Leaf
from neck_lab.foliation.metric import NeckMetric

logger = logging.getLogger(__name__)


class RoundnessReport(NamedTuple):
    """Umbilicity and Einstein deficits of a leaf, with the fitted rho and the area."""

    umbilic: float
    einstein: float
    rho: float
    area: float

    def to_dict(self) -> dict[str, float]:
        """JSON-ready form."""
        return {
            "umbilic": self.umbilic,
            "einstein": self.einstein,
            "rho": self.rho,
            "area": self.area,
        }


def roundness_report(leaf: Leaf, metric: NeckMetric) -> RoundnessReport:
    """
    Sup deficits of A and Ric on T Sigma from their round values.

    Example:
        >>> from neck_lab.foliation.leaf import cmc_solve
        >>> metric = NeckMetric.cylinder(4)
        >>> report = roundness_report(cmc_solve(metric, 0.0), metric)
        >>> report.umbilic < 1e-12 and report.einstein < 1e-12
        True
    """
    n, m = metric.n, metric.n - 2
    rule = leaf.quadrature(metric)
    jet = rule.jet
    shape = shape_operator(metric, jet)
    mean = shape.mean / (n - 1)
    umbilic = np.sqrt((shape.meridian - mean) ** 2 + m * (shape.fiber - mean) ** 2)

    induced = induced_metric(metric, jet)
    length = np.sqrt(induced.a)
    tangent = horizontal_ricci(metric, jet.u, jet.theta, jet.du / length, 1.0 / length)
    fiber = fiber_ricci(metric, jet.u, jet.theta)
    weights = rule.weights
    rho = float(np.sum(weights * (tangent + m * fiber)) / ((n - 1) * np.sum(weights)))
    einstein = np.sqrt((tangent - rho) ** 2 + m * (fiber - rho) ** 2)
    return RoundnessReport(
        umbilic=float(np.max(umbilic)),
        einstein=float(np.max(einstein)),
        rho=rho,
        area=float(np.sum(weights)),
    )
