"""CMC foliations of near-cylindrical metrics."""

from neck_lab.foliation.foliate import (
    Foliation,
    FoliationLeaf,
    GramEvolution,
    LeafLapse,
    foliate,
    gram_evolution_check,
    leaf_gram,
    leaf_lapse,
)
from neck_lab.foliation.geometry import GraphJet, ShapeOperator, scalar_curvature
from neck_lab.foliation.leaf import (
    GraphCurvature,
    Leaf,
    cmc_solve,
    collocation_linearization,
    linearized_mean_curvature,
    mean_curvature_of_graph,
    quadratic_rate,
)
from neck_lab.foliation.metric import NeckMetric, WarpSample
from neck_lab.foliation.roundness import RoundnessReport, roundness_report

__all__ = [
    "Foliation",
    "FoliationLeaf",
    "GramEvolution",
    "GraphCurvature",
    "GraphJet",
    "Leaf",
    "LeafLapse",
    "NeckMetric",
    "RoundnessReport",
    "ShapeOperator",
    "WarpSample",
    "cmc_solve",
    "collocation_linearization",
    "foliate",
    "gram_evolution_check",
    "leaf_gram",
    "leaf_lapse",
    "linearized_mean_curvature",
    "mean_curvature_of_graph",
    "quadratic_rate",
    "roundness_report",
    "scalar_curvature",
]
