"""Neck samples, symmetry deficits and the improvement harness."""

from neck_lab.symmetry.deficits import (
    DeficitSensitivity,
    SymmetryReport,
    axis_spectrum,
    deficit_lipschitz,
    symmetry_deficit,
)
from neck_lab.symmetry.improvement import (
    ImprovementResult,
    ImprovementRow,
    contamination_directions,
    improvement_experiment,
)
from neck_lab.symmetry.neck import (
    NeckRescaling,
    NeckSample,
    epsilon_order,
    neck_distance,
    neck_rescale,
)

__all__ = [
    "DeficitSensitivity",
    "ImprovementResult",
    "ImprovementRow",
    "NeckRescaling",
    "NeckSample",
    "SymmetryReport",
    "axis_spectrum",
    "contamination_directions",
    "deficit_lipschitz",
    "epsilon_order",
    "improvement_experiment",
    "neck_distance",
    "neck_rescale",
    "symmetry_deficit",
]
