"""Curvature operators, isotropic-curvature predicates, 4D blocks and cones."""

from neck_lab.curvature.blocks import (
    ConeSpec,
    FourDBlocks,
    block_decompose_4d,
    cone_margin,
    hamilton_ode_step,
    integrate_hamilton,
)
from neck_lab.curvature.isotropic import is_uniformly_pic, min_isotropic
from neck_lab.curvature.operator import (
    CurvatureOperator,
    FourFrame,
    cylinder_operator,
    isotropic_value,
    rotationally_symmetric_operator,
    sphere_operator,
    two_form_value,
)
from neck_lab.curvature.pinch import PinchNorm, pinch_norm, weighted_pinch_norm

__all__ = [
    "ConeSpec",
    "CurvatureOperator",
    "FourDBlocks",
    "FourFrame",
    "PinchNorm",
    "block_decompose_4d",
    "cone_margin",
    "cylinder_operator",
    "hamilton_ode_step",
    "integrate_hamilton",
    "is_uniformly_pic",
    "isotropic_value",
    "min_isotropic",
    "pinch_norm",
    "rotationally_symmetric_operator",
    "sphere_operator",
    "two_form_value",
    "weighted_pinch_norm",
]
