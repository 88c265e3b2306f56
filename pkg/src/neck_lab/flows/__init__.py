"""Rotationally symmetric Ricci flow profiles: cylinder, warped flow, Bryant soliton."""

from neck_lab.flows.bryant import BryantSoliton, bryant_profile, shoot_bryant
from neck_lab.flows.cylinder import CylinderBackground, cylinder_radius, cylinder_scalar_curvature
from neck_lab.flows.warped import (
    WarpedProfile,
    ricci_flow_step,
    soliton_residual,
    warped_curvatures,
    warped_operator,
)

__all__ = [
    "BryantSoliton",
    "CylinderBackground",
    "WarpedProfile",
    "bryant_profile",
    "cylinder_radius",
    "cylinder_scalar_curvature",
    "ricci_flow_step",
    "shoot_bryant",
    "soliton_residual",
    "warped_curvatures",
    "warped_operator",
]
