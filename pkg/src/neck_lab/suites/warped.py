"""Shrinking cylinder identities and the warped-product flow."""

from __future__ import annotations

import numpy as np

from neck_lab.core.types import Suite, reference_time
from neck_lab.curvature.operator import cylinder_operator
from neck_lab.flows.cylinder import CylinderBackground, cylinder_radius
from neck_lab.flows.warped import WarpedProfile, evolve, warped_curvatures, warped_operator
from neck_lab.inputs.schemas import SuiteConfig
from neck_lab.reporting.report import Case, Relation, judge
from neck_lab.suites.base import CaseSpec

CYLINDER_ANCHOR = "scalar curvature and radius of the shrinking cylinder"
CURVATURE_ANCHOR = "sectional curvatures of a warped product"
FLOW_ANCHOR = "Ricci flow of a warped product"

SAMPLE_TIMES = (-2.0, -1.0, -0.5, -0.1)
FLOW_START = -1.0
FLOW_DURATION = 0.2


def _relative(measured: float, exact: float) -> float:
    return abs(measured - exact) / max(1.0, abs(exact))


def check_cylinder_identities(config: SuiteConfig) -> list[Case]:
    """R = (n-1)/(-2t), R(t_n) = (n-1)(n-2) and radius(t_n) = 1 for every configured n."""
    tol = config.effective_tolerances()
    cases = []
    for n in config.grid.warped_dimensions:
        # R from the warp factor of a constant profile against the closed form
        z = np.linspace(-1.0, 1.0, 9)
        worst = 0.0
        for t in SAMPLE_TIMES:
            profile = WarpedProfile.from_function(n, z, np.full_like(z, cylinder_radius(n, t)))
            measured = float(np.max(warped_curvatures(profile).scalar))
            worst = max(worst, _relative(measured, (n - 1) / (-2.0 * t)))
        background = CylinderBackground(n, reference_time(n))
        cases += [
            judge(
                f"warped.scalar_n{n}",
                worst,
                0.0,
                tol.cylinder,
                CYLINDER_ANCHOR,
                Relation.AT_MOST,
            ),
            judge(
                f"warped.reference_scalar_n{n}",
                background.scalar_curvature,
                float((n - 1) * (n - 2)),
                tol.cylinder,
                CYLINDER_ANCHOR,
            ),
            judge(
                f"warped.reference_radius_n{n}",
                background.radius,
                1.0,
                tol.cylinder,
                CYLINDER_ANCHOR,
            ),
        ]
    return cases


def check_cylinder_operator(config: SuiteConfig) -> list[Case]:
    """The warped operator with K_rad = 0, K_sph = 1 is the unit cylinder operator."""
    tol = config.effective_tolerances()
    cases = []
    for n in config.grid.warped_dimensions:
        z = np.linspace(-1.0, 1.0, 9)
        curv = warped_curvatures(WarpedProfile.from_function(n, z, np.ones_like(z)))
        op = warped_operator(n, float(curv.k_rad[0]), float(curv.k_sph[0]))
        defect = float(np.max(np.abs(op.components - cylinder_operator(n).components)))
        cases.append(
            judge(
                f"warped.cylinder_operator_n{n}",
                defect,
                0.0,
                tol.cylinder,
                CURVATURE_ANCHOR,
                Relation.AT_MOST,
            )
        )
    return cases


def check_shrinking_law(config: SuiteConfig) -> list[Case]:
    """A constant profile started at t = -1 follows the exact radius after the flow runs 0.2."""
    tol = config.effective_tolerances()
    n = config.n
    z = np.linspace(-5.0, 5.0, 101)
    start = WarpedProfile.from_function(n, z, np.full_like(z, cylinder_radius(n, FLOW_START)))
    final = evolve(start, FLOW_DURATION)
    middle = z.size // 2
    return [
        judge(
            f"warped.shrinking_law_n{n}",
            float(final.phi[middle]),
            cylinder_radius(n, FLOW_START + FLOW_DURATION),
            tol.shrinking,
            FLOW_ANCHOR,
        )
    ]


CASES: tuple[CaseSpec, ...] = (
    CaseSpec("warped.cylinder_identities", CYLINDER_ANCHOR, check_cylinder_identities),
    CaseSpec("warped.cylinder_operator", CURVATURE_ANCHOR, check_cylinder_operator),
    CaseSpec("warped.shrinking_law", FLOW_ANCHOR, check_shrinking_law),
)

SUITE = Suite.WARPED
