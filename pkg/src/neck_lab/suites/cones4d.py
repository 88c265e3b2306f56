"""Reaction ODE of the four-dimensional curvature operator: trace identity and invariant cones."""

from __future__ import annotations

import math

import numpy as np

from neck_lab.core.exceptions import InputValidationError
from neck_lab.core.types import ConeKind, Suite
from neck_lab.curvature.blocks import (
    ConeSpec,
    FourDBlocks,
    cone_margin,
    eigenvalue_rate_checks,
    integrate_hamilton,
    normalized_cone_margin,
    trace_rate_identity,
)
from neck_lab.inputs.schemas import SuiteConfig
from neck_lab.reporting.report import Case, Relation, judge
from neck_lab.suites.base import CaseSpec

TRACE_ANCHOR = "trace identity of the reaction ODE"
CONE_ANCHOR = "invariance of the pinching cones under the reaction ODE"
RATE_ANCHOR = "eigenvalue rate inequalities along the reaction ODE"

START_SIZE = 0.05
MAX_DRAWS = 100


def near_identity_blocks(rng: np.random.Generator, size: float = START_SIZE) -> FourDBlocks:
    """A = C = I plus small symmetric perturbations of equal trace, and small B."""
    x = rng.standard_normal((3, 3))
    a = np.eye(3) + size * (x + x.T)
    y = rng.standard_normal((3, 3))
    c = np.eye(3) + size * (y + y.T)
    c += (np.trace(a) - np.trace(c)) / 3.0 * np.eye(3)
    b = size * rng.standard_normal((3, 3))
    return FourDBlocks(A=a, B=b, C=c)


def interior_start(rng: np.random.Generator, cones: list[ConeSpec]) -> FourDBlocks:
    """First near-identity draw strictly inside every cone."""
    for _ in range(MAX_DRAWS):
        start = near_identity_blocks(rng)
        if all(np.all(cone_margin(start, cone) > 0) for cone in cones):
            return start
    raise InputValidationError(f"no interior start found in {MAX_DRAWS} draws", field="cone_phis")


def check_trace_identity(config: SuiteConfig) -> list[Case]:
    """d/dt tr A = (a1+a2+a3)^2 + sum b^2 at every state of every trajectory."""
    tol = config.effective_tolerances()
    rng = np.random.default_rng(config.seed)
    worst = 0.0
    for _ in range(config.grid.trajectories):
        trajectory = integrate_hamilton(near_identity_blocks(rng), config.grid.trajectory_horizon)
        for state in trajectory.states:
            rate, rhs = trace_rate_identity(state)
            worst = max(worst, abs(rate - rhs) / max(1.0, abs(rhs)))
    return [
        judge(
            "cones4d.trace_identity", worst, 0.0, tol.trace_identity, TRACE_ANCHOR, Relation.AT_MOST
        )
    ]


def check_cones(config: SuiteConfig) -> list[Case]:
    """
    Trajectories from strict interior starts stay in C0 and C(s0) until blow-up.

    Each trajectory is integrated once and measured against every Phi; the
    eigenvalue rate inequalities are measured on the same states.
    """
    tol = config.effective_tolerances()
    rng = np.random.default_rng(config.seed)
    cones = [ConeSpec(ConeKind.C_S, phi=phi) for phi in config.grid.cone_phis]
    worst = {cone.phi: math.inf for cone in cones}
    rates = {"a1_lower": math.inf, "c1_lower": math.inf, "b3_log": math.inf}
    blowups = 0
    for _ in range(config.grid.cone_starts):
        trajectory = integrate_hamilton(interior_start(rng, cones))
        blowups += trajectory.blew_up
        for state in trajectory.states:
            for cone in cones:
                margin = float(normalized_cone_margin(state, cone).min())
                worst[cone.phi] = min(worst[cone.phi], margin)
            scale = max(1.0, state.trace)
            checks = eigenvalue_rate_checks(state)
            rates["a1_lower"] = min(rates["a1_lower"], checks["a1_lower"] / scale**2)
            rates["c1_lower"] = min(rates["c1_lower"], checks["c1_lower"] / scale**2)
            if not math.isnan(checks["b3_log"]):
                rates["b3_log"] = min(rates["b3_log"], checks["b3_log"] / scale)
    cases = [
        judge(
            f"cones4d.cone_margin_phi{cone.phi:g}",
            worst[cone.phi],
            0.0,
            tol.cone_margin,
            CONE_ANCHOR,
            Relation.AT_LEAST,
        )
        for cone in cones
    ]
    cases += [
        judge(f"cones4d.{name}", value, 0.0, tol.cone_margin, RATE_ANCHOR, Relation.AT_LEAST)
        for name, value in rates.items()
    ]
    cases.append(
        judge(
            "cones4d.blowup",
            blowups,
            config.grid.cone_starts,
            0.0,
            CONE_ANCHOR,
        )
    )
    return cases


CASES: tuple[CaseSpec, ...] = (
    CaseSpec("cones4d.trace_identity", TRACE_ANCHOR, check_trace_identity),
    CaseSpec("cones4d.cone_invariance", CONE_ANCHOR, check_cones),
)

SUITE = Suite.CONES4D
