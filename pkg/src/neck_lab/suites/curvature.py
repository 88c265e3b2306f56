"""Curvature-operator predicates: isotropic curvature minima, uniform PIC and pinching."""

from __future__ import annotations

import numpy as np

from neck_lab.core.types import PICMode, Suite, UniformPICCriterion
from neck_lab.curvature.blocks import block_decompose_4d
from neck_lab.curvature.isotropic import (
    min_isotropic,
    sampled_isotropic_minimum,
    uniform_pic_threshold,
)
from neck_lab.curvature.operator import CurvatureOperator, cylinder_operator, sphere_operator
from neck_lab.curvature.pinch import weighted_pinch_norm
from neck_lab.inputs.schemas import SuiteConfig
from neck_lab.reporting.report import Case, Relation, judge
from neck_lab.suites.base import CaseSpec

PIC_ANCHOR = "isotropic curvature of the shrinking cylinder"
BLOCK_ANCHOR = "four-dimensional PIC block criterion"
UNIFORM_ANCHOR = "uniform PIC constant of the cylinder"
SPHERE_ANCHOR = "isotropic curvature modes of the round sphere"
PINCH_ANCHOR = "weighted pinching norm"

PINCH_DIMENSION = 4
PINCH_RHO = 0.25
BISECTION_STEPS = 200


def check_cylinder_pic(config: SuiteConfig) -> list[Case]:
    """Minimum PIC of the unit cylinder in n = 4, 5 is 2, and no sampled frame does better."""
    tol = config.effective_tolerances()
    cases = []
    for n in (4, 5):
        op = cylinder_operator(n)
        value = min_isotropic(op, PICMode.PIC, budget=config.grid.frame_budget, seed=config.seed)
        oracle = sampled_isotropic_minimum(
            op, PICMode.PIC, samples=config.grid.oracle_samples, seed=config.seed + 1
        )
        cases.append(judge(f"curvature.min_pic_n{n}", value.value, 2.0, tol.pic, PIC_ANCHOR))
        cases.append(
            judge(
                f"curvature.min_pic_oracle_n{n}",
                value.value - oracle,
                0.0,
                tol.pic,
                PIC_ANCHOR,
                Relation.AT_MOST,
            )
        )
    return cases


def check_block_sign(config: SuiteConfig) -> list[Case]:
    """
    In n = 4 the sign of min PIC agrees with min{a1+a2, c1+c2}.

    Random operators are shifted by a random multiple of the round
    sphere so that both signs occur; operators whose block margin is
    within sign_margin of zero are skipped.
    """
    grid = config.grid
    rng = np.random.default_rng(config.seed)
    sphere = sphere_operator(4).components
    checked = disagreements = 0
    for index in range(grid.random_operators):
        base = CurvatureOperator.random(4, rng)
        shifted = CurvatureOperator(n=4, components=base.components + sphere * rng.uniform(0, 3))
        blocks = block_decompose_4d(shifted)
        margin = min(blocks.a[0] + blocks.a[1], blocks.c[0] + blocks.c[1])
        if abs(margin) <= grid.sign_margin:
            continue
        value = min_isotropic(shifted, PICMode.PIC, budget=grid.frame_budget, seed=index).value
        disagreements += (value > 0) != (margin > 0)
        checked += 1
    case = judge("curvature.block_sign_agreement", disagreements, 0.0, 0.0, BLOCK_ANCHOR)
    return [case._replace(detail=f"{checked} operators checked")]


def check_uniform_boundary(config: SuiteConfig) -> list[Case]:
    """Boundary alpha of the unit 4-cylinder: 1/3 for the scalar criterion, 2 for the block one."""
    tol = config.effective_tolerances()
    op = cylinder_operator(4)
    scalar = uniform_pic_threshold(
        op, UniformPICCriterion.SCALAR, budget=config.grid.frame_budget, seed=config.seed
    )
    block = uniform_pic_threshold(op, UniformPICCriterion.BLOCK)
    return [
        judge(
            "curvature.uniform_alpha_scalar", scalar, 1.0 / 3.0, tol.boundary_alpha, UNIFORM_ANCHOR
        ),
        judge("curvature.uniform_alpha_block", block, 2.0, tol.boundary_alpha, UNIFORM_ANCHOR),
    ]


def check_sphere_modes(config: SuiteConfig) -> list[Case]:
    """Round S^4: PIC 4, PIC1 2, PIC2 1."""
    tol = config.effective_tolerances()
    op = sphere_operator(4)
    expected = {PICMode.PIC: 4.0, PICMode.PIC1: 2.0, PICMode.PIC2: 1.0}
    return [
        judge(
            f"curvature.sphere_{mode.value}",
            min_isotropic(op, mode, budget=config.grid.frame_budget, seed=config.seed).value,
            value,
            tol.pic,
            SPHERE_ANCHOR,
        )
        for mode, value in expected.items()
    ]


def _feasible(lam: float, h: np.ndarray, weight: np.ndarray) -> bool:
    upper = np.linalg.eigvalsh(lam * weight - h)[0]
    lower = np.linalg.eigvalsh(lam * weight + h)[0]
    return bool(min(upper, lower) >= 0.0)


def bisect_pinch_norm(h: np.ndarray, weight: np.ndarray) -> float:
    """Smallest lambda with -lambda W <= h <= lambda W, by bisection on both constraints."""
    lo, hi = 0.0, 1.0
    while not _feasible(hi, h, weight):
        hi *= 2.0
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if _feasible(mid, h, weight):
            hi = mid
        else:
            lo = mid
    return hi


def check_pinch_norm(config: SuiteConfig) -> list[Case]:
    """Closed-form pinch norm against bisection on random (M, h)."""
    tol = config.effective_tolerances()
    rng = np.random.default_rng(config.seed)
    worst = 0.0
    for _ in range(config.grid.pinch_samples):
        x = rng.standard_normal((PINCH_DIMENSION, PINCH_DIMENSION))
        weight = x @ x.T + 0.5 * np.eye(PINCH_DIMENSION)
        y = rng.standard_normal((PINCH_DIMENSION, PINCH_DIMENSION))
        h = y + y.T
        closed = weighted_pinch_norm(h, weight + PINCH_RHO * np.eye(PINCH_DIMENSION), PINCH_RHO)
        oracle = bisect_pinch_norm(h, weight)
        worst = max(worst, abs(closed - oracle) / max(1.0, oracle))
    return [
        judge(
            "curvature.pinch_norm_bisection",
            worst,
            0.0,
            tol.pinch_norm,
            PINCH_ANCHOR,
            Relation.AT_MOST,
        )
    ]


CASES: tuple[CaseSpec, ...] = (
    CaseSpec("curvature.min_pic", PIC_ANCHOR, check_cylinder_pic),
    CaseSpec("curvature.block_sign_agreement", BLOCK_ANCHOR, check_block_sign),
    CaseSpec("curvature.uniform_alpha", UNIFORM_ANCHOR, check_uniform_boundary),
    CaseSpec("curvature.sphere_modes", SPHERE_ANCHOR, check_sphere_modes),
    CaseSpec("curvature.pinch_norm_bisection", PINCH_ANCHOR, check_pinch_norm),
)

SUITE = Suite.CURVATURE
