"""CMC foliation of a neck: Newton convergence, uniqueness, Jacobi lapse and Gram evolution."""

from __future__ import annotations

import numpy as np

from neck_lab.core.types import Suite
from neck_lab.foliation.foliate import foliate, gram_evolution_check
from neck_lab.foliation.leaf import cmc_solve
from neck_lab.foliation.metric import NeckMetric
from neck_lab.inputs.schemas import SuiteConfig
from neck_lab.reporting.report import Case, Relation, judge
from neck_lab.sphere.rotations import RotationFamily
from neck_lab.suites.base import CaseSpec

EXISTENCE_ANCHOR = "existence of CMC leaves by Newton iteration"
UNIQUENESS_ANCHOR = "uniqueness of the CMC leaf through a basepoint"
LAPSE_ANCHOR = "Jacobi equation of the foliation lapse"
GRAM_ANCHOR = "area-normalized Gram evolution along the foliation"

TILTED_START = (0.0, 0.1)
UNIQUENESS_HEIGHT = 1.0
UNIQUENESS_SIZE = 0.02
UNIQUENESS_COEFFICIENTS = 5
HEIGHTS = (-1.0, 0.0, 1.0)
LINEARITY_HEIGHTS = (0.5, 1.0, 1.5)


def check_newton(config: SuiteConfig) -> list[Case]:
    """From ||f|| = 0.1 on the exact cylinder Newton reaches the slice within the step limit."""
    tol = config.effective_tolerances()
    leaf = cmc_solve(NeckMetric.cylinder(config.n), 0.0, initial=TILTED_START)
    return [
        judge(
            "cmc.newton_residual",
            leaf.residual,
            0.0,
            tol.newton,
            EXISTENCE_ANCHOR,
            Relation.AT_MOST,
        ),
        judge(
            "cmc.newton_iterations",
            leaf.iterations,
            tol.newton_iterations,
            0.0,
            EXISTENCE_ANCHOR,
            Relation.AT_MOST,
        ),
    ]


def check_uniqueness(config: SuiteConfig) -> list[Case]:
    """Random starting graphs on a bump metric reach the same leaf."""
    tol = config.effective_tolerances()
    metric = NeckMetric.bump(config.n, config.grid.cmc_delta)
    rng = np.random.default_rng(config.seed)
    leaves = [
        cmc_solve(
            metric,
            UNIQUENESS_HEIGHT,
            initial=UNIQUENESS_SIZE * rng.uniform(-1.0, 1.0, UNIQUENESS_COEFFICIENTS),
        )
        for _ in range(config.grid.cmc_starts)
    ]
    stack = np.array([leaf.coefficients for leaf in leaves])
    spread = float(np.max(np.abs(stack - stack[0])))
    return [
        judge("cmc.uniqueness", spread, 0.0, tol.uniqueness, UNIQUENESS_ANCHOR, Relation.AT_MOST)
    ]


def check_bump_foliation(config: SuiteConfig) -> list[Case]:
    """Leaves of a delta bump have constant H, and their lapse solves the Jacobi equation."""
    tol = config.effective_tolerances()
    metric = NeckMetric.bump(config.n, config.grid.cmc_delta)
    foliation = foliate(metric, HEIGHTS)
    spread = max(item.leaf.mean_curvature_spread(metric) for item in foliation.leaves)
    jacobi = max(item.lapse.jacobi_residual for item in foliation.leaves)
    return [
        judge(
            "cmc.mean_curvature_spread",
            spread,
            0.0,
            tol.cmc_spread,
            EXISTENCE_ANCHOR,
            Relation.AT_MOST,
            table=foliation.to_frame(),
        ),
        judge("cmc.jacobi_residual", jacobi, 0.0, tol.jacobi, LAPSE_ANCHOR, Relation.AT_MOST),
    ]


def check_lapse_linearity(config: SuiteConfig) -> list[Case]:
    """sup |v - 1/area| drops by a factor 10 when delta does."""
    tol = config.effective_tolerances()
    deviations = []
    for delta in (config.grid.cmc_delta, 0.1 * config.grid.cmc_delta):
        foliation = foliate(NeckMetric.bump(config.n, delta), LINEARITY_HEIGHTS)
        deviations.append(max(item.lapse.deviation for item in foliation.leaves))
    ratio = deviations[0] / deviations[1]
    return [judge("cmc.lapse_linearity", ratio, 10.0, 10.0 * tol.linearity, LAPSE_ANCHOR)]


def check_gram_evolution(config: SuiteConfig) -> list[Case]:
    """On the exact cylinder the normalized Gram matrix of the rotations is constant in s."""
    tol = config.effective_tolerances()
    metric = NeckMetric.cylinder(config.n)
    evolution = gram_evolution_check(
        foliate(metric, HEIGHTS), metric, RotationFamily.canonical(config.n)
    )
    return [
        judge(
            "cmc.gram_derivative",
            evolution.derivative,
            0.0,
            tol.newton,
            GRAM_ANCHOR,
            Relation.AT_MOST,
        ),
        judge(
            "cmc.first_variation",
            evolution.area_defect,
            0.0,
            tol.cmc_spread,
            GRAM_ANCHOR,
            Relation.AT_MOST,
        ),
    ]


CASES: tuple[CaseSpec, ...] = (
    CaseSpec("cmc.newton", EXISTENCE_ANCHOR, check_newton),
    CaseSpec("cmc.uniqueness", UNIQUENESS_ANCHOR, check_uniqueness),
    CaseSpec("cmc.bump_foliation", EXISTENCE_ANCHOR, check_bump_foliation),
    CaseSpec("cmc.lapse_linearity", LAPSE_ANCHOR, check_lapse_linearity),
    CaseSpec("cmc.gram_evolution", GRAM_ANCHOR, check_gram_evolution),
)

SUITE = Suite.CMC
