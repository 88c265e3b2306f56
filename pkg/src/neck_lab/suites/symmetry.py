"""
Rotational symmetry diagnostics.

Structure constants of so(n), the three symmetry deficits of a rotation
family on a neck, Procrustes alignment and cutoff gluing of two
families, and the improvement of a contaminated family under smoothing.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import ortho_group

from neck_lab.core.types import Suite
from neck_lab.foliation.foliate import foliate
from neck_lab.foliation.metric import NeckMetric
from neck_lab.inputs.schemas import SuiteConfig
from neck_lab.reporting.report import Case, Relation, judge
from neck_lab.sphere.alignment import (
    SampledFamily,
    SmoothStep,
    combine_fields,
    cutoff_glue,
    procrustes_align,
)
from neck_lab.sphere.fields import SphereVectorField
from neck_lab.sphere.harmonics import HarmonicFunction, gradient_field
from neck_lab.sphere.quadrature import random_sphere_points
from neck_lab.sphere.rotations import (
    RotationFamily,
    canonical_basis,
    reconstruction_residual,
    structure_constants,
    transform_constants,
)
from neck_lab.suites.base import CaseSpec
from neck_lab.symmetry.deficits import symmetry_deficit
from neck_lab.symmetry.improvement import improvement_experiment
from neck_lab.symmetry.neck import NeckSample

STRUCTURE_ANCHOR = "structure constants of so(n)"
DEFICIT_ANCHOR = "symmetry deficits of a rotation family on a neck"
ALIGNMENT_ANCHOR = "Procrustes alignment of rotation families"
GLUE_ANCHOR = "cutoff gluing of aligned rotation families"
IMPROVEMENT_ANCHOR = "improvement of symmetry along a neck"

GAUGE_HEIGHTS = (-4.0, 0.0, 4.0)
GAUGE_FLOOR = 1e-20
GLUE_HEIGHTS = np.linspace(-1.0, 1.0, 21)


def perturbed_family(n: int, epsilon: float, seed: int) -> list[SphereVectorField]:
    """Canonical rotations plus epsilon times random first- and second-harmonic gradients."""
    rng = np.random.default_rng(seed)
    fields = []
    for m in canonical_basis(n):
        a = rng.standard_normal(n)
        s = rng.standard_normal((n, n))
        s = 0.5 * (s + s.T)
        s -= np.trace(s) / n * np.eye(n)
        bump = gradient_field(HarmonicFunction(n, 1, a)) + gradient_field(HarmonicFunction(n, 2, s))
        fields.append(SphereVectorField.rotation(m) + bump.scale(epsilon))
    return fields


def check_structure_constants(config: SuiteConfig) -> list[Case]:
    """Canonical constants reconstruct the basis and transform with omega x omega x omega."""
    tol = config.effective_tolerances()
    family = RotationFamily.canonical(config.n)
    constants = structure_constants(family)
    omega = ortho_group.rvs(family.size, random_state=config.seed)
    conjugated = family.conjugate(omega)
    transformed = transform_constants(constants, omega)
    return [
        judge(
            "symmetry.reconstruction",
            reconstruction_residual(family),
            0.0,
            tol.reconstruction,
            STRUCTURE_ANCHOR,
            Relation.AT_MOST,
        ),
        judge(
            "symmetry.structure_bound",
            float(np.max(np.abs(constants))),
            1.0,
            0.0,
            STRUCTURE_ANCHOR,
            Relation.AT_MOST,
        ),
        judge(
            "symmetry.random_reconstruction",
            reconstruction_residual(conjugated, transformed),
            0.0,
            tol.random_reconstruction,
            STRUCTURE_ANCHOR,
            Relation.AT_MOST,
        ),
        judge(
            "symmetry.constant_transform",
            float(np.max(np.abs(structure_constants(conjugated) - transformed))),
            0.0,
            tol.random_reconstruction,
            STRUCTURE_ANCHOR,
            Relation.AT_MOST,
        ),
    ]


def check_cylinder_deficits(config: SuiteConfig) -> list[Case]:
    """The canonical family on the exact cylinder has all three deficits at roundoff."""
    tol = config.effective_tolerances()
    sample = NeckSample.at_unit_radius(NeckMetric.cylinder(config.n))
    report = symmetry_deficit(sample, RotationFamily.canonical(config.n))
    return [
        judge(
            f"symmetry.cylinder_deficit_{index + 1}",
            value,
            0.0,
            tol.deficit,
            DEFICIT_ANCHOR,
            Relation.AT_MOST,
        )
        for index, value in enumerate(report.deficits)
    ]


def check_gauge_invariance(config: SuiteConfig) -> list[Case]:
    """Conjugating the family by a random omega in O(N) leaves every deficit unchanged."""
    tol = config.effective_tolerances()
    sample = NeckSample.at_unit_radius(NeckMetric.bump(config.n, config.grid.cmc_delta))
    family = RotationFamily.canonical(config.n)
    foliation = foliate(sample.metric, GAUGE_HEIGHTS)
    base = np.asarray(symmetry_deficit(sample, family, foliation).deficits)
    omega = ortho_group.rvs(family.size, random_state=config.seed)
    turned = np.asarray(symmetry_deficit(sample, family.conjugate(omega), foliation).deficits)
    change = float(np.max(np.abs(turned - base) / (np.abs(base) + GAUGE_FLOOR)))
    return [
        judge("symmetry.gauge_invariance", change, 0.0, tol.gauge, DEFICIT_ANCHOR, Relation.AT_MOST)
    ]


def check_procrustes(config: SuiteConfig) -> list[Case]:
    """A family rotated by a known omega_0 is aligned back with zero misfit."""
    tol = config.effective_tolerances()
    fields = RotationFamily.canonical(config.n).fields()
    points = random_sphere_points(config.n, config.grid.sphere_samples, seed=config.seed)
    omega0 = ortho_group.rvs(len(fields), random_state=config.seed + 1)
    result = procrustes_align(
        SampledFamily.from_fields(fields, points),
        SampledFamily.from_fields(combine_fields(omega0, fields), points),
    )
    case = judge(
        "symmetry.procrustes_recovery",
        result.misfit,
        0.0,
        tol.procrustes,
        ALIGNMENT_ANCHOR,
        Relation.AT_MOST,
    )
    error = float(np.max(np.abs(result.omega - omega0)))
    return [case._replace(detail=f"max |omega - omega_0| = {error:.3e}")]


def check_glue_linearity(config: SuiteConfig) -> list[Case]:
    """The transition deficit of two independently perturbed families is linear in epsilon."""
    tol = config.effective_tolerances()
    points = random_sphere_points(config.n, config.grid.sphere_samples, seed=config.seed)
    epsilons = config.grid.glue_epsilons
    deficits = []
    for epsilon in epsilons:
        fields = perturbed_family(config.n, epsilon, seed=config.seed + 1)
        target = perturbed_family(config.n, epsilon, seed=config.seed + 2)
        omega = procrustes_align(
            SampledFamily.from_fields(fields, points),
            SampledFamily.from_fields(target, points),
        ).omega
        glued = cutoff_glue(fields, target, omega, SmoothStep(), GLUE_HEIGHTS, points)
        deficits.append(glued.deficit)
    cases = []
    for index in range(len(epsilons) - 1):
        expected = epsilons[index] / epsilons[index + 1]
        cases.append(
            judge(
                f"symmetry.glue_ratio_{index + 1}",
                deficits[index] / deficits[index + 1],
                expected,
                expected * tol.glue_linearity,
                GLUE_ANCHOR,
            )
        )
    return cases


def check_improvement(config: SuiteConfig) -> list[Case]:
    """Smoothing a contaminated family on longer necks drives its normalized deficit down."""
    tol = config.effective_tolerances()
    n = config.n
    sample = NeckSample.at_unit_radius(NeckMetric.cylinder(n))
    result = improvement_experiment(
        sample, RotationFamily.canonical(n), config.lengths, seed=config.seed
    )
    improved = sum(row.after.epsilon < row.before.epsilon for row in result.rows)
    return [
        judge(
            "symmetry.improvement_slope",
            result.decay_slope,
            -1.0 / (2.0 * (n - 2)),
            tol.slope_margin,
            IMPROVEMENT_ANCHOR,
            Relation.AT_MOST,
            table=result.to_frame(),
        ),
        judge(
            "symmetry.smoothing_improves",
            improved,
            len(result.rows),
            0.0,
            IMPROVEMENT_ANCHOR,
        ),
    ]


CASES: tuple[CaseSpec, ...] = (
    CaseSpec("symmetry.structure_constants", STRUCTURE_ANCHOR, check_structure_constants),
    CaseSpec("symmetry.cylinder_deficits", DEFICIT_ANCHOR, check_cylinder_deficits),
    CaseSpec("symmetry.gauge_invariance", DEFICIT_ANCHOR, check_gauge_invariance),
    CaseSpec("symmetry.procrustes_recovery", ALIGNMENT_ANCHOR, check_procrustes),
    CaseSpec("symmetry.glue_linearity", GLUE_ANCHOR, check_glue_linearity),
    CaseSpec("symmetry.improvement", IMPROVEMENT_ANCHOR, check_improvement),
)

SUITE = Suite.SYMMETRY
