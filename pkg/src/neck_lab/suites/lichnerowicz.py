"""
Lichnerowicz mode system on the shrinking cylinder.

Checks the substitution solver against manufactured solutions, the
non-decaying solutions, the growth rate of the first-harmonic mode,
the decay of the profile residual in the neck length, and the vector
field identities behind the system.
"""

from __future__ import annotations

import math

import numpy as np

from neck_lab.core.types import ModeKind, Suite
from neck_lab.heat.finite_difference import mode_grid
from neck_lab.inputs.schemas import SuiteConfig
from neck_lab.reporting.export import decay_frame, trajectory_frame
from neck_lab.reporting.report import Case, Relation, judge
from neck_lab.spectral.decomposition import SliceTensor
from neck_lab.spectral.identities import (
    lichnerowicz_identity_residual,
    mode_system_residual,
    neutral_solution_residuals,
    norm_subsolution_residual,
)
from neck_lab.spectral.killing import growing_exponent, killing_exponent
from neck_lab.spectral.modes import (
    ModeCoefficient,
    constant_mode_solution,
    mode_evolve,
    mode_evolve_direct,
)
from neck_lab.spectral.norms import slice_norm
from neck_lab.spectral.profile import profile_decay
from neck_lab.sphere.fields import SphereVectorField
from neck_lab.sphere.polynomials import SpherePolynomial
from neck_lab.sphere.quadrature import random_sphere_points
from neck_lab.suites.base import CaseSpec

MODE_ANCHOR = "mode system of the Lichnerowicz equation on the cylinder"
NEUTRAL_ANCHOR = "non-decaying solutions of the mode system"
GROWTH_ANCHOR = "growth rate of the first-harmonic mode"
PROFILE_ANCHOR = "asymptotic profile of solutions on long necks"
IDENTITY_ANCHOR = "Lie derivative of a vector heat solution solves the Lichnerowicz equation"
SUBSOLUTION_ANCHOR = "norm of a vector heat solution is a subsolution"

MANUFACTURED = {
    ModeKind.OMEGA: 3.0,
    ModeKind.CHI: 4.0,
    ModeKind.SIGMA: 1.0,
    ModeKind.BETA: 8.0,
}
MANUFACTURED_LENGTH = 3.0
MANUFACTURED_TIMES = (-2.0, -0.25)
REFINEMENT = ((0.1, 0.01), (0.05, 0.005), (0.025, 0.0025))
RESIDUAL_POINT = (0.4, -1.3)
NEUTRAL_POINT = (0.2, -0.7)
FIT_TIMES = np.geomspace(8.0, 0.05, 25)
VECTOR_TIMES = (-8.0, -0.5)
VECTOR_STEP = 1e-3
VECTOR_LENGTH = 1.0
VECTOR_SPACING = 0.5
IDENTITY_TIMES = (-2.0, -0.3)
SUBSOLUTION_TIMES = (-3.0, -1.0, -0.5)
SUBSOLUTION_POINTS = 400


def _manufactured(mode: ModeCoefficient, z: float, t: float) -> float:
    """(-t)^p e^{-t} cos z solves the mode equation of every kind."""
    return (-t) ** mode.power * math.exp(-t) * math.cos(z)


def _evolve_manufactured(
    mode: ModeCoefficient, dz: float, dt: float
) -> tuple[ModeCoefficient, float]:
    t0, t1 = MANUFACTURED_TIMES
    z = mode_grid(MANUFACTURED_LENGTH, dz)
    t = np.linspace(t0, t1, int(round((t1 - t0) / dt)) + 1)
    initial = np.array([_manufactured(mode, float(x), t0) for x in z])
    evolved = mode_evolve(
        mode,
        initial,
        lambda s: _manufactured(mode, -MANUFACTURED_LENGTH, s),
        lambda s: _manufactured(mode, MANUFACTURED_LENGTH, s),
        z,
        t,
    )
    assert evolved.field is not None
    exact = np.array([_manufactured(mode, float(x), t1) for x in z])
    return evolved, float(np.max(np.abs(evolved.field.final - exact)))


def refinement_ratios(mode: ModeCoefficient) -> tuple[list[float], ModeCoefficient]:
    """
    Successive error ratios of the manufactured solution over the REFINEMENT grids.

    Returns:
        The ratios coarse/fine for each consecutive pair of grids, and the
        mode evolved on the coarsest grid.
    """
    runs = [_evolve_manufactured(mode, dz, dt) for dz, dt in REFINEMENT]
    errors = [error for _, error in runs]
    ratios = [coarse / fine for coarse, fine in zip(errors, errors[1:], strict=False)]
    return ratios, runs[0][0]


def check_convergence(config: SuiteConfig) -> list[Case]:
    """Each halving of dz and dt divides the manufactured-solution error by 4, for every kind."""
    tol = config.effective_tolerances()
    cases = []
    for kind, eigenvalue in MANUFACTURED.items():
        ratios, coarse_mode = refinement_ratios(ModeCoefficient(config.n, kind, eigenvalue))
        for level, ratio in enumerate(ratios, start=1):
            table = None
            if kind is ModeKind.CHI and level == 1:
                assert coarse_mode.field is not None
                table = trajectory_frame(coarse_mode.field)
            cases.append(
                judge(
                    f"lichnerowicz.convergence_{kind.value}_{level}",
                    ratio,
                    4.0,
                    tol.convergence_ratio,
                    MODE_ANCHOR,
                    table=table,
                )
            )
    return cases


def check_mode_residuals(config: SuiteConfig) -> list[Case]:
    """Five-point substitution of the manufactured solutions into the mode system."""
    tol = config.effective_tolerances()
    z, t = RESIDUAL_POINT
    worst = 0.0
    for kind, eigenvalue in MANUFACTURED.items():
        mode = ModeCoefficient(config.n, kind, eigenvalue)
        residual = mode_system_residual(
            kind, config.n, eigenvalue, lambda zz, tt, m=mode: _manufactured(m, zz, tt), z, t
        )
        worst = max(worst, residual)
    return [
        judge(
            "lichnerowicz.mode_residual", worst, 0.0, tol.identity, MODE_ANCHOR, Relation.AT_MOST
        )
    ]


def check_neutral(config: SuiteConfig) -> list[Case]:
    """omega_bar, beta_bar and the growing psi mode solve the system."""
    tol = config.effective_tolerances()
    n = config.n
    psi = np.ones(n) / math.sqrt(n)
    residuals = neutral_solution_residuals(n, psi, *NEUTRAL_POINT)
    return [
        judge(
            f"lichnerowicz.neutral_{name}",
            value,
            0.0,
            tol.neutral,
            NEUTRAL_ANCHOR,
            Relation.AT_MOST,
        )
        for name, value in residuals.items()
    ]


def _fitted_slope(values: np.ndarray) -> float:
    return float(np.polyfit(np.log(FIT_TIMES), np.log(values), 1)[0])


def vector_trajectory_exponent(n: int) -> float:
    """
    Log-log slope in -t of a z-independent first-gradient vector mode.

    The mode is evolved by mode_evolve_direct, with the potential inside the
    Crank-Nicolson scheme, from (-t0)^p data with exact boundary values; the
    slope is fitted on the centre column over VECTOR_TIMES.
    """
    mode = ModeCoefficient(n, ModeKind.VECTOR, 1.0)
    t0, t1 = VECTOR_TIMES
    t = np.linspace(t0, t1, int(round((t1 - t0) / VECTOR_STEP)) + 1)
    z = mode_grid(VECTOR_LENGTH, VECTOR_SPACING)

    def boundary(s: float) -> float:
        return float(constant_mode_solution(mode, 1.0, np.array([s]))[0])

    initial = np.full(z.size, boundary(t0))
    evolved = mode_evolve_direct(mode, initial, boundary, boundary, z, t)
    assert evolved.field is not None
    centre = evolved.field.values[:, z.size // 2]
    return float(np.polyfit(np.log(-t), np.log(centre), 1)[0])


def check_growth_exponent(config: SuiteConfig) -> list[Case]:
    """
    The growing mode norm and the first-gradient vector mode scale like (-t)^{-(n-3)/(2(n-2))}.

    Both exponents are fitted by least squares in log-log coordinates; the vector
    exponent is fitted on a solver trajectory.
    """
    tol = config.effective_tolerances()
    n = config.n
    axis = np.zeros(n)
    axis[0] = 1.0
    norms = np.array(
        [
            slice_norm(
                SliceTensor.of_omega(SpherePolynomial.linear(axis).scale(s**growing_exponent(n))),
                -s,
            )
            for s in FIT_TIMES
        ]
    )
    expected = killing_exponent(n)
    return [
        judge(
            "lichnerowicz.growing_norm_exponent",
            _fitted_slope(norms),
            expected,
            tol.exponent,
            GROWTH_ANCHOR,
        ),
        judge(
            "lichnerowicz.vector_exponent",
            vector_trajectory_exponent(n),
            expected,
            tol.exponent,
            GROWTH_ANCHOR,
        ),
    ]


def check_profile_decay(config: SuiteConfig) -> list[Case]:
    """The profile residual decreases in L with log-log slope at most -1/(2(n-2)) + margin."""
    tol = config.effective_tolerances()
    n = config.n
    lengths = config.lengths
    rows, slope = profile_decay(n, lengths, seed=config.seed)
    residuals = [row.residual for row in rows]
    table = decay_frame([row.length for row in rows], residuals, slope)
    increases = int(np.sum(np.diff(residuals) > 0))
    return [
        judge(
            "lichnerowicz.profile_decay",
            slope,
            -1.0 / (2.0 * (n - 2)),
            tol.slope_margin,
            PROFILE_ANCHOR,
            Relation.AT_MOST,
            table=table,
        ),
        judge("lichnerowicz.profile_monotone", increases, 0.0, 0.0, PROFILE_ANCHOR),
    ]


def _vector_fields(n: int) -> dict[str, SphereVectorField]:
    """First gradient, second gradient and a rotation."""
    first = np.zeros(n)
    first[0] = 1.0
    second = np.zeros((n, n))
    second[0, 0], second[1, 1] = 1.0, -1.0
    rotation = np.zeros((n, n))
    rotation[0, 1], rotation[1, 0] = 1.0, -1.0
    return {
        "first_gradient": SphereVectorField(first, np.zeros((n, n))),
        "second_gradient": SphereVectorField(np.zeros(n), 2.0 * second),
        "killing": SphereVectorField.rotation(rotation),
    }


def check_identity(config: SuiteConfig) -> list[Case]:
    """L_V g(t) solves the mode system for heat-flow fields of level at most two."""
    tol = config.effective_tolerances()
    fields = _vector_fields(config.n)
    worst = max(
        lichnerowicz_identity_residual(field, t)
        for field in fields.values()
        for t in IDENTITY_TIMES
    )
    return [
        judge(
            "lichnerowicz.lie_identity", worst, 0.0, tol.identity, IDENTITY_ANCHOR, Relation.AT_MOST
        )
    ]


def check_subsolution(config: SuiteConfig) -> list[Case]:
    """d/dt|V| - Delta|V| <= 0 pointwise, away from the zeros of the fields."""
    tol = config.effective_tolerances()
    n = config.n
    points = random_sphere_points(n, SUBSOLUTION_POINTS, seed=config.seed)
    keep = (np.abs(points[:, 0]) < 0.9) & (points[:, 0] ** 2 + points[:, 1] ** 2 > 0.05)
    fields = _vector_fields(n)
    worst = max(
        norm_subsolution_residual(fields[name], t, points[keep])
        for name in ("first_gradient", "killing")
        for t in SUBSOLUTION_TIMES
    )
    return [
        judge(
            "lichnerowicz.norm_subsolution",
            worst,
            0.0,
            tol.subsolution,
            SUBSOLUTION_ANCHOR,
            Relation.AT_MOST,
        )
    ]


CASES: tuple[CaseSpec, ...] = (
    CaseSpec("lichnerowicz.convergence", MODE_ANCHOR, check_convergence),
    CaseSpec("lichnerowicz.mode_residual", MODE_ANCHOR, check_mode_residuals),
    CaseSpec("lichnerowicz.neutral", NEUTRAL_ANCHOR, check_neutral),
    CaseSpec("lichnerowicz.growth_exponent", GROWTH_ANCHOR, check_growth_exponent),
    CaseSpec("lichnerowicz.profile_decay", PROFILE_ANCHOR, check_profile_decay),
    CaseSpec("lichnerowicz.lie_identity", IDENTITY_ANCHOR, check_identity),
    CaseSpec("lichnerowicz.norm_subsolution", SUBSOLUTION_ANCHOR, check_subsolution),
)

SUITE = Suite.LICHNEROWICZ
