"""Dirichlet heat kernel on [-L, L] and the representation formula."""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np
from scipy.integrate import simpson

from neck_lab.core.types import Suite
from neck_lab.heat.finite_difference import fd_solve, mode_grid
from neck_lab.heat.kernel import boundary_kernel_bound, kernel_eval
from neck_lab.heat.representation import HeatWindow, representation_solve
from neck_lab.inputs.schemas import SuiteConfig
from neck_lab.reporting.report import Case, Relation, judge
from neck_lab.suites.base import CaseSpec

KERNEL_ANCHOR = "image-charge Dirichlet heat kernel"
REPRESENTATION_ANCHOR = "representation formula for the Dirichlet heat problem"

KERNEL_TIMES = (0.1, 1.0, 10.0, 100.0)
MASS_NODES = 4001
DATA_MODES = 3
SOLVE_DURATION = 2.0
FD_SPACING = 0.05
FD_TIME_POINTS = 201
QUERIES = (-5.0, 0.0, 3.0)
BOUND_LENGTHS = (5.0, 10.0, 20.0)
BOUND_GAPS = (0.5, 1.0, 10.0, 100.0, 1000.0)
BOUND_FRACTIONS = (0.0, 0.2, 0.4)


def _zero(_: float) -> float:
    return 0.0


def random_sine_data(rng: np.random.Generator, length: float) -> Callable[[float], float]:
    """Smooth initial data vanishing at +-L: a few sine modes with decaying random amplitudes."""
    amplitudes = rng.uniform(-1.0, 1.0, DATA_MODES) / np.arange(1, DATA_MODES + 1) ** 3

    def initial(w: float) -> float:
        phase = math.pi * (w + length) / (2.0 * length)
        return float(sum(a * math.sin((k + 1) * phase) for k, a in enumerate(amplitudes)))

    return initial


def check_boundary_vanishing(config: SuiteConfig) -> list[Case]:
    """S(+-L, t; w) = 0 for interior w at every sampled time."""
    tol = config.effective_tolerances()
    length = config.grid.heat_length
    w = np.linspace(-0.95 * length, 0.95 * length, 39)
    worst = max(
        float(np.max(np.abs(kernel_eval(edge, t, w, length).value)))
        for t in KERNEL_TIMES
        for edge in (-length, length)
    )
    return [
        judge(
            "heat.boundary_vanishing",
            worst,
            0.0,
            tol.heat_boundary,
            KERNEL_ANCHOR,
            Relation.AT_MOST,
        )
    ]


def check_kernel_mass(config: SuiteConfig) -> list[Case]:
    """The integral of |S(z, t; .)| over [-L, L] stays below the configured bound."""
    tol = config.effective_tolerances()
    length = config.grid.heat_length
    w = np.linspace(-length, length, MASS_NODES)
    mass = max(
        float(simpson(np.abs(kernel_eval(z, t, w, length).value), x=w))
        for t in KERNEL_TIMES
        for z in (0.0, 0.5 * length)
    )
    return [judge("heat.kernel_mass", mass, tol.kernel_mass, 0.0, KERNEL_ANCHOR, Relation.AT_MOST)]


def check_boundary_bound(config: SuiteConfig) -> list[Case]:
    """
    The boundary flux obeys C L (t-s)^{-3/2} exp(-L^2/(100(t-s))) on a grid of L and t - s.

    The measurement is the largest ratio flux / bound, which must not exceed 1.
    """
    worst = 0.0
    for length in BOUND_LENGTHS:
        for gap in BOUND_GAPS:
            for fraction in BOUND_FRACTIONS:
                value, bound = boundary_kernel_bound(fraction * length, 0.0, -gap, length)
                worst = max(worst, value / bound)
    return [judge("heat.boundary_bound", worst, 1.0, 0.0, KERNEL_ANCHOR, Relation.AT_MOST)]


def check_representation(config: SuiteConfig) -> list[Case]:
    """Representation formula and Crank-Nicolson agree on random smooth data at L = heat_length."""
    tol = config.effective_tolerances()
    rng = np.random.default_rng(config.seed)
    length = config.grid.heat_length
    z = mode_grid(length, FD_SPACING)
    t = np.linspace(-length, -length + SOLVE_DURATION, FD_TIME_POINTS)
    window = HeatWindow(length=length)
    worst = 0.0
    for _ in range(config.grid.heat_samples):
        initial = random_sine_data(rng, length)
        field = fd_solve(np.array([initial(float(x)) for x in z]), _zero, _zero, z, t)
        for query in QUERIES:
            index = int(np.argmin(np.abs(z - query)))
            value = representation_solve(
                initial, _zero, _zero, float(z[index]), float(t[-1]), window
            )
            worst = max(worst, abs(value - float(field.final[index])))
    return [
        judge(
            "heat.representation_agreement",
            worst,
            0.0,
            tol.heat_agreement,
            REPRESENTATION_ANCHOR,
            Relation.AT_MOST,
        )
    ]


CASES: tuple[CaseSpec, ...] = (
    CaseSpec("heat.boundary_vanishing", KERNEL_ANCHOR, check_boundary_vanishing),
    CaseSpec("heat.kernel_mass", KERNEL_ANCHOR, check_kernel_mass),
    CaseSpec("heat.boundary_bound", KERNEL_ANCHOR, check_boundary_bound),
    CaseSpec("heat.representation_agreement", REPRESENTATION_ANCHOR, check_representation),
)

SUITE = Suite.HEAT
