"""
Consistency checks of the Lichnerowicz mode system.

- mode_system_residual substitutes a candidate coefficient c(z, t) into
  c_t - c_zz + p c/(-t) with five-point differences.
- lichnerowicz_identity_residual checks that L_V g(t) solves the mode
  system when V(t) solves dV/dt = (Delta + Ric) V.
- norm_subsolution_residual measures d/dt|V| - Delta|V|, which is <= 0
  for such fields.
"""

from __future__ import annotations

import logging
from collections.abc import Callable

import numpy as np

from neck_lab.core.exceptions import TimeDomainError
from neck_lab.core.types import FloatArray, Height, ModeKind, Time
from neck_lab.spectral.decomposition import SliceTensor, cylinder_radius_squared, decompose
from neck_lab.spectral.killing import rough_eigenvalue
from neck_lab.spectral.modes import substitution_power
from neck_lab.sphere.fields import SphereVectorField, lie_derivative_metric
from neck_lab.sphere.polynomials import SpherePolynomial

logger = logging.getLogger(__name__)

FIVE_POINT_FIRST = (1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0)
FIVE_POINT_SECOND = (-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0)
TIME_STEP_FRACTION: float = 1e-3
LAPLACIAN_STEP: float = 1e-3

CoefficientFunction = Callable[[Height, Time], float]


def mode_system_residual(
    kind: ModeKind,
    n: int,
    eigenvalue: float,
    coefficient: CoefficientFunction,
    z: Height,
    t: Time,
    dz: float = 5e-3,
) -> float:
    """
    |c_t - c_zz + p c/(-t)| at (z, t), relative to max(|c|, 1).

    Args:
        kind: Tensor component.
        n: Dimension.
        eigenvalue: Sphere eigenvalue of the mode.
        coefficient: Candidate c(z, t).
        z: Height.
        t: Time, negative.
        dz: Spatial step of the five-point stencil.
    """
    if t >= 0:
        raise TimeDomainError(f"cylinder time must be negative: {t}", t=t)
    p = substitution_power(kind, n, eigenvalue)
    dt = TIME_STEP_FRACTION * (-t)
    offsets = (-2, -1, 0, 1, 2)
    c_t = sum(w * coefficient(z, t + k * dt) for w, k in zip(FIVE_POINT_FIRST, offsets)) / dt
    c_zz = sum(w * coefficient(z + k * dz, t) for w, k in zip(FIVE_POINT_SECOND, offsets)) / dz**2
    value = coefficient(z, t)
    residual = c_t - c_zz + p * value / (-t)
    return float(abs(residual) / max(abs(value), 1.0))


def neutral_solution_residuals(n: int, psi: FloatArray, z: Height, t: Time) -> dict[str, float]:
    """
    Mode-system residuals of the three non-decaying solutions.

    omega_bar = -t is not a heat solution, so the neutral omega mode is
    checked on omega_bar = e^{-t} cos z; beta_bar is constant and the
    growing mode is (-t)^{(n-1)/(2(n-2))} psi . e for a unit direction e.
    """
    level_one = float(n - 1)
    amplitude = float(np.linalg.norm(psi))
    return {
        "omega_bar": mode_system_residual(
            ModeKind.OMEGA, n, 0.0, lambda zz, tt: float(np.exp(-tt) * np.cos(zz)), z, t
        ),
        "beta_bar": mode_system_residual(ModeKind.BETA, n, 0.0, lambda zz, tt: 1.0, z, t),
        "growing": mode_system_residual(
            ModeKind.OMEGA,
            n,
            level_one,
            lambda zz, tt: amplitude * (-tt) ** ((n - 1) / (2.0 * (n - 2))),
            z,
            t,
        ),
    }


# =============================================================================
# VECTOR-FIELD IDENTITIES
# =============================================================================


def vector_heat_power(field: SphereVectorField) -> float:
    """Power q with V(t) = (-t)^q Y solving dV/dt = (Delta + Ric) V."""
    return substitution_power(ModeKind.VECTOR, field.n, rough_eigenvalue(field))


def _lie_slice(field: SphereVectorField, t: Time) -> SliceTensor:
    """L_{V(t)} g(t) for V(t) = (-t)^q Y as a slice tensor."""
    n = field.n
    factor = cylinder_radius_squared(n, t) * (-t) ** vector_heat_power(field)
    lie = lie_derivative_metric(field)
    return SliceTensor(
        lie.conformal.scale(factor),
        factor * lie.shear,
        SphereVectorField.zero(n),
        SpherePolynomial.zero(n),
    )


def lichnerowicz_identity_residual(field: SphereVectorField, t: Time) -> float:
    """
    Largest relative mode-system residual of the components of L_{V(t)} g(t).

    V(t) = (-t)^q Y for a rough-Laplacian eigenfield Y, so every component of
    L_{V(t)} g(t) = r^2 (-t)^q L_Y g_S is the common factor r^2 (-t)^q times a
    fixed angular tensor. Each nonzero component must solve its own mode
    equation with that factor as coefficient.
    """
    if t >= 0:
        raise TimeDomainError(f"cylinder time must be negative: {t}", t=t)
    n = field.n
    q = vector_heat_power(field)

    def factor(zz: Height, tt: Time) -> float:
        return (-tt) ** (1.0 + q) / (-t) ** (1.0 + q)

    worst = 0.0
    for comp in decompose(_lie_slice(field, t)).components:
        if comp.norm <= 1e-14:
            continue
        residual = mode_system_residual(comp.kind, n, comp.eigenvalue, factor, 0.0, t)
        logger.debug(
            "Lie-derivative %s component (eigenvalue %.1f): residual %.2e",
            comp.kind.value,
            comp.eigenvalue,
            residual,
        )
        worst = max(worst, residual)
    return worst


def _sphere_laplacian_of(
    function: Callable[[FloatArray], FloatArray], x: FloatArray
) -> FloatArray:
    """Delta_S f at sphere points via the degree-0 extension F(y) = f(y/|y|)."""

    def extended(y: FloatArray) -> FloatArray:
        return function(y / np.linalg.norm(y, axis=1, keepdims=True))

    n = x.shape[1]
    h = LAPLACIAN_STEP
    total = np.zeros(x.shape[0])
    for i in range(n):
        shift = np.zeros(n)
        shift[i] = h
        stencil = [extended(x + k * shift) for k in (-2, -1, 0, 1, 2)]
        total = total + sum(w * s for w, s in zip(FIVE_POINT_SECOND, stencil)) / h**2
    return total


def norm_subsolution_residual(field: SphereVectorField, t: Time, points: FloatArray) -> float:
    """
    max over points of d/dt|V| - Delta|V| for V(t) = (-t)^q Y on g(t).

    |V|_{g(t)} = r (-t)^q |Y|, so d/dt|V| = -(q + 1/2)|V|/(-t) and
    Delta|V| = r (-t)^q Delta_S|Y| / r^2. The result is <= 0 up to
    discretization error; points where Y vanishes should be avoided.
    """
    if t >= 0:
        raise TimeDomainError(f"cylinder time must be negative: {t}", t=t)
    n = field.n
    q = vector_heat_power(field)
    r2 = cylinder_radius_squared(n, t)
    amplitude = np.sqrt(r2) * (-t) ** q

    def magnitude(x: FloatArray) -> FloatArray:
        return np.asarray(np.linalg.norm(field.evaluate(x), axis=1))

    values = amplitude * magnitude(points)
    d_dt = -(q + 0.5) * values / (-t)
    laplacian = amplitude * _sphere_laplacian_of(magnitude, points) / r2
    return float(np.max(d_dt - laplacian))
