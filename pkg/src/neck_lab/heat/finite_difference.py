"""
Crank-Nicolson solver for u_t = u_zz - V(t) u with Dirichlet data.

Each step solves the tridiagonal system with scipy.linalg.solve_banded.
The scheme is unconditionally stable and second order in dt and dz; the
discrete maximum principle needs the mesh ratio dt/dz^2 <= 1.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.linalg import solve_banded

from neck_lab.core.exceptions import InputValidationError
from neck_lab.core.types import FloatArray, Grid

logger = logging.getLogger(__name__)

MAX_PRINCIPLE_RATIO: float = 1.0

BoundaryData = Callable[[float], float]
Potential = Callable[[float], float]


@dataclass(frozen=True)
class HeatField:
    """
    Solution values on a space-time grid.

    Attributes:
        z: Spatial grid, uniform on [-L, L].
        t: Time grid, uniform.
        values: Array of shape (len(t), len(z)).
    """

    z: Grid
    t: Grid
    values: FloatArray

    def __post_init__(self) -> None:
        """Validate shapes."""
        if self.values.shape != (self.t.size, self.z.size):
            raise InputValidationError(
                f"values shape {self.values.shape} must be {(self.t.size, self.z.size)}",
                field="values",
            )

    @property
    def final(self) -> FloatArray:
        """Values at the last time."""
        return self.values[-1]

    def to_frame(self) -> pd.DataFrame:
        """Long-format table with columns t, z, u."""
        tt, zz = np.meshgrid(self.t, self.z, indexing="ij")
        return pd.DataFrame({"t": tt.ravel(), "z": zz.ravel(), "u": self.values.ravel()})


def _uniform(grid: Grid, name: str) -> float:
    if grid.ndim != 1 or grid.size < 3:
        raise InputValidationError(f"{name} must be a 1-D grid with at least 3 points", field=name)
    steps = np.diff(grid)
    if steps.min() <= 0 or np.ptp(steps) > 1e-9 * steps.mean():
        raise InputValidationError(f"{name} must be uniform and increasing", field=name)
    return float(steps.mean())


def fd_solve(
    initial: FloatArray,
    left: BoundaryData,
    right: BoundaryData,
    z: Grid,
    t: Grid,
    potential: Potential | None = None,
) -> HeatField:
    """
    Crank-Nicolson solution of u_t = u_zz - V(t) u.

    Args:
        initial: Values at t[0] on the z-grid.
        left: Dirichlet data u(z[0], t).
        right: Dirichlet data u(z[-1], t).
        z: Uniform spatial grid.
        t: Uniform time grid.
        potential: Optional V(t); zero when omitted.

    Returns:
        HeatField whose boundary columns equal the Dirichlet data exactly.
    """
    dz = _uniform(z, "z")
    dt = _uniform(t, "t")
    if initial.shape != z.shape:
        raise InputValidationError("initial data must live on the z-grid", field="initial")
    ratio = dt / dz**2
    if ratio > MAX_PRINCIPLE_RATIO:
        logger.warning(
            "Crank-Nicolson mesh ratio %.3g exceeds %.1f; the discrete maximum "
            "principle may fail",
            ratio,
            MAX_PRINCIPLE_RATIO,
        )
    m = z.size - 2
    values = np.empty((t.size, z.size))
    values[0] = initial
    values[0, 0] = left(float(t[0]))
    values[0, -1] = right(float(t[0]))

    def potential_at(time: float) -> float:
        return 0.0 if potential is None else float(potential(time))

    for i in range(1, t.size):
        t_old, t_new = float(t[i - 1]), float(t[i])
        v_old, v_new = potential_at(t_old), potential_at(t_new)
        u = values[i - 1]
        lap = ((u[2:] + u[:-2]) - 2.0 * u[1:-1]) / dz**2
        rhs = u[1:-1] + 0.5 * dt * (lap - v_old * u[1:-1])
        left_new, right_new = left(t_new), right(t_new)
        rhs[0] += 0.5 * ratio * left_new
        rhs[-1] += 0.5 * ratio * right_new
        banded = np.zeros((3, m))
        banded[0, 1:] = -0.5 * ratio
        banded[1, :] = 1.0 + ratio + 0.5 * dt * v_new
        banded[2, :-1] = -0.5 * ratio
        values[i, 1:-1] = solve_banded((1, 1), banded, rhs)
        values[i, 0] = left_new
        values[i, -1] = right_new
    return HeatField(z=z, t=t, values=values)


def mode_grid(length: float, dz: float) -> Grid:
    """Uniform grid on [-L, L] whose spacing does not exceed dz."""
    points = int(np.ceil(2.0 * length / dz - 1e-9)) + 1
    return np.linspace(-length, length, points)
