"""
Rotationally symmetric warped products dz^2 + phi(z)^2 g_{S^{n-1}}.

Sectional curvatures:
    K_rad = -phi'' / phi            (planes containing d/dz)
    K_sph = (1 - phi'^2) / phi^2    (planes tangent to the sphere)

Ricci flow in the gauge that keeps dz^2 fixed reduces to

    phi_t = phi_zz - (n-2)(1 - phi_z^2)/phi + drift * phi_z

where the optional drift is f' for a steady soliton with Ric = D^2 f, so
that the soliton is a stationary solution.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import pandas as pd

from neck_lab.core.exceptions import DimensionError, InputValidationError, NeckpinchError
from neck_lab.core.types import FloatArray, Grid
from neck_lab.curvature.operator import CurvatureOperator, rotationally_symmetric_operator

logger = logging.getLogger(__name__)

UNIFORM_GRID_TOLERANCE: float = 1e-9


@dataclass(frozen=True)
class WarpedProfile:
    """
    Warp factor (and optional soliton potential) on a uniform z-grid.

    Attributes:
        n: Dimension of the manifold.
        z: Uniform grid.
        phi: Warp factor, positive on the interior.
        f: Optional soliton potential on the same grid.
    """

    n: int
    z: Grid
    phi: FloatArray
    f: FloatArray | None = None

    def __post_init__(self) -> None:
        """Validate grid uniformity and positivity."""
        if self.n < 4:
            raise DimensionError(f"n must be at least 4: {self.n}", n=self.n, required=4)
        if self.z.ndim != 1 or self.z.size < 3:
            raise InputValidationError("z must be a 1-D grid with at least 3 points", field="z")
        if self.phi.shape != self.z.shape:
            raise InputValidationError(
                f"phi shape {self.phi.shape} differs from grid shape {self.z.shape}",
                field="phi",
            )
        if self.f is not None and self.f.shape != self.z.shape:
            raise InputValidationError("f must live on the z-grid", field="f")
        steps = np.diff(self.z)
        if steps.min() <= 0 or np.ptp(steps) > UNIFORM_GRID_TOLERANCE * max(1.0, steps.mean()):
            raise InputValidationError("z-grid must be uniform and increasing", field="z")
        if np.any(self.phi[1:-1] <= 0):
            bad = int(np.argmax(self.phi[1:-1] <= 0)) + 1
            raise InputValidationError(
                f"phi must be positive on the interior (phi={self.phi[bad]:.3e} "
                f"at z={self.z[bad]:.6g})",
                field="phi",
                value=float(self.phi[bad]),
            )

    @property
    def dz(self) -> float:
        """Grid spacing."""
        return float(self.z[1] - self.z[0])

    @classmethod
    def from_function(
        cls, n: int, z: Grid, phi: FloatArray, f: FloatArray | None = None
    ) -> WarpedProfile:
        """Build from arrays, copying them as floats."""
        return cls(
            n=n,
            z=np.asarray(z, dtype=float).copy(),
            phi=np.asarray(phi, dtype=float).copy(),
            f=None if f is None else np.asarray(f, dtype=float).copy(),
        )


class WarpedCurvatures(NamedTuple):
    """Curvatures on the interior grid points."""

    z: Grid
    k_rad: FloatArray
    k_sph: FloatArray
    scalar: FloatArray


def _derivatives(profile: WarpedProfile) -> tuple[FloatArray, FloatArray]:
    phi, h = profile.phi, profile.dz
    first = (phi[2:] - phi[:-2]) / (2.0 * h)
    second = ((phi[2:] + phi[:-2]) - 2.0 * phi[1:-1]) / h**2
    return first, second


def warped_curvatures(profile: WarpedProfile) -> WarpedCurvatures:
    """
    Central-difference sectional and scalar curvatures on the interior.

    Scalar curvature is R = 2(n-1) K_rad + (n-1)(n-2) K_sph.

    Raises:
        InputValidationError: If the grid has fewer than 5 points.
    """
    if profile.z.size < 5:
        raise InputValidationError("curvatures need at least 5 grid points", field="z")
    first, second = _derivatives(profile)
    phi = profile.phi[1:-1]
    k_rad = -second / phi
    k_sph = (1.0 - first**2) / phi**2
    n = profile.n
    scalar = 2.0 * (n - 1) * k_rad + (n - 1) * (n - 2) * k_sph
    return WarpedCurvatures(profile.z[1:-1], k_rad, k_sph, scalar)


def warped_operator(n: int, k_rad: float, k_sph: float) -> CurvatureOperator:
    """Curvature operator with A = diag(K_sph/2, ..., K_sph/2, K_rad - K_sph/2)."""
    diag = [0.5 * k_sph] * (n - 1) + [k_rad - 0.5 * k_sph]
    return rotationally_symmetric_operator(np.diag(diag))


def soliton_residual(profile: WarpedProfile) -> tuple[FloatArray, FloatArray]:
    """
    Components of Ric - D^2 f on the interior grid.

    Returns:
        (radial residual -(n-1) phi''/phi - f'',
         sphere residual -phi''/phi + (n-2)(1-phi'^2)/phi^2 - f' phi'/phi)

    Raises:
        InputValidationError: If the profile carries no potential f.
    """
    if profile.f is None:
        raise InputValidationError("soliton residual needs a potential f", field="f")
    first, second = _derivatives(profile)
    f, h = profile.f, profile.dz
    f_first = (f[2:] - f[:-2]) / (2.0 * h)
    f_second = ((f[2:] + f[:-2]) - 2.0 * f[1:-1]) / h**2
    phi = profile.phi[1:-1]
    n = profile.n
    radial = -(n - 1) * second / phi - f_second
    sphere = -second / phi + (n - 2) * (1.0 - first**2) / phi**2 - f_first * first / phi
    return radial, sphere


def _flow_rate(phi: FloatArray, h: float, n: int, drift: FloatArray | None) -> FloatArray:
    first = (phi[2:] - phi[:-2]) / (2.0 * h)
    second = ((phi[2:] + phi[:-2]) - 2.0 * phi[1:-1]) / h**2
    rate = second - (n - 2) * (1.0 - first**2) / phi[1:-1]
    if drift is not None:
        rate = rate + drift[1:-1] * first
    return rate


def ricci_flow_step(
    profile: WarpedProfile,
    dt: float,
    drift: FloatArray | None = None,
    time: float | None = None,
) -> WarpedProfile:
    """
    One explicit Heun step of the warped Ricci flow with frozen end values.

    Args:
        profile: Current profile.
        dt: Time step, at most dz^2/4.
        drift: Optional coefficient of phi_z (f' for a steady soliton).
        time: Current flow time, only used in error diagnostics.

    Returns:
        The profile after one step (f carried over unchanged).

    Raises:
        ValueError: If dt violates the stability limit.
        NeckpinchError: If phi becomes nonpositive in the interior.
    """
    h = profile.dz
    if dt <= 0 or dt > h**2 / 4.0:
        raise ValueError(f"dt must be in (0, dz^2/4 = {h**2 / 4.0:.3e}]: {dt}")
    phi0 = profile.phi
    k1 = _flow_rate(phi0, h, profile.n, drift)
    predictor = phi0.copy()
    predictor[1:-1] += dt * k1
    if np.any(predictor[1:-1] <= 0):
        _raise_pinch(profile, predictor, time)
    k2 = _flow_rate(predictor, h, profile.n, drift)
    new = phi0.copy()
    new[1:-1] += 0.5 * dt * (k1 + k2)
    if np.any(new[1:-1] <= 0):
        _raise_pinch(profile, new, time)
    return WarpedProfile(n=profile.n, z=profile.z, phi=new, f=profile.f)


def _raise_pinch(profile: WarpedProfile, phi: FloatArray, time: float | None) -> None:
    idx = int(np.argmin(phi[1:-1])) + 1
    raise NeckpinchError(
        f"warp factor collapsed at z={profile.z[idx]:.6g}",
        z=float(profile.z[idx]),
        time=time,
    )


def evolve(
    profile: WarpedProfile,
    t_end: float,
    dt: float | None = None,
    drift: FloatArray | None = None,
) -> WarpedProfile:
    """Run ricci_flow_step until t_end (dt defaults to dz^2/4)."""
    step = dt if dt is not None else profile.dz**2 / 4.0
    t = 0.0
    current = profile
    while t < t_end - 1e-15:
        h = min(step, t_end - t)
        current = ricci_flow_step(current, h, drift=drift, time=t)
        t += h
    return current


def profile_frame(profile: WarpedProfile) -> pd.DataFrame:
    """
    Tabulate a profile with columns z, phi, f, k_rad, k_sph, R.

    Curvature columns are NaN at the two end points.
    """
    frame = pd.DataFrame({"z": profile.z, "phi": profile.phi})
    frame["f"] = np.nan if profile.f is None else profile.f
    for column in ("k_rad", "k_sph", "R"):
        frame[column] = np.nan
    if profile.z.size >= 5:
        curv = warped_curvatures(profile)
        frame.loc[1 : profile.z.size - 2, "k_rad"] = curv.k_rad
        frame.loc[1 : profile.z.size - 2, "k_sph"] = curv.k_sph
        frame.loc[1 : profile.z.size - 2, "R"] = curv.scalar
    return frame
