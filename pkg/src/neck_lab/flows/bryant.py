"""
The Bryant steady soliton by integration from the tip.

With u = phi' and w = f' the steady soliton equations Ric = D^2 f become

    phi' = u
    u'   = (n-2)(1 - u^2)/phi - w u
    w'   = -(n-1) u'/phi
    f'   = w

The system is singular at the tip z = 0, so integration starts at z0 from
the regular series phi = z - c3 z^3, w = z/n with c3 = 1/(6n(n-1)), which
makes R = 1 at the tip. R + w^2 is conserved; the profile is rescaled by
the soliton scaling so the conserved value is exactly 1.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from typing import NamedTuple

import numpy as np
from scipy.integrate import solve_ivp

from neck_lab.core.exceptions import DimensionError, ShootingError
from neck_lab.core.types import FloatArray
from neck_lab.flows.warped import WarpedProfile

logger = logging.getLogger(__name__)

TIP_START: float = 1e-3
"""Height at which the tip series hands over to the ODE integrator."""

CONSERVATION_TOLERANCE: float = 1e-8


class BryantSoliton(NamedTuple):
    """
    Normalized Bryant soliton on a uniform grid starting at the tip.

    Attributes:
        profile: Warp factor and potential (f = 0 at the tip).
        grad_f: f' on the grid.
        scalar: Scalar curvature evaluated from the ODE right-hand side.
        conserved: R + f'^2 on the grid after rescaling.
        raw_conserved: Mean of R + f'^2 before rescaling.
        scale: Length scale applied to reach R + f'^2 = 1.
    """

    profile: WarpedProfile
    grad_f: FloatArray
    scalar: FloatArray
    conserved: FloatArray
    raw_conserved: float
    scale: float


def tip_coefficient(n: int) -> float:
    """c3 = 1 / (6 n (n-1)) in phi = z - c3 z^3 + O(z^5)."""
    return 1.0 / (6.0 * n * (n - 1))


def tip_coefficients(n: int) -> tuple[float, float, float, float]:
    """
    Series coefficients of the regular solution at the tip.

    phi = z + a z^3 + p z^5 and f' = b z + q z^3 with R(0) = 1, so that
    a = -1/(6n(n-1)) and b = 1/n.
    """
    a = -tip_coefficient(n)
    b = 1.0 / n
    p = a * a * (39 * n - 30) / (10.0 * (n + 2))
    q = -(n - 1) * (20 * p - 6 * a * a) / 3.0
    return a, b, p, q


def _rhs(n: int) -> Callable[[float, FloatArray], FloatArray]:
    def rhs(_z: float, y: FloatArray) -> FloatArray:
        phi, u, w, _f = y
        du = (n - 2) * (1.0 - u * u) / phi - w * u
        dw = -(n - 1) * du / phi
        return np.array([u, du, dw, w])

    return rhs


def _tip_state(n: int, z0: float) -> FloatArray:
    a, b, p, q = tip_coefficients(n)
    return np.array(
        [
            z0 + a * z0**3 + p * z0**5,
            1.0 + 3 * a * z0**2 + 5 * p * z0**4,
            b * z0 + q * z0**3,
            b * z0**2 / 2 + q * z0**4 / 4,
        ]
    )


def _scalar_from_state(n: int, phi: FloatArray, u: FloatArray, w: FloatArray) -> FloatArray:
    du = (n - 2) * (1.0 - u * u) / phi - w * u
    k_rad = -du / phi
    k_sph = (1.0 - u * u) / phi**2
    return 2.0 * (n - 1) * k_rad + (n - 1) * (n - 2) * k_sph


def shoot_bryant(n: int, z_max: float, dz: float = 1e-3, z0: float = TIP_START) -> BryantSoliton:
    """
    Integrate the soliton from the tip and normalize R + |grad f|^2 = 1.

    Args:
        n: Dimension (>= 4).
        z_max: Extent of the profile (> 0), measured after normalization.
        dz: Grid spacing.
        z0: Handover height from the tip series.

    Returns:
        BryantSoliton with the normalized profile and diagnostics.

    Raises:
        ShootingError: If the integrator fails or the conserved quantity drifts.
    """
    if n < 4:
        raise DimensionError(f"n must be at least 4: {n}", n=n, required=4)
    if z_max <= 0:
        raise ValueError(f"z_max must be positive: {z_max}")
    if dz <= 0 or dz >= z_max:
        raise ValueError(f"dz must be in (0, z_max): {dz}")

    # integrate a little past z_max so the rescaled grid stays covered
    raw_end = 1.1 * z_max + 1.0
    solution = solve_ivp(
        _rhs(n),
        (z0, raw_end),
        _tip_state(n, z0),
        method="DOP853",
        rtol=1e-12,
        atol=1e-14,
        dense_output=True,
    )
    if not solution.success:
        raise ShootingError(f"soliton integration failed: {solution.message}")

    probe = np.linspace(z0, raw_end, 2001)
    phi_p, u_p, w_p, _ = solution.sol(probe)
    conserved_raw = _scalar_from_state(n, phi_p, u_p, w_p) + w_p**2
    raw = float(np.mean(conserved_raw))
    spread = float(np.ptp(conserved_raw))
    if raw <= 0 or spread > CONSERVATION_TOLERANCE * raw:
        raise ShootingError(
            f"R + |grad f|^2 not conserved along the soliton (spread {spread:.3e})",
            residual=spread,
        )

    # phi_s(z) = s phi(z/s), f_s(z) = f(z/s) scales R + f'^2 by 1/s^2
    scale = math.sqrt(raw)
    z = np.arange(0.0, z_max + 0.5 * dz, dz)
    raw_z = z / scale
    phi = np.zeros_like(z)
    u = np.ones_like(z)
    w = np.zeros_like(z)
    f = np.zeros_like(z)
    inside = raw_z >= z0
    tip = ~inside
    phi_r, u_r, w_r, f_r = solution.sol(raw_z[inside])
    phi[inside], u[inside], w[inside], f[inside] = scale * phi_r, u_r, w_r / scale, f_r
    tip_states = np.array([_tip_state(n, float(x)) for x in raw_z[tip]]).reshape(-1, 4)
    phi[tip] = scale * tip_states[:, 0]
    u[tip] = tip_states[:, 1]
    w[tip] = tip_states[:, 2] / scale
    f[tip] = tip_states[:, 3]

    scalar = np.full_like(z, 1.0 / raw)
    positive = phi > 0
    scalar[positive] = _scalar_from_state(n, phi[positive], u[positive], w[positive])
    conserved = scalar + w**2
    logger.debug("Bryant soliton n=%d: raw conserved %.15g, scale %.15g", n, raw, scale)
    profile = WarpedProfile(n=n, z=z, phi=phi, f=f)
    return BryantSoliton(profile, w, scalar, conserved, raw, scale)


def bryant_profile(n: int, z_max: float, dz: float = 1e-3) -> WarpedProfile:
    """Normalized Bryant soliton profile with potential, see shoot_bryant."""
    return shoot_bryant(n, z_max, dz).profile


def scalar_decay_ratio(soliton: BryantSoliton, z_min: float = 10.0) -> FloatArray:
    """R(z) z for z >= z_min (tends to (n-1)/2)."""
    mask = soliton.profile.z >= z_min
    return np.asarray(soliton.scalar[mask] * soliton.profile.z[mask])
