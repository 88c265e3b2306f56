"""
Symmetry deficits of a rotation family on a neck sample.

For U^a = c M^a x on g(t) = lambda(t) g_hat and the neck scale r,

    deficit_1 = sup sum_a sum_{l <= 2} r^{2l} |D^l (L_{U^a} g(t))|^2
    deficit_2 = sup sum_a r^{-2} <U^a, nu>^2
    deficit_3 = max over leaves of sum_{a,b} |delta_ab - normalized Gram_ab|^2

over the band |z - z_bar| <= 100 r and the window [t_bar - 100 r^2, t_bar].
On g_hat = dz^2 + (w0 + tau <x, e>) g_S a rotation only moves the tilt,
L_U g_hat = tau(z) <e, c M x> g_S, so deficit_1 is carried by tau and its
z-derivatives and deficit_2 by the slope of the CMC leaves. Both see the
family only through G = sum_a (c M^a e)(c M^a e)^T.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from typing import NamedTuple

import numpy as np
import pandas as pd
from scipy.linalg import null_space

from neck_lab.core.exceptions import DimensionError, InputValidationError
from neck_lab.core.types import FloatArray
from neck_lab.foliation.foliate import Foliation, foliate, leaf_gram
from neck_lab.foliation.leaf import BAND_MARGIN, Leaf
from neck_lab.foliation.metric import NeckMetric
from neck_lab.sphere.rotations import RotationFamily, canonical_scale
from neck_lab.symmetry.neck import NECK_SPAN, NeckSample

logger = logging.getLogger(__name__)

LEAF_COUNT: int = 5
WINDOW_TIMES: int = 5
BAND_SAMPLES: int = 401
THETA_SAMPLES: int = 129
LIPSCHITZ_STEP: float = 0.5


class SymmetryReport(NamedTuple):
    """
    Deficits of one family on one sample.

    Attributes:
        deficits: (deficit_1, deficit_2, deficit_3), each a sup over the window.
        epsilon: sqrt of the largest deficit.
        window: Time window the deficits were taken over.
        length: Length L of the improvement window, when there is one.
        times: Sampled window times.
        per_time: Deficits at each sampled time.
    """

    deficits: tuple[float, float, float]
    epsilon: float
    window: tuple[float, float]
    length: float | None = None
    times: tuple[float, ...] = ()
    per_time: tuple[tuple[float, float, float], ...] = ()

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary."""
        return {
            "deficits": list(self.deficits),
            "epsilon": self.epsilon,
            "window": list(self.window),
            "L": self.length,
        }

    def to_frame(self) -> pd.DataFrame:
        """One row per sampled window time."""
        rows = np.array(self.per_time).reshape(-1, 3)
        return pd.DataFrame(
            {
                "t": list(self.times),
                "deficit_1": rows[:, 0],
                "deficit_2": rows[:, 1],
                "deficit_3": rows[:, 2],
            }
        )


def axis_spectrum(
    family: RotationFamily, axis: FloatArray, scale: float
) -> tuple[float, float, float]:
    """
    Extreme eigenvalues of G on the complement of e, and tr G.

    Returns:
        (lambda_min, lambda_max, trace) for G = sum_a (c M^a e)(c M^a e)^T.
    """
    images = scale * np.einsum("aij,j->ai", family.matrices, axis)
    gram = images.T @ images
    basis = null_space(axis[None, :])
    eigenvalues = np.linalg.eigvalsh(basis.T @ gram @ basis)
    return float(eigenvalues[0]), float(eigenvalues[-1]), float(np.trace(gram))


def lie_levels(
    metric: NeckMetric, spectrum: tuple[float, float, float], z: FloatArray, theta: FloatArray
) -> FloatArray:
    """
    sum_a |D^l L_U g_hat|^2 for l = 0, 1, 2 at the extreme directions of G.

    z-derivatives act on tau; sphere derivatives act on <e, c M x> in the
    metric W g_S, whose level-1 harmonic has |grad|^2 = tr G - q and
    |Hess|^2 = (n - 1) q with q = sin^2(theta) x (lambda_min or lambda_max).

    Returns:
        Array of shape (3, len(z), len(theta), 2).
    """
    n = metric.n
    lam_min, lam_max, trace = spectrum
    zz, tt = np.meshgrid(z, theta, indexing="ij")
    warp = metric.warp(zz, tt)
    tilts = [metric.tilt(zz), metric.tilt.deriv(1)(zz), metric.tilt.deriv(2)(zz)]
    sin2 = np.sin(tt) ** 2
    q = np.stack([sin2 * lam_min, sin2 * lam_max], axis=-1)
    sphere = (q, trace - q, (n - 1) * q)
    levels = np.zeros((3,) + q.shape)
    for l in range(3):
        for j in range(l + 1):
            k = l - j
            levels[l] += math.comb(l, j) * (tilts[j] ** 2 / warp**k)[..., None] * sphere[k]
        levels[l] *= ((n - 1) / warp**2)[..., None]
    return levels


def normal_overlap(metric: NeckMetric, leaf: Leaf, lam_max: float) -> float:
    """sup sum_a <U^a, nu>^2 on a leaf, measured in g_hat."""
    theta = np.linspace(0.0, math.pi, THETA_SAMPLES)
    jet = leaf.jet(theta)
    warp = metric.warp(jet.u, theta)
    slope2 = jet.du**2 / (1.0 + jet.du**2 / warp)
    return float(np.max(slope2)) * lam_max


def default_heights(metric: NeckMetric, band: tuple[float, float]) -> FloatArray:
    """LEAF_COUNT basepoints spread over the band, inside the leaf range."""
    limit = metric.half_length - BAND_MARGIN
    low, high = max(band[0], -limit), min(band[1], limit)
    if low > high:
        raise InputValidationError(
            f"neck band [{band[0]:.4g}, {band[1]:.4g}] misses the leaf range [-{limit}, {limit}]",
            field="band",
        )
    return np.unique(np.linspace(low, high, LEAF_COUNT))


def symmetry_deficit(
    sample: NeckSample,
    family: RotationFamily,
    foliation: Foliation | None = None,
    scale: float | None = None,
    span: float = NECK_SPAN,
    times: int = WINDOW_TIMES,
    jobs: int = 1,
) -> SymmetryReport:
    """
    The three symmetry deficits of a family on a neck sample.

    Leaves and the metric quantities are computed once on g_hat; each
    window time only changes the neck scale rho_t = r/sqrt(lambda(t)).

    Args:
        sample: The neck sample.
        family: Rotation matrices M^a.
        foliation: CMC leaves of the sample's metric; solved over the band
            when omitted.
        scale: Factor c; canonical when omitted.
        span: Band radius and window length in units of r and r^2.
        times: Number of window times, at least 2.
        jobs: Worker processes for the foliation.

    Returns:
        SymmetryReport.

    Raises:
        WindowError: If the sample does not cover the window.
        InputValidationError: If the foliation belongs to another metric or
            no leaf lies in the band.
        DimensionError: If the family and metric dimensions differ.

    Example:
        >>> sample = NeckSample.at_unit_radius(NeckMetric.cylinder(4))
        >>> report = symmetry_deficit(sample, RotationFamily.canonical(4))
        >>> report.epsilon < 1e-5
        True
    """
    metric = sample.metric
    n = metric.n
    if family.n != n:
        raise DimensionError(
            f"family dimension {family.n} differs from {n}", n=family.n, required=n
        )
    if times < 2:
        raise ValueError(f"times must be at least 2: {times}")
    c = canonical_scale(n) if scale is None else scale
    start, end = sample.require_window(span)
    band = sample.band(span)
    if foliation is None:
        foliation = foliate(metric, default_heights(metric, band), jobs=jobs)
    elif foliation.metric_hash != metric.metric_hash():
        raise InputValidationError("foliation belongs to a different metric", field="foliation")
    leaves = [item.leaf for item in foliation.leaves if band[0] <= item.leaf.z0 <= band[1]]
    if not leaves:
        raise InputValidationError("no foliation leaf lies in the neck band", field="foliation")

    spectrum = axis_spectrum(family, metric.axis, c)
    z = np.linspace(band[0], band[1], BAND_SAMPLES)
    theta = np.linspace(0.0, math.pi, THETA_SAMPLES)
    levels = lie_levels(metric, spectrum, z, theta)
    overlap = max(normal_overlap(metric, leaf, spectrum[1]) for leaf in leaves)
    identity = np.eye(family.size)
    gram = max(
        float(np.sum((identity - leaf_gram(metric, leaf, family, c)) ** 2)) for leaf in leaves
    )

    window_times = np.linspace(start, end, times)
    rows: list[tuple[float, float, float]] = []
    for t in window_times:
        rho2 = sample.rho(float(t)) ** 2
        lie = float(np.max(levels[0] + rho2 * levels[1] + rho2**2 * levels[2]))
        rows.append((lie, overlap / rho2, gram))
    worst = np.max(np.array(rows), axis=0)
    deficits = (float(worst[0]), float(worst[1]), float(worst[2]))
    epsilon = math.sqrt(max(deficits))
    logger.info(
        "Symmetry deficits %.3e %.3e %.3e over %d leaves, epsilon %.3e",
        *deficits,
        len(leaves),
        epsilon,
    )
    return SymmetryReport(
        deficits, epsilon, (start, end), None, tuple(float(t) for t in window_times), tuple(rows)
    )


# =============================================================================
# SENSITIVITY
# =============================================================================


class DeficitSensitivity(NamedTuple):
    """
    Empirical Lipschitz constants of epsilon.

    Attributes:
        center: |d epsilon| per unit r of center displacement.
        time: |d epsilon| per unit r^2 of center time displacement.
        epsilon: epsilon at the unperturbed center.
    """

    center: float
    time: float
    epsilon: float


def deficit_lipschitz(
    sample: NeckSample,
    family: RotationFamily,
    foliation: Foliation | None = None,
    step: float = LIPSCHITZ_STEP,
    scale: float | None = None,
    span: float = NECK_SPAN,
) -> DeficitSensitivity:
    """
    Difference quotients of epsilon in the center point and time.

    The center moves by step * rho in z and the center time by -step * r^2;
    all three evaluations share one foliation.

    Raises:
        WindowError: If the earlier center time is not covered.
    """
    if step <= 0:
        raise ValueError(f"step must be positive: {step}")
    if foliation is None:
        foliation = foliate(sample.metric, default_heights(sample.metric, sample.band(span)))
    base = symmetry_deficit(sample, family, foliation, scale, span).epsilon
    edge = sample.metric.half_length
    shifted_z = min(edge, sample.center_z + step * sample.rho())
    moved = dataclasses.replace(sample, center_z=shifted_z)
    earlier = dataclasses.replace(sample, t_bar=sample.t_bar - step * sample.radius**2)
    moved_eps = symmetry_deficit(moved, family, foliation, scale, span).epsilon
    earlier_eps = symmetry_deficit(earlier, family, foliation, scale, span).epsilon
    distance = abs(shifted_z - sample.center_z) / sample.rho()
    center = abs(moved_eps - base) / distance if distance > 0 else 0.0
    return DeficitSensitivity(center, abs(earlier_eps - base) / step, base)

