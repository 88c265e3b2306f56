"""
Spectral trajectories and their asymptotic profile.

A trajectory is a finite sum h(z, t) = sum_k c_k(z, t) T_k of evolved
mode coefficients times fixed angular tensors. Long necks forget all but
the neutral and growing modes: on a window near the center,

    h ~ omega_bar g_S + beta_bar dz^2 + (-t)^{(n-1)/(2(n-2))} psi g_S,

up to an error that decays like L^{-1/(2(n-2))} in the neck length L.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np
import pandas as pd

from neck_lab.core.exceptions import HypothesisViolationError, InputValidationError
from neck_lab.core.types import FloatArray, Grid, ModeKind, Time, reference_time
from neck_lab.heat.finite_difference import HeatField, mode_grid
from neck_lab.spectral.decomposition import SliceTensor
from neck_lab.spectral.killing import growing_exponent
from neck_lab.spectral.modes import ModeCoefficient, mode_evolve
from neck_lab.spectral.norms import pointwise_norm
from neck_lab.sphere.fields import SphereVectorField
from neck_lab.sphere.harmonics import harmonic_basis, level_eigenvalue
from neck_lab.sphere.polynomials import SpherePolynomial
from neck_lab.sphere.quadrature import random_sphere_points

logger = logging.getLogger(__name__)

EARLY_BOUND: float = 1.0
LATE_BOUND_POWER: int = 10
MAX_WINDOW_TIMES: int = 64
MAX_WINDOW_HEIGHTS: int = 81
NORM_SAMPLES: int = 256
HYPOTHESIS_SLACK: float = 1e-9


@dataclass(frozen=True)
class SpectralMode:
    """
    An evolved coefficient and its angular tensor.

    Attributes:
        coefficient: Mode with its field attached.
        angular: Unit angular tensor T_k.
        level: Harmonic level for scalar modes, -1 otherwise.
    """

    coefficient: ModeCoefficient
    angular: SliceTensor
    level: int = -1

    def __post_init__(self) -> None:
        """A mode without values cannot be part of a trajectory."""
        if self.coefficient.field is None:
            raise InputValidationError("mode coefficient has not been evolved", field="field")

    @property
    def values(self) -> FloatArray:
        """Coefficient values, shape (len(t), len(z))."""
        assert self.coefficient.field is not None
        return self.coefficient.field.values


@dataclass(frozen=True)
class SpectralTrajectory:
    """
    Finite spectral solution of the Lichnerowicz system on a neck.

    Attributes:
        n: Dimension.
        length: Neck length L; the solution lives on |z| <= L/2.
        modes: Evolved modes on a common grid.
    """

    n: int
    length: float
    modes: tuple[SpectralMode, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        """All modes share the z and t grids."""
        if not self.modes:
            raise InputValidationError("trajectory needs at least one mode", field="modes")
        first = self.modes[0].coefficient.field
        assert first is not None
        for mode in self.modes[1:]:
            other = mode.coefficient.field
            assert other is not None
            if other.z.shape != first.z.shape or other.t.shape != first.t.shape:
                raise InputValidationError("modes live on different grids", field="modes")

    @property
    def z(self) -> Grid:
        """Spatial grid."""
        field_ = self.modes[0].coefficient.field
        assert field_ is not None
        return field_.z

    @property
    def t(self) -> Grid:
        """Time grid."""
        field_ = self.modes[0].coefficient.field
        assert field_ is not None
        return field_.t

    def sup_norm(
        self,
        time_index: FloatArray,
        height_index: FloatArray,
        points: FloatArray,
        extra: list[tuple[FloatArray, SliceTensor]] | None = None,
        skip: set[int] | None = None,
    ) -> FloatArray:
        """
        sup over points of |h|_{g(t)} on a sub-grid, shape (len(time_index),).

        Args:
            time_index: Rows of the time grid.
            height_index: Columns of the z grid.
            points: Sphere sample points.
            extra: Additional terms (coefficient per time row, angular tensor).
            skip: Mode indices to leave out.
        """
        skip = skip or set()
        tensors = [m.angular.evaluate(points) for m in self.modes]
        out = np.zeros(len(time_index))
        for row, ti in enumerate(time_index):
            total = np.zeros((len(height_index), points.shape[0]) + tensors[0].shape[1:])
            for k, mode in enumerate(self.modes):
                if k in skip:
                    continue
                coeff = mode.values[ti, height_index]
                total += coeff[:, None, None, None] * tensors[k][None]
            for series, angular in extra or []:
                total += series[row] * angular.evaluate(points)[None]
            norms = pointwise_norm(total, self.n, float(self.t[ti]))
            out[row] = float(np.max(norms))
        return out

    def to_frame(self) -> pd.DataFrame:
        """Long-format table (mode, kind, eigenvalue, t, z, value)."""
        frames = []
        for k, mode in enumerate(self.modes):
            assert mode.coefficient.field is not None
            frame = mode.coefficient.field.to_frame().rename(columns={"u": "value"})
            frame.insert(0, "eigenvalue", mode.coefficient.eigenvalue)
            frame.insert(0, "kind", mode.coefficient.kind.value)
            frame.insert(0, "mode", k)
            frames.append(frame)
        return pd.concat(frames, ignore_index=True)


@dataclass(frozen=True)
class ProfileWindow:
    """
    Region on which the profile residual is measured.

    Attributes:
        z_max: Half-width of the z window.
        t_min: Earliest time of the window (the window ends at the last time).
        fit_fraction: Final fraction of the time range used to fit psi.
    """

    z_max: float = 5.0
    t_min: float = -5.0
    fit_fraction: float = 0.25

    def __post_init__(self) -> None:
        """Validate the window."""
        if self.z_max <= 0:
            raise ValueError(f"z_max must be positive: {self.z_max}")
        if self.t_min >= 0:
            raise ValueError(f"t_min must be negative: {self.t_min}")
        if not 0 < self.fit_fraction <= 1:
            raise ValueError(f"fit_fraction must be in (0, 1]: {self.fit_fraction}")


class ProfileFit(NamedTuple):
    """
    Extracted neutral and growing parts with the remaining error.

    Attributes:
        omega_bar: Slice mean of omega on the (t, z) grid.
        beta_bar: Slice mean of beta on the (t, z) grid.
        psi: First-harmonic vector of the growing mode.
        residual: sup over the window of the remainder.
        length: Neck length L.
    """

    omega_bar: FloatArray
    beta_bar: FloatArray
    psi: FloatArray
    residual: float
    length: float

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready summary with the means at the center and final time."""
        center = self.omega_bar.shape[1] // 2
        return {
            "omega_bar": float(self.omega_bar[-1, center]),
            "beta_bar": float(self.beta_bar[-1, center]),
            "psi": [float(v) for v in self.psi],
            "residual": self.residual,
            "L": self.length,
        }


def _subsample(indices: FloatArray, limit: int) -> FloatArray:
    if indices.size <= limit:
        return indices
    picks = np.unique(np.linspace(0, indices.size - 1, limit).round().astype(int))
    return indices[picks]


def _constant_value(poly: SpherePolynomial) -> float:
    return poly.integrate() / SpherePolynomial.constant(poly.n, 1.0).integrate()


def check_hypotheses(trajectory: SpectralTrajectory, points: FloatArray) -> None:
    """
    |h| <= 1 for t <= -L/4 and |h| <= L^10 afterwards, on the sampled grid.

    Raises:
        HypothesisViolationError: With the violated bound and the measured sup.
    """
    t = trajectory.t
    heights = _subsample(np.arange(trajectory.z.size), MAX_WINDOW_HEIGHTS)
    early = np.flatnonzero(t <= -trajectory.length / 4.0)
    late = np.flatnonzero(t > -trajectory.length / 4.0)
    checks = ((early, EARLY_BOUND), (late, trajectory.length**LATE_BOUND_POWER))
    for rows, bound in checks:
        if rows.size == 0:
            continue
        rows = _subsample(rows, MAX_WINDOW_TIMES)
        measured = float(np.max(trajectory.sup_norm(rows, heights, points)))
        if measured > bound * (1.0 + HYPOTHESIS_SLACK):
            raise HypothesisViolationError(
                f"|h| reaches {measured:.4g}, above the bound {bound:.4g}",
                bound=bound,
                measured=measured,
            )


def asymptotic_profile(
    trajectory: SpectralTrajectory,
    window: ProfileWindow | None = None,
    points: FloatArray | None = None,
    check: bool = True,
) -> ProfileFit:
    """
    Extract omega_bar, beta_bar and psi, and measure what is left.

    omega_bar and beta_bar are the level-0 omega and beta coefficients. psi
    is the least-squares fit of the level-1 omega coefficients against
    (-t)^{(n-1)/(2(n-2))} over the final fit_fraction of the time range,
    restricted to the z window.

    Args:
        trajectory: Evolved spectral solution.
        window: Residual and fit window.
        points: Sphere points for sup norms.
        check: Enforce the size hypotheses first.

    Returns:
        ProfileFit.

    Raises:
        HypothesisViolationError: If check is set and the bounds fail.
    """
    window = window or ProfileWindow()
    n = trajectory.n
    pts = random_sphere_points(n, NORM_SAMPLES, seed=1) if points is None else points
    if check:
        check_hypotheses(trajectory, pts)

    t, z = trajectory.t, trajectory.z
    shape = (t.size, z.size)
    omega_bar = np.zeros(shape)
    beta_bar = np.zeros(shape)
    first_harmonic = np.zeros(shape + (n,))
    neutral: set[int] = set()
    for k, mode in enumerate(trajectory.modes):
        kind = mode.coefficient.kind
        if mode.level == 0 and kind is ModeKind.OMEGA:
            omega_bar += mode.values * _constant_value(mode.angular.omega)
            neutral.add(k)
        elif mode.level == 0 and kind is ModeKind.BETA:
            beta_bar += mode.values * _constant_value(mode.angular.beta)
            neutral.add(k)
        elif mode.level == 1 and kind is ModeKind.OMEGA:
            direction = mode.angular.omega.parts.get(1, np.zeros(n))
            first_harmonic += mode.values[:, :, None] * direction[None, None, :]

    heights = np.flatnonzero(np.abs(z) <= window.z_max)
    if heights.size == 0:
        raise InputValidationError("profile window contains no grid heights", field="z_max")
    span = t[-1] - t[0]
    fit_rows = np.flatnonzero(t >= t[-1] - window.fit_fraction * span)
    weights = (-t[fit_rows]) ** growing_exponent(n)
    samples = first_harmonic[np.ix_(fit_rows, heights)]
    numerator = np.einsum("r,rzi->i", weights, samples)
    denominator = float(np.sum(weights**2)) * heights.size
    psi = numerator / denominator

    rows = np.flatnonzero(t >= window.t_min)
    if rows.size == 0:
        raise InputValidationError("profile window contains no grid times", field="t_min")
    rows = _subsample(rows, MAX_WINDOW_TIMES)
    heights = _subsample(heights, MAX_WINDOW_HEIGHTS)
    growing = -((-t[rows]) ** growing_exponent(n))
    angular = SliceTensor.of_omega(SpherePolynomial.linear(psi))
    residual = float(
        np.max(trajectory.sup_norm(rows, heights, pts, extra=[(growing, angular)], skip=neutral))
    )
    logger.info(
        "Profile fit on L = %.0f: |psi| = %.4g, residual = %.4g",
        trajectory.length,
        float(np.linalg.norm(psi)),
        residual,
    )
    return ProfileFit(omega_bar, beta_bar, psi, residual, trajectory.length)


# =============================================================================
# RANDOM LEVEL-MIXED TRAJECTORIES
# =============================================================================


CatalogEntry = tuple[ModeKind, float, int, SliceTensor]


def _angular_catalog(n: int, rng: np.random.Generator) -> list[CatalogEntry]:
    catalog: list[CatalogEntry] = []
    for kind in (ModeKind.OMEGA, ModeKind.BETA):
        for level in (0, 1, 2):
            basis = harmonic_basis(n, level)
            poly = SpherePolynomial.zero(n)
            for u in basis:
                poly = poly + u.polynomial.scale(float(rng.uniform(-1.0, 1.0)))
            if kind is ModeKind.OMEGA:
                tensor = SliceTensor.of_omega(poly)
            else:
                tensor = SliceTensor.of_beta(poly)
            catalog.append((kind, level_eigenvalue(n, level), level, tensor))
    s = rng.uniform(-1.0, 1.0, (n, n))
    s = 0.5 * (s + s.T)
    s -= np.trace(s) / n * np.eye(n)
    catalog.append((ModeKind.CHI, 2.0, -1, SliceTensor.of_chi(s)))
    m = rng.uniform(-1.0, 1.0, (n, n))
    antisym = 0.5 * (m - m.T)
    sym = 0.5 * (m + m.T)
    sym -= np.trace(sym) / n * np.eye(n)
    zero_v, zero_m = np.zeros(n), np.zeros((n, n))
    sigma_fields = [
        (1.0, SphereVectorField(rng.uniform(-1.0, 1.0, n), zero_m)),
        (float(n - 2), SphereVectorField(zero_v, antisym)),
        (float(n + 2), SphereVectorField(zero_v, sym)),
    ]
    for mu, sigma in sigma_fields:
        catalog.append((ModeKind.SIGMA, mu, -1, SliceTensor.of_sigma(sigma)))
    return catalog


def _time_weight(kind: ModeKind, n: int, t: Time) -> float:
    """Size of a coefficient with |component|_{g(t)} of order one."""
    r2 = -2.0 * (n - 2) * t
    if kind in (ModeKind.OMEGA, ModeKind.CHI):
        return r2
    if kind is ModeKind.SIGMA:
        return float(np.sqrt(r2))
    return 1.0


def random_trajectory(
    n: int,
    length: float,
    seed: int = 0,
    dz: float = 0.25,
    dt: float = 0.05,
    kinds: tuple[ModeKind, ...] | None = None,
) -> SpectralTrajectory:
    """
    Level-mixed solution on |z| <= L/2, -L/2 <= t <= t_n with |h| <= 1 early.

    Each catalog mode gets smooth random initial data with |component| of
    order one at t0 = -L/2; the substituted coefficient keeps its initial
    boundary values. The whole solution is then scaled so that the sampled
    sup over the early region is 0.9.

    Args:
        n: Dimension.
        length: Neck length L.
        seed: Seed of the angular and spatial coefficients; the same seed
            gives the same profile shapes for every L.
        dz: Spatial step.
        dt: Time step.
        kinds: Restrict to these mode kinds.
    """
    if length <= 0:
        raise ValueError(f"length must be positive: {length}")
    rng = np.random.default_rng(seed)
    half = length / 2.0
    t0, t1 = -half, reference_time(n)
    z = mode_grid(half, dz)
    steps = max(int(np.ceil((t1 - t0) / dt)), 2)
    t = np.linspace(t0, t1, steps + 1)

    modes: list[SpectralMode] = []
    for kind, eigenvalue, level, angular in _angular_catalog(n, rng):
        amplitudes = rng.uniform(-1.0, 1.0, 3)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        if kinds is not None and kind not in kinds:
            continue
        shape = amplitudes[0] + 0.3 * amplitudes[1] * np.cos(np.pi * z / length + phase)
        shape = shape + 0.1 * amplitudes[2] * np.sin(2.0 * np.pi * z / length)
        initial = _time_weight(kind, n, t0) * shape
        mode = ModeCoefficient(n, kind, eigenvalue)
        p = mode.power
        left_value, right_value = float(initial[0]), float(initial[-1])

        def left(s: float, v: float = left_value, p: float = p) -> float:
            return v * (s / t0) ** p

        def right(s: float, v: float = right_value, p: float = p) -> float:
            return v * (s / t0) ** p

        evolved = mode_evolve(mode, initial, left, right, z, t)
        modes.append(SpectralMode(evolved, angular, level))

    if not modes:
        raise InputValidationError("no catalog mode matches the requested kinds", field="kinds")
    raw = SpectralTrajectory(n, length, tuple(modes))
    points = random_sphere_points(n, NORM_SAMPLES, seed=1)
    early = _subsample(np.flatnonzero(t <= -length / 4.0), MAX_WINDOW_TIMES)
    heights = _subsample(np.arange(z.size), MAX_WINDOW_HEIGHTS)
    peak = float(np.max(raw.sup_norm(early, heights, points)))
    factor = 0.9 / peak
    scaled = []
    for mode in modes:
        assert mode.coefficient.field is not None
        values = mode.coefficient.field.values * factor
        field_ = HeatField(z=z, t=t, values=values)
        scaled.append(SpectralMode(mode.coefficient.with_field(field_), mode.angular, mode.level))
    return SpectralTrajectory(n, length, tuple(scaled))


class DecayRow(NamedTuple):
    """Profile residual for one neck length."""

    length: float
    residual: float


def profile_decay(
    n: int,
    lengths: tuple[float, ...] = (20.0, 40.0, 80.0),
    seed: int = 0,
    window: ProfileWindow | None = None,
    kinds: tuple[ModeKind, ...] | None = None,
) -> tuple[list[DecayRow], float]:
    """
    Residual against L and the fitted log-log slope.

    The same seed is used for every L, so only the neck length changes.
    """
    rows = []
    for length in lengths:
        trajectory = random_trajectory(n, length, seed=seed, kinds=kinds)
        fit = asymptotic_profile(trajectory, window)
        rows.append(DecayRow(length, fit.residual))
    slope = float(np.polyfit(np.log(lengths), np.log([r.residual for r in rows]), 1)[0])
    logger.info("Profile residual slope %.3f over L = %s", slope, lengths)
    return rows, slope
