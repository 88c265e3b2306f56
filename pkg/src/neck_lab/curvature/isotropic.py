"""
Minimization of the isotropic-curvature form over orthonormal four-frames.

The PIC, PIC1 and PIC2 conditions quantify over every orthonormal
four-frame (and over lambda, mu in [0, 1]). This module computes the
minimum by seeded random frame sampling followed by projected-gradient
refinement on the Stiefel manifold of orthonormal n x 4 frames:

1. Frames are drawn as QR factors of Gaussian matrices (Haar measure).
2. For every frame the biquadratic in (lambda, mu) is minimized exactly
   over the corners, the edges and the interior critical points.
3. The Euclidean gradient is projected onto the tangent space
   G - E sym(E^T G) and the step is retracted with a QR factorization.

Frames are refined independently, so the minimum over a seed prefix of
B frames can only decrease when more frames are added.
"""

from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np

from neck_lab.core.exceptions import DimensionError
from neck_lab.core.types import FloatArray, PICMode, UniformPICCriterion
from neck_lab.curvature.blocks import block_decompose_4d
from neck_lab.curvature.operator import CurvatureOperator, FourFrame

logger = logging.getLogger(__name__)

GRADIENT_TOLERANCE: float = 1e-6
"""Riemannian gradient norm below which a refined frame counts as converged."""


class MinIsotropicResult(NamedTuple):
    """Result of min_isotropic."""

    value: float
    frame: FourFrame
    converged: bool
    gradient_norm: float


class UniformPICResult(NamedTuple):
    """Result of is_uniformly_pic: the predicate and its signed margin."""

    satisfied: bool
    margin: float
    criterion: UniformPICCriterion


# =============================================================================
# BATCHED FORM EVALUATION
# =============================================================================


def _contract(r: FloatArray, u: FloatArray, v: FloatArray, w: FloatArray) -> FloatArray:
    """Batched covector R(., u, v, w) for vectors of shape (B, n)."""
    return np.einsum("ijkl,bj,bk,bl->bi", r, u, v, w, optimize=True)


def _dot(a: FloatArray, b: FloatArray) -> FloatArray:
    return np.einsum("bi,bi->b", a, b)


def _form_terms(
    r: FloatArray, frames: FloatArray
) -> tuple[FloatArray, FloatArray, FloatArray, FloatArray, FloatArray, list[FloatArray]]:
    """
    Coefficients of the biquadratic and their frame gradients.

    Returns S13, S14, S23, S24, T1234 (each of shape (B,)) and a list of
    (B, n) covectors needed to assemble the gradient:
    [d13_1, d13_3, d14_1, d14_4, d23_2, d23_3, d24_2, d24_4, dT_1, dT_2, dT_3, dT_4].
    """
    e1, e2, e3, e4 = (frames[:, :, k] for k in range(4))

    c13_1 = _contract(r, e3, e1, e3)
    c13_3 = _contract(r, e1, e3, e1)
    c14_1 = _contract(r, e4, e1, e4)
    c14_4 = _contract(r, e1, e4, e1)
    c23_2 = _contract(r, e3, e2, e3)
    c23_3 = _contract(r, e2, e3, e2)
    c24_2 = _contract(r, e4, e2, e4)
    c24_4 = _contract(r, e2, e4, e2)
    ct_1 = _contract(r, e2, e3, e4)
    ct_2 = -_contract(r, e1, e3, e4)
    ct_3 = _contract(r, e4, e1, e2)
    ct_4 = -_contract(r, e3, e1, e2)

    s13 = _dot(e1, c13_1)
    s14 = _dot(e1, c14_1)
    s23 = _dot(e2, c23_2)
    s24 = _dot(e2, c24_2)
    t = _dot(e1, ct_1)
    grads = [
        2 * c13_1, 2 * c13_3, 2 * c14_1, 2 * c14_4,
        2 * c23_2, 2 * c23_3, 2 * c24_2, 2 * c24_4,
        ct_1, ct_2, ct_3, ct_4,
    ]  # fmt: skip
    return s13, s14, s23, s24, t, grads


def _biquadratic(
    a: FloatArray,
    b: FloatArray,
    c: FloatArray,
    d: FloatArray,
    e: FloatArray,
    lam: FloatArray,
    mu: FloatArray,
) -> FloatArray:
    return a + b * lam**2 + c * mu**2 + d * lam**2 * mu**2 - 2 * e * lam * mu


def _clip_ratio(num: FloatArray, den: FloatArray) -> FloatArray:
    """Vertex num/den of a convex parabola clipped to [0, 1], NaN where not convex."""
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(den > 0, num / np.where(den > 0, den, 1.0), np.nan)
    return np.clip(ratio, 0.0, 1.0)


def minimize_parameters(
    a: FloatArray,
    b: FloatArray,
    c: FloatArray,
    d: FloatArray,
    e: FloatArray,
    mode: PICMode,
) -> tuple[FloatArray, FloatArray, FloatArray]:
    """
    Exact minimum of a + b l^2 + c m^2 + d l^2 m^2 - 2 e l m over the mode's box.

    PIC fixes l = m = 1, PIC1 fixes m = 1, PIC2 searches [0, 1]^2. The
    candidate set (corners, edge vertices, interior critical points) contains
    every local minimum of the biquadratic on the box.

    Returns:
        (value, lam, mu) arrays of shape (B,).
    """
    ones = np.ones_like(a)
    zeros = np.zeros_like(a)

    if mode is PICMode.PIC:
        return _biquadratic(a, b, c, d, e, ones, ones), ones, ones

    if mode is PICMode.PIC1:
        lam_cands = [zeros, ones, _clip_ratio(e, b + d)]
        mu_cands = [ones, ones, ones]
    else:
        lam_cands = [zeros, zeros, ones, ones]
        mu_cands = [zeros, ones, zeros, ones]
        # edges lam = 0, lam = 1 with optimal mu; mu = 0, mu = 1 with optimal lam
        for fixed in (zeros, ones):
            lam_cands.append(fixed)
            mu_cands.append(_clip_ratio(e * fixed, c + d * fixed**2))
            mu_cands.append(fixed)
            lam_cands.append(_clip_ratio(e * fixed, b + d * fixed**2))
        # interior: b l^2 = c m^2 and b + d s^2 l^2 = e s with m = s l
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(c != 0, b / np.where(c != 0, c, 1.0), np.nan)
            s = np.where(ratio > 0, np.sqrt(np.abs(ratio)), np.nan)
            lam_sq = (e * s - b) / (d * s**2)
            lam_int = np.where(lam_sq > 0, np.sqrt(np.abs(lam_sq)), np.nan)
            mu_int = s * lam_int
        inside = (lam_int <= 1.0) & (mu_int <= 1.0)
        lam_cands.append(np.where(inside, lam_int, np.nan))
        mu_cands.append(np.where(inside, mu_int, np.nan))

    lam_all = np.stack(lam_cands, axis=1)
    mu_all = np.stack(mu_cands, axis=1)
    values = _biquadratic(
        a[:, None], b[:, None], c[:, None], d[:, None], e[:, None], lam_all, mu_all
    )
    values = np.where(np.isnan(values), np.inf, values)
    best = np.argmin(values, axis=1)
    rows = np.arange(a.shape[0])
    return values[rows, best], lam_all[rows, best], mu_all[rows, best]


def evaluate_frames(
    operator: CurvatureOperator, frames: FloatArray, mode: PICMode
) -> tuple[FloatArray, FloatArray, FloatArray, FloatArray]:
    """
    Minimized form values and Euclidean frame gradients for a batch.

    Args:
        operator: Curvature operator in dimension n.
        frames: Array of shape (B, n, 4) with orthonormal columns.
        mode: Which parameters are free.

    Returns:
        (values, lam, mu, gradient) where gradient has shape (B, n, 4). The
        gradient treats (lam, mu) as fixed at their optimum (envelope rule).
    """
    a, b, c, d, e, g = _form_terms(operator.components, frames)
    values, lam, mu = minimize_parameters(a, b, c, d, e, mode)
    l2, m2, lm = lam**2, mu**2, lam * mu
    grad = np.zeros_like(frames)
    grad[:, :, 0] = g[0] + l2[:, None] * g[2] - 2 * lm[:, None] * g[8]
    grad[:, :, 1] = m2[:, None] * g[4] + (l2 * m2)[:, None] * g[6] - 2 * lm[:, None] * g[9]
    grad[:, :, 2] = g[1] + m2[:, None] * g[5] - 2 * lm[:, None] * g[10]
    grad[:, :, 3] = l2[:, None] * g[3] + (l2 * m2)[:, None] * g[7] - 2 * lm[:, None] * g[11]
    return values, lam, mu, grad


# =============================================================================
# STIEFEL GEOMETRY
# =============================================================================


def random_frames(n: int, count: int, rng: np.random.Generator) -> FloatArray:
    """Haar-distributed orthonormal n x 4 frames, shape (count, n, 4)."""
    return qr_retract(rng.standard_normal((count, n, 4)))


def qr_retract(matrices: FloatArray) -> FloatArray:
    """Orthonormalize each (n, 4) slice by QR with a positive diagonal of R."""
    q, r = np.linalg.qr(matrices)
    signs = np.sign(np.einsum("bii->bi", r))
    signs[signs == 0] = 1.0
    return np.asarray(q * signs[:, None, :])


def tangent_projection(frames: FloatArray, grad: FloatArray) -> FloatArray:
    """Riemannian gradient G - E sym(E^T G) on the Stiefel manifold."""
    etg = np.einsum("bia,bib->bab", frames, grad)
    sym = 0.5 * (etg + np.transpose(etg, (0, 2, 1)))
    return np.asarray(grad - np.einsum("bia,bab->bib", frames, sym))


# =============================================================================
# MINIMIZATION
# =============================================================================


def min_isotropic(
    operator: CurvatureOperator,
    mode: PICMode = PICMode.PIC,
    budget: int = 256,
    seed: int = 0,
    refine_steps: int = 200,
    initial_step: float = 0.1,
) -> MinIsotropicResult:
    """
    Minimum of the isotropic form over orthonormal four-frames.

    Args:
        operator: Curvature operator.
        mode: PIC, PIC1 or PIC2.
        budget: Number of random starting frames (>= 1).
        seed: Seed of the frame sampler.
        refine_steps: Projected-gradient iterations per frame.
        initial_step: Initial step length of every frame.

    Returns:
        MinIsotropicResult with the value, the minimizing frame (lam, mu set
        to their optimum), a convergence flag and the final gradient norm.

    Example:
        >>> from neck_lab.curvature.operator import cylinder_operator
        >>> round(min_isotropic(cylinder_operator(4)).value, 6)
        2.0
    """
    if budget < 1:
        raise ValueError(f"budget must be at least 1: {budget}")
    if refine_steps < 0:
        raise ValueError(f"refine_steps must be non-negative: {refine_steps}")

    rng = np.random.default_rng(seed)
    frames = random_frames(operator.n, budget, rng)
    values, _, _, grad = evaluate_frames(operator, frames, mode)
    steps = np.full(budget, initial_step)
    riem = tangent_projection(frames, grad)

    for _ in range(refine_steps):
        trial = qr_retract(frames - steps[:, None, None] * riem)
        trial_values, _, _, trial_grad = evaluate_frames(operator, trial, mode)
        improved = trial_values < values
        frames = np.where(improved[:, None, None], trial, frames)
        values = np.where(improved, trial_values, values)
        grad = np.where(improved[:, None, None], trial_grad, grad)
        steps = np.where(improved, steps * 1.2, steps * 0.5)
        riem = tangent_projection(frames, grad)

    best = int(np.argmin(values))
    value, lam, mu, grad_best = evaluate_frames(operator, frames[best : best + 1], mode)
    gradient_norm = float(np.linalg.norm(tangent_projection(frames[best : best + 1], grad_best)))
    converged = gradient_norm <= GRADIENT_TOLERANCE * max(1.0, abs(float(value[0])))
    if not converged:
        logger.warning(
            "Frame refinement stopped with gradient norm %.3e (mode=%s, budget=%d)",
            gradient_norm,
            mode.name,
            budget,
        )
    frame = FourFrame(
        vectors=frames[best],
        lam=float(np.clip(lam[0], 0.0, 1.0)),
        mu=float(np.clip(mu[0], 0.0, 1.0)),
    )
    return MinIsotropicResult(float(value[0]), frame, converged, gradient_norm)


def sampled_isotropic_minimum(
    operator: CurvatureOperator,
    mode: PICMode,
    samples: int,
    seed: int = 0,
    chunk: int = 50_000,
) -> float:
    """
    Brute-force minimum over random frames without refinement.

    Used as an independent oracle for min_isotropic.
    """
    rng = np.random.default_rng(seed)
    best = np.inf
    remaining = samples
    while remaining > 0:
        count = min(chunk, remaining)
        frames = random_frames(operator.n, count, rng)
        a, b, c, d, e, _ = _form_terms(operator.components, frames)
        values, _, _ = minimize_parameters(a, b, c, d, e, mode)
        best = min(best, float(values.min()))
        remaining -= count
    return best


# =============================================================================
# UNIFORM PIC
# =============================================================================


def default_criterion(n: int) -> UniformPICCriterion:
    """Block criterion in dimension 4, scalar criterion above."""
    return UniformPICCriterion.BLOCK if n == 4 else UniformPICCriterion.SCALAR


def is_uniformly_pic(
    operator: CurvatureOperator,
    alpha: float,
    criterion: UniformPICCriterion | None = None,
    budget: int = 256,
    seed: int = 0,
) -> UniformPICResult:
    """
    Decide uniform PIC with constant alpha and return the signed margin.

    Block criterion (n = 4): min{a1+a2, c1+c2} - alpha * max{a3, b3, c3}.
    Scalar criterion (n >= 4): min PIC - alpha * scal.

    Raises:
        DimensionError: If n < 4, or the block criterion is requested with n != 4.
    """

    if alpha <= 0:
        raise ValueError(f"alpha must be positive: {alpha}")
    if operator.n < 4:
        raise DimensionError(f"n must be at least 4: {operator.n}", n=operator.n, required=4)
    criterion = criterion or default_criterion(operator.n)

    if criterion is UniformPICCriterion.BLOCK:
        blocks = block_decompose_4d(operator)
        a, b, c = blocks.a, blocks.b, blocks.c
        margin = min(a[0] + a[1], c[0] + c[1]) - alpha * max(a[2], b[2], c[2])
    else:
        minimum = min_isotropic(operator, PICMode.PIC, budget=budget, seed=seed).value
        margin = minimum - alpha * operator.scalar_curvature
    return UniformPICResult(bool(margin >= 0.0), float(margin), criterion)


def uniform_pic_threshold(
    operator: CurvatureOperator,
    criterion: UniformPICCriterion | None = None,
    budget: int = 256,
    seed: int = 0,
) -> float:
    """
    Largest alpha for which the operator is uniformly PIC under a criterion.

    Returns inf when the right-hand side vanishes and the left is nonnegative.
    """

    criterion = criterion or default_criterion(operator.n)
    if criterion is UniformPICCriterion.BLOCK:
        blocks = block_decompose_4d(operator)
        lhs = min(blocks.a[0] + blocks.a[1], blocks.c[0] + blocks.c[1])
        rhs = max(blocks.a[2], blocks.b[2], blocks.c[2])
    else:
        lhs = min_isotropic(operator, PICMode.PIC, budget=budget, seed=seed).value
        rhs = operator.scalar_curvature
    if rhs <= 0:
        return float("inf") if lhs >= 0 else float("nan")
    return float(lhs / rhs)
