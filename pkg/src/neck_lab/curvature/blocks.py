"""
Four-dimensional block decomposition, Hamilton reaction ODE and cones.

In dimension four the bivectors split as self-dual plus anti-self-dual,
and the curvature operator becomes the block matrix [[A, B], [B^T, C]].
This module builds the blocks, integrates the reaction ODE

    dA/dt = A^2 + 2 A# + B B^T
    dC/dt = C^2 + 2 C# + B^T B
    dB/dt = A B + B C + 2 B#

(X# is the cofactor matrix) with RK4, and evaluates the signed margins of
the invariant cones C0, C(s) and C~(s).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np

from neck_lab.core.exceptions import DimensionError, InputValidationError
from neck_lab.core.types import BLOWUP_TRACE, ConeKind, FloatArray, Matrix
from neck_lab.curvature.operator import CurvatureOperator

logger = logging.getLogger(__name__)

TRACE_TOLERANCE: float = 1e-10

_SQRT_HALF = 1.0 / np.sqrt(2.0)


def _bivector(i: int, j: int) -> Matrix:
    m = np.zeros((4, 4))
    m[i, j] = 1.0
    m[j, i] = -1.0
    return m


def self_dual_basis() -> FloatArray:
    """
    Orthonormal bivector basis, shape (6, 4, 4).

    The first three are self-dual (e12 + e34, e13 - e24, e14 + e23)/sqrt(2),
    the last three anti-self-dual with the opposite signs. Bivectors are
    antisymmetric matrices with inner product tr(X^T Y)/2.
    """
    e = _bivector
    plus = [e(0, 1) + e(2, 3), e(0, 2) - e(1, 3), e(0, 3) + e(1, 2)]
    minus = [e(0, 1) - e(2, 3), e(0, 2) + e(1, 3), e(0, 3) - e(1, 2)]
    return np.stack(plus + minus) * _SQRT_HALF


# =============================================================================
# BLOCKS
# =============================================================================


@dataclass(frozen=True)
class FourDBlocks:
    """
    Curvature operator of a 4-manifold in the self-dual splitting.

    Attributes:
        A: Symmetric 3x3 self-dual block.
        B: 3x3 mixed block.
        C: Symmetric 3x3 anti-self-dual block.
        a, c: Ascending eigenvalues of A and C.
        b: Ascending singular values of B.
    """

    A: Matrix
    B: Matrix
    C: Matrix
    a: FloatArray = field(init=False)
    b: FloatArray = field(init=False)
    c: FloatArray = field(init=False)

    def __post_init__(self) -> None:
        """Validate shapes and the trace condition, then derive spectra."""
        for name in ("A", "B", "C"):
            if np.shape(getattr(self, name)) != (3, 3):
                raise InputValidationError(f"{name} must be 3x3", field=name)
        scale = max(1.0, abs(float(np.trace(self.A))), abs(float(np.trace(self.C))))
        if abs(float(np.trace(self.A) - np.trace(self.C))) > TRACE_TOLERANCE * scale:
            raise InputValidationError(
                f"tr A must equal tr C: {np.trace(self.A):.12g} vs {np.trace(self.C):.12g}",
                field="trace",
            )
        a_sym = 0.5 * (self.A + self.A.T)
        c_sym = 0.5 * (self.C + self.C.T)
        object.__setattr__(self, "a", np.linalg.eigvalsh(a_sym))
        object.__setattr__(self, "c", np.linalg.eigvalsh(c_sym))
        object.__setattr__(self, "b", np.sort(np.linalg.svd(self.B, compute_uv=False)))

    @classmethod
    def zero(cls) -> FourDBlocks:
        """All blocks zero."""
        return cls(np.zeros((3, 3)), np.zeros((3, 3)), np.zeros((3, 3)))

    @property
    def is_pic(self) -> bool:
        """Strict PIC: a1 + a2 > 0 and c1 + c2 > 0."""
        return bool(self.a[0] + self.a[1] > 0 and self.c[0] + self.c[1] > 0)

    @property
    def trace(self) -> float:
        """tr A (equal to tr C)."""
        return float(np.trace(self.A))

    def to_report(self, margins: dict[str, list[float]] | None = None) -> dict[str, Any]:
        """JSON-ready {a, b, c, margins}."""
        return {
            "a": self.a.tolist(),
            "b": self.b.tolist(),
            "c": self.c.tolist(),
            "margins": margins or {},
        }


def block_decompose_4d(operator: CurvatureOperator) -> FourDBlocks:
    """
    Blocks of a four-dimensional curvature operator.

    The operator on bivectors is M_ab = R_ijkl w^a_ij w^b_kl / 4 in the
    basis of self_dual_basis().

    Raises:
        DimensionError: If n != 4.

    Example:
        >>> from neck_lab.curvature.operator import sphere_operator
        >>> block_decompose_4d(sphere_operator(4)).a.tolist()
        [1.0, 1.0, 1.0]
    """
    if operator.n != 4:
        raise DimensionError(
            f"block decomposition needs n = 4: {operator.n}", n=operator.n, required=4
        )
    w = self_dual_basis()
    m = 0.25 * np.einsum("ijkl,aij,bkl->ab", operator.components, w, w)
    m = 0.5 * (m + m.T)
    return FourDBlocks(A=m[:3, :3], B=m[:3, 3:], C=m[3:, 3:])


# =============================================================================
# HAMILTON ODE
# =============================================================================


def cofactor(x: Matrix) -> Matrix:
    """Cofactor matrix of a 3x3 matrix, built from row cross products."""
    return np.stack(
        [np.cross(x[1], x[2]), np.cross(x[2], x[0]), np.cross(x[0], x[1])]
    )


def hamilton_rates(a: Matrix, b: Matrix, c: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Right-hand side (dA, dB, dC) of the reaction ODE."""
    da = a @ a + 2.0 * cofactor(a) + b @ b.T
    dc = c @ c + 2.0 * cofactor(c) + b.T @ b
    db = a @ b + b @ c + 2.0 * cofactor(b)
    return da, db, dc


def hamilton_ode_step(blocks: FourDBlocks, dt: float) -> FourDBlocks:
    """
    One classical RK4 step of the reaction ODE.

    Raises:
        ValueError: If dt is not positive.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive: {dt}")
    y0 = (blocks.A, blocks.B, blocks.C)

    def shifted(k: tuple[Matrix, Matrix, Matrix], h: float) -> tuple[Matrix, Matrix, Matrix]:
        return (y0[0] + h * k[0], y0[1] + h * k[1], y0[2] + h * k[2])

    k1 = hamilton_rates(*y0)
    k2 = hamilton_rates(*shifted(k1, dt / 2))
    k3 = hamilton_rates(*shifted(k2, dt / 2))
    k4 = hamilton_rates(*shifted(k3, dt))
    new = [
        y0[i] + dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]) for i in range(3)
    ]
    a_new = 0.5 * (new[0] + new[0].T)
    c_new = 0.5 * (new[2] + new[2].T)
    # the exact flow keeps tr A = tr C; remove roundoff drift
    drift = 0.5 * (np.trace(a_new) - np.trace(c_new)) / 3.0
    a_new = a_new - drift * np.eye(3)
    c_new = c_new + drift * np.eye(3)
    return FourDBlocks(A=a_new, B=new[1], C=c_new)


def stable_step(blocks: FourDBlocks, factor: float = 0.01) -> float:
    """Step size factor / (1 + |tr A|)."""
    return factor / (1.0 + abs(blocks.trace))


class HamiltonTrajectory(NamedTuple):
    """Integrated reaction ODE trajectory."""

    times: FloatArray
    states: list[FourDBlocks]
    blew_up: bool


def integrate_hamilton(
    blocks: FourDBlocks,
    t_max: float = np.inf,
    step_factor: float = 0.01,
    max_steps: int = 200_000,
    blowup_trace: float = BLOWUP_TRACE,
) -> HamiltonTrajectory:
    """
    Integrate the reaction ODE until t_max or blow-up (tr A > blowup_trace).

    Steps are dt = step_factor / (1 + |tr A|), shortened to land on t_max.
    """
    times = [0.0]
    states = [blocks]
    t = 0.0
    current = blocks
    for _ in range(max_steps):
        if t >= t_max:
            break
        if current.trace > blowup_trace:
            logger.debug("Hamilton ODE blow-up at t=%.6g (tr A=%.3e)", t, current.trace)
            return HamiltonTrajectory(np.array(times), states, True)
        dt = min(stable_step(current, step_factor), t_max - t)
        current = hamilton_ode_step(current, dt)
        t += dt
        times.append(t)
        states.append(current)
    else:
        logger.warning("Hamilton ODE stopped after %d steps at t=%.6g", max_steps, t)
    return HamiltonTrajectory(np.array(times), states, current.trace > blowup_trace)


def trace_rate_identity(blocks: FourDBlocks) -> tuple[float, float]:
    """
    Both sides of d/dt tr A = (a1+a2+a3)^2 + (b1^2+b2^2+b3^2).

    Returns:
        (exact rate tr dA, right-hand side from the spectra).
    """
    da, _, _ = hamilton_rates(blocks.A, blocks.B, blocks.C)
    return float(np.trace(da)), float(np.sum(blocks.a) ** 2 + np.sum(blocks.b**2))


def eigenvalue_rate_checks(blocks: FourDBlocks) -> dict[str, float]:
    """
    Slacks of the pointwise eigenvalue inequalities (nonnegative when they hold).

    - a1_lower: d/dt a1 - (a1^2 + b1^2 + 2 a2 a3)
    - c1_lower: d/dt c1 - (c1^2 + b1^2 + 2 c2 c3)
    - b3_log: 4 b1 b2 / b3 + 2 a3 + 2 c3 - d/dt ln(b3^2), NaN when b3 = 0

    Eigenvalue derivatives are taken as Rayleigh quotients of the exact
    rates along the corresponding eigen/singular vectors.
    """
    da, db, dc = hamilton_rates(blocks.A, blocks.B, blocks.C)
    a, b, c = blocks.a, blocks.b, blocks.c
    _, ua = np.linalg.eigh(0.5 * (blocks.A + blocks.A.T))
    _, uc = np.linalg.eigh(0.5 * (blocks.C + blocks.C.T))
    a1_rate = float(ua[:, 0] @ da @ ua[:, 0])
    c1_rate = float(uc[:, 0] @ dc @ uc[:, 0])
    u, _, vt = np.linalg.svd(blocks.B)
    b3_rate = float(u[:, 0] @ db @ vt[0])
    checks = {
        "a1_lower": a1_rate - (a[0] ** 2 + b[0] ** 2 + 2 * a[1] * a[2]),
        "c1_lower": c1_rate - (c[0] ** 2 + b[0] ** 2 + 2 * c[1] * c[2]),
        "b3_log": float("nan"),
    }
    if b[2] > 1e-12:
        checks["b3_log"] = 4 * b[0] * b[1] / b[2] + 2 * a[2] + 2 * c[2] - 2 * b3_rate / b[2]
    return {key: float(value) for key, value in checks.items()}


# =============================================================================
# CONES
# =============================================================================


def default_s(phi: float) -> float:
    """s0 = 1 / (3 (Phi + 1)(4 Phi + 3))."""
    return 1.0 / (3.0 * (phi + 1.0) * (4.0 * phi + 3.0))


@dataclass(frozen=True)
class ConeSpec:
    """
    One of the invariant cones of the reaction ODE.

    Attributes:
        kind: C0, C(s) or C~(s).
        phi: Parameter Phi > 0 of the base cone.
        s: Parameter s >= 0 (s > 0 for C~). None selects s0(Phi).
    """

    kind: ConeKind
    phi: float = 1.0
    s: float | None = None

    def __post_init__(self) -> None:
        """Validate parameters."""
        if self.phi <= 0:
            raise ValueError(f"phi must be positive: {self.phi}")
        if self.s is not None and self.s < 0:
            raise ValueError(f"s must be non-negative: {self.s}")
        if self.kind is ConeKind.C_TILDE and self.s is not None and self.s == 0:
            raise ValueError("s must be positive for the C~ cone")

    @property
    def s_value(self) -> float:
        """The effective s (s0(Phi) when unset)."""
        return default_s(self.phi) if self.s is None else self.s

    @property
    def q(self) -> float:
        """q(s) = (s + 1) / (2 s)."""
        s = self.s_value
        return (s + 1.0) / (2.0 * s)


def cone_margin(blocks: FourDBlocks, cone: ConeSpec) -> FloatArray:
    """
    Signed slacks of the defining inequalities of a cone.

    C0 (three entries):
        Phi (a1+a2)(c1+c2) - (b2+b3)^2,
        (Phi+1)(a1+a2) - (a2+a3),
        (Phi+1)(c1+c2) - (c2+c3)
    C(s): the C0 entries followed by a1 - s(a1+a2+a3) and c1 - s(c1+c2+c3).
    C~(s): a1 c1 - s b3^2 and q(s)(a1+a2)(c1+c2) - (b2+b3)^2.

    Example:
        >>> import numpy as np
        >>> eye = FourDBlocks(np.eye(3), np.zeros((3, 3)), np.eye(3))
        >>> cone_margin(eye, ConeSpec(ConeKind.C0, phi=1.0)).tolist()
        [4.0, 2.0, 2.0]
    """
    a, b, c = blocks.a, blocks.b, blocks.c
    phi, s = cone.phi, cone.s_value
    if cone.kind is ConeKind.C_TILDE:
        return np.array(
            [
                a[0] * c[0] - s * b[2] ** 2,
                cone.q * (a[0] + a[1]) * (c[0] + c[1]) - (b[1] + b[2]) ** 2,
            ]
        )
    base = [
        phi * (a[0] + a[1]) * (c[0] + c[1]) - (b[1] + b[2]) ** 2,
        (phi + 1.0) * (a[0] + a[1]) - (a[1] + a[2]),
        (phi + 1.0) * (c[0] + c[1]) - (c[1] + c[2]),
    ]
    if cone.kind is ConeKind.C_S:
        base += [a[0] - s * np.sum(a), c[0] - s * np.sum(c)]
    return np.array(base, dtype=float)


def normalized_cone_margin(blocks: FourDBlocks, cone: ConeSpec) -> FloatArray:
    """
    Cone margins divided by the matching power of max(1, |tr A|).

    Quadratic inequalities are divided by the square, linear ones by the
    first power, so margins stay comparable along a blowing-up trajectory.
    """
    scale = max(1.0, abs(blocks.trace))
    margins = cone_margin(blocks, cone)
    if cone.kind is ConeKind.C_TILDE:
        degrees = np.array([2, 2])
    elif cone.kind is ConeKind.C_S:
        degrees = np.array([2, 1, 1, 1, 1])
    else:
        degrees = np.array([2, 1, 1])
    return np.asarray(margins / scale**degrees)
