"""
Algebraic curvature operators at a point.

This module implements the carrier type for every isotropic-curvature
predicate:
1. CurvatureOperator with the full curvature-tensor symmetries
2. Projection of arbitrary 4-tensors onto algebraic curvature tensors
3. Rotationally symmetric operators R = A wedge-product g
4. Orthonormal four-frames and the isotropic quadratic form

Index convention: R[i, j, k, l] = R(e_i, e_j, e_k, e_l), sectional curvature
of the plane e_i ^ e_j is R[i, j, i, j], scalar curvature is sum R[i, j, i, j].
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Any

import numpy as np

from neck_lab.core.exceptions import DimensionError, FrameError, InputValidationError
from neck_lab.core.types import ORTHONORMAL_TOLERANCE, SYMMETRY_TOLERANCE, FloatArray, Matrix

logger = logging.getLogger(__name__)


# =============================================================================
# SYMMETRY PROJECTION
# =============================================================================

# (permutation of index slots, sign) generating the pair-symmetry group of order 8
_PAIR_GROUP: tuple[tuple[tuple[int, int, int, int], float], ...] = (
    ((0, 1, 2, 3), 1.0),
    ((1, 0, 2, 3), -1.0),
    ((0, 1, 3, 2), -1.0),
    ((1, 0, 3, 2), 1.0),
    ((2, 3, 0, 1), 1.0),
    ((3, 2, 0, 1), -1.0),
    ((2, 3, 1, 0), -1.0),
    ((3, 2, 1, 0), 1.0),
)


def _permutation_sign(perm: tuple[int, ...]) -> float:
    sign = 1.0
    seen = list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign


def project_curvature_tensor(components: FloatArray) -> FloatArray:
    """
    Project an arbitrary n^4 array onto the algebraic curvature tensors.

    The projection averages over the pair-symmetry group (antisymmetry in
    each pair plus pair exchange) and then removes the totally
    antisymmetric part, which is exactly the first-Bianchi defect on
    tensors that already have the pair symmetries. The map is idempotent.

    Args:
        components: Array of shape (n, n, n, n).

    Returns:
        Array of the same shape satisfying every curvature symmetry.
    """
    t = np.asarray(components, dtype=float)
    paired = sum(sign * np.transpose(t, perm) for perm, sign in _PAIR_GROUP) / 8.0
    alternating = sum(
        _permutation_sign(perm) * np.transpose(paired, perm)
        for perm in itertools.permutations(range(4))
    ) / 24.0
    return np.asarray(paired - alternating)


def symmetry_defects(components: FloatArray) -> dict[str, float]:
    """
    Measure how far a 4-tensor is from an algebraic curvature tensor.

    Returns:
        Dict with the sup-norm defects 'antisymmetry', 'pair_symmetry' and
        'bianchi' (R_ijkl + R_iklj + R_iljk).
    """
    r = np.asarray(components, dtype=float)
    antisym = max(
        float(np.max(np.abs(r + np.transpose(r, (1, 0, 2, 3))), initial=0.0)),
        float(np.max(np.abs(r + np.transpose(r, (0, 1, 3, 2))), initial=0.0)),
    )
    pair = float(np.max(np.abs(r - np.transpose(r, (2, 3, 0, 1))), initial=0.0))
    bianchi = r + np.einsum("iklj->ijkl", r) + np.einsum("iljk->ijkl", r)
    return {
        "antisymmetry": antisym,
        "pair_symmetry": pair,
        "bianchi": float(np.max(np.abs(bianchi), initial=0.0)),
    }


# =============================================================================
# CURVATURE OPERATOR
# =============================================================================


@dataclass(frozen=True)
class CurvatureOperator:
    """
    Algebraic curvature tensor in dimension n >= 4.

    Attributes:
        n: Dimension of the tangent space.
        components: Array R[i, j, k, l] of shape (n, n, n, n).
    """

    n: int
    components: FloatArray

    def __post_init__(self) -> None:
        """Validate dimension and symmetries."""
        if self.n < 4:
            raise DimensionError(f"n must be at least 4: {self.n}", n=self.n, required=4)
        shape = np.shape(self.components)
        if shape != (self.n,) * 4:
            raise InputValidationError(
                f"components must have shape {(self.n,) * 4}: {shape}",
                field="components",
                value=shape,
            )
        scale = max(1.0, float(np.max(np.abs(self.components), initial=0.0)))
        defects = symmetry_defects(self.components)
        worst = max(defects.values())
        if worst > SYMMETRY_TOLERANCE * scale:
            raise InputValidationError(
                f"components violate curvature symmetries (defect {worst:.3e}); "
                "use CurvatureOperator.from_components to project",
                field="components",
                value=defects,
            )

    @classmethod
    def from_components(cls, components: FloatArray) -> CurvatureOperator:
        """Build an operator from arbitrary components by symmetry projection."""
        arr = np.asarray(components, dtype=float)
        return cls(n=arr.shape[0], components=project_curvature_tensor(arr))

    @classmethod
    def zero(cls, n: int) -> CurvatureOperator:
        """The flat operator in dimension n."""
        return cls(n=n, components=np.zeros((n,) * 4))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator, scale: float = 1.0) -> CurvatureOperator:
        """Random operator from projected Gaussian components."""
        return cls.from_components(scale * rng.standard_normal((n,) * 4))

    @property
    def scalar_curvature(self) -> float:
        """scal(R) = sum_{i,j} R_ijij."""
        return float(np.einsum("ijij->", self.components))

    def sectional(self, i: int, j: int) -> float:
        """Sectional curvature of the coordinate plane e_i ^ e_j."""
        return float(self.components[i, j, i, j])

    def ricci(self) -> Matrix:
        """Ricci tensor Ric_jl = sum_i R_ijil."""
        return np.asarray(np.einsum("ijil->jl", self.components))

    def evaluate(self, a: FloatArray, b: FloatArray, c: FloatArray, d: FloatArray) -> float:
        """R(a, b, c, d) for vectors a, b, c, d."""
        return float(np.einsum("ijkl,i,j,k,l->", self.components, a, b, c, d))

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready form {n, components} with row-major flat components."""
        return {"n": self.n, "components": self.components.ravel().tolist()}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CurvatureOperator:
        """Inverse of to_dict."""
        try:
            n = int(data["n"])
            flat = np.asarray(data["components"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputValidationError(f"Malformed curvature operator: {exc}") from exc
        if flat.size != n**4:
            raise InputValidationError(
                f"Expected {n**4} components for n={n}, got {flat.size}.",
                field="components",
                value=flat.size,
            )
        return cls(n=n, components=flat.reshape((n,) * 4))


def two_form_value(operator: CurvatureOperator, phi: Matrix) -> float:
    """R_ijkl phi_ij phi_kl for an antisymmetric matrix phi."""
    return float(np.einsum("ijkl,ij,kl->", operator.components, phi, phi))


def rotationally_symmetric_operator(a_matrix: Matrix) -> CurvatureOperator:
    """
    Assemble R_ijkl = d_ik A_jl + d_jl A_ik - d_il A_jk - d_jk A_il.

    Every rotationally symmetric metric has a curvature tensor of this form.
    Sectional curvatures are R_ijij = A_ii + A_jj and, for any
    antisymmetric phi, R(phi, phi) = 4 A_ij phi_ik phi_jk.

    Args:
        a_matrix: Symmetric n x n matrix A.

    Returns:
        The assembled CurvatureOperator.

    Raises:
        InputValidationError: If A is not square and symmetric.
    """
    a = np.asarray(a_matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputValidationError(f"A must be square: {a.shape}", field="A", value=a.shape)
    asym = float(np.max(np.abs(a - a.T), initial=0.0))
    if asym > SYMMETRY_TOLERANCE * max(1.0, float(np.max(np.abs(a), initial=0.0))):
        raise InputValidationError(f"A must be symmetric (defect {asym:.3e})", field="A")
    eye = np.eye(a.shape[0])
    r = (
        np.einsum("ik,jl->ijkl", eye, a)
        + np.einsum("jl,ik->ijkl", eye, a)
        - np.einsum("il,jk->ijkl", eye, a)
        - np.einsum("jk,il->ijkl", eye, a)
    )
    return CurvatureOperator(n=a.shape[0], components=r)


def cylinder_operator(n: int, radius: float = 1.0) -> CurvatureOperator:
    """Curvature of S^{n-1}(radius) x R with the axis as the last basis vector."""
    half = 0.5 / radius**2
    return rotationally_symmetric_operator(np.diag([half] * (n - 1) + [-half]))


def sphere_operator(n: int, radius: float = 1.0) -> CurvatureOperator:
    """Curvature of the round S^n(radius)."""
    return rotationally_symmetric_operator(0.5 / radius**2 * np.eye(n))


# =============================================================================
# FOUR-FRAMES AND THE ISOTROPIC FORM
# =============================================================================


@dataclass(frozen=True)
class FourFrame:
    """
    Orthonormal four-frame with the PIC2 parameters.

    Attributes:
        vectors: n x 4 matrix whose columns are e1..e4.
        lam: lambda in [0, 1].
        mu: mu in [0, 1].
    """

    vectors: Matrix
    lam: float = 1.0
    mu: float = 1.0

    def __post_init__(self) -> None:
        """Validate orthonormality and parameter ranges."""
        e = np.asarray(self.vectors, dtype=float)
        if e.ndim != 2 or e.shape[1] != 4 or e.shape[0] < 4:
            raise FrameError(f"frame must be an n x 4 matrix with n >= 4: {e.shape}")
        defect = float(np.max(np.abs(e.T @ e - np.eye(4))))
        if defect > ORTHONORMAL_TOLERANCE:
            raise FrameError(f"frame is not orthonormal (defect {defect:.3e})", defect=defect)
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lam must be in [0, 1]: {self.lam}")
        if not 0.0 <= self.mu <= 1.0:
            raise ValueError(f"mu must be in [0, 1]: {self.mu}")

    @property
    def n(self) -> int:
        """Ambient dimension."""
        return int(self.vectors.shape[0])

    @classmethod
    def standard(cls, n: int, indices: tuple[int, int, int, int] = (0, 1, 2, 3)) -> FourFrame:
        """Frame made of coordinate vectors."""
        return cls(vectors=np.eye(n)[:, list(indices)])


def isotropic_value(operator: CurvatureOperator, frame: FourFrame) -> float:
    """
    Evaluate the PIC2-family quadratic form on a frame.

    Formula:
        R1313 + l^2 R1414 + m^2 R2323 + l^2 m^2 R2424 - 2 l m R1234

    With lam = mu = 1 this is the PIC form, with mu = 1 the PIC1 form.

    Raises:
        DimensionError: If the frame and operator dimensions differ.
    """
    if frame.n != operator.n:
        raise DimensionError(
            f"frame dimension {frame.n} differs from operator dimension {operator.n}",
            n=frame.n,
            required=operator.n,
        )
    e1, e2, e3, e4 = (frame.vectors[:, k] for k in range(4))
    lam, mu = frame.lam, frame.mu
    return (
        operator.evaluate(e1, e3, e1, e3)
        + lam**2 * operator.evaluate(e1, e4, e1, e4)
        + mu**2 * operator.evaluate(e2, e3, e2, e3)
        + lam**2 * mu**2 * operator.evaluate(e2, e4, e2, e4)
        - 2.0 * lam * mu * operator.evaluate(e1, e2, e3, e4)
    )
