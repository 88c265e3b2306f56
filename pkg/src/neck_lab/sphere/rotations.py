"""
Bases of so(n), structure constants and rotational field families.

so(n) carries the inner product <M, M'> = tr(M^T M') / 2, for which the
canonical matrices E_ij = e_i e_j^T - e_j e_i^T (i < j) are orthonormal.
For an orthonormal basis sigma^a the constants

    k_abc = <sigma^a, [sigma^b, sigma^c]> / (2(n - 2))

reconstruct every element, sigma^a = sum_bc k_abc [sigma^b, sigma^c],
because the Casimir of the adjoint action is 2(n - 2) times the identity.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from neck_lab.core.exceptions import DimensionError, FrameError
from neck_lab.core.types import FloatArray, Matrix
from neck_lab.sphere.fields import SphereVectorField
from neck_lab.sphere.polynomials import sphere_volume

logger = logging.getLogger(__name__)

BASIS_TOLERANCE: float = 1e-12


def so_inner(m1: Matrix, m2: Matrix) -> float:
    """<M, M'> = tr(M^T M') / 2."""
    return 0.5 * float(np.sum(m1 * m2))


def canonical_basis(n: int) -> FloatArray:
    """E_ij for i < j in lexicographic order, shape (N, n, n)."""
    if n < 3:
        raise DimensionError(f"n must be at least 3: {n}", n=n, required=3)
    basis = []
    for i, j in itertools.combinations(range(n), 2):
        e = np.zeros((n, n))
        e[i, j], e[j, i] = 1.0, -1.0
        basis.append(e)
    return np.array(basis)


def canonical_index(n: int, i: int, j: int) -> int:
    """Position of E_ij (i < j) in the canonical basis."""
    return list(itertools.combinations(range(n), 2)).index((i, j))


@dataclass(frozen=True)
class RotationFamily:
    """
    Orthonormal basis of so(n) and the rotational fields it generates.

    Attributes:
        n: Ambient dimension.
        matrices: Array (N, n, n) of antisymmetric matrices, N = n(n - 1)/2.

    Example:
        >>> RotationFamily.canonical(4).size
        6
    """

    n: int
    matrices: FloatArray

    def __post_init__(self) -> None:
        """Check antisymmetry and orthonormality to 1e-12."""
        mats = np.asarray(self.matrices, dtype=float)
        size = self.n * (self.n - 1) // 2
        if mats.shape != (size, self.n, self.n):
            raise DimensionError(
                f"expected {size} matrices of shape {(self.n, self.n)}, got {mats.shape}",
                n=self.n,
            )
        asym = float(np.max(np.abs(mats + np.transpose(mats, (0, 2, 1)))))
        if asym > BASIS_TOLERANCE:
            raise FrameError(
                f"basis matrices are not antisymmetric (defect {asym:.3e})", defect=asym
            )
        defect = float(np.max(np.abs(self.gram_matrix(mats) - np.eye(size))))
        if defect > BASIS_TOLERANCE:
            raise FrameError(f"basis is not orthonormal (defect {defect:.3e})", defect=defect)
        object.__setattr__(self, "matrices", mats)

    @staticmethod
    def gram_matrix(matrices: FloatArray) -> FloatArray:
        """so(n) Gram matrix of a list of matrices."""
        return np.asarray(0.5 * np.einsum("aij,bij->ab", matrices, matrices))

    @classmethod
    def canonical(cls, n: int) -> RotationFamily:
        """The basis E_ij."""
        return cls(n, canonical_basis(n))

    @property
    def size(self) -> int:
        """N = n(n - 1)/2."""
        return int(self.matrices.shape[0])

    def conjugate(self, omega: Matrix) -> RotationFamily:
        """Basis sigma'^a = sum_d omega_da sigma^d for omega in O(N)."""
        return RotationFamily(self.n, np.einsum("da,dij->aij", omega, self.matrices))

    def fields(self, scale: float = 1.0) -> list[SphereVectorField]:
        """Rotational fields x -> scale * M^a x."""
        return [SphereVectorField.rotation(scale * m) for m in self.matrices]


def structure_constants(family: RotationFamily) -> FloatArray:
    """
    k_abc = <sigma^a, [sigma^b, sigma^c]> / (2(n - 2)).

    Example:
        >>> k = structure_constants(RotationFamily.canonical(3))
        >>> float(abs(k).max())
        0.5
    """
    mats = family.matrices
    brackets = np.einsum("bij,cjk->bcik", mats, mats) - np.einsum("cij,bjk->bcik", mats, mats)
    pairing = 0.5 * np.einsum("aik,bcik->abc", mats, brackets)
    return np.asarray(pairing / (2.0 * (family.n - 2)))


def reconstruction_residual(family: RotationFamily, constants: FloatArray | None = None) -> float:
    """max_a |sigma^a - sum_bc k_abc [sigma^b, sigma^c]|."""
    k = structure_constants(family) if constants is None else constants
    mats = family.matrices
    brackets = np.einsum("bij,cjk->bcik", mats, mats) - np.einsum("cij,bjk->bcik", mats, mats)
    rebuilt = np.einsum("abc,bcik->aik", k, brackets)
    return float(np.max(np.abs(rebuilt - mats)))


def transform_constants(constants: FloatArray, omega: Matrix) -> FloatArray:
    """k_abc = sum omega_da omega_eb omega_fc k_def for a conjugated basis."""
    return np.asarray(np.einsum("da,eb,fc,def->abc", omega, omega, omega, constants))


def canonical_scale(n: int) -> float:
    """
    Factor c making area^{-(n+1)/(n-1)} int <c E_a x, c E_b x> = delta_ab.

    On the sphere of radius r, int |E_ij x|^2 = 2 vol r^{n+1} / n with
    vol = vol(S^{n-1}), which gives c = sqrt(n/2) vol^{1/(n-1)} for every r.
    """
    return math.sqrt(n / 2.0) * sphere_volume(n) ** (1.0 / (n - 1))


def family_gram(family: RotationFamily, scale: float = 1.0, radius: float = 1.0) -> FloatArray:
    """
    Normalized Gram area^{-(n+1)/(n-1)} int <U^a, U^b> on a round sphere.

    U^a = scale * M^a x on the sphere of radius r; the integral is exact,
    int x^T A x = tr(A) vol r^{n+1} / n.
    """
    n = family.n
    vol = sphere_volume(n)
    area = vol * radius ** (n - 1)
    products = np.einsum("aki,bkj->abij", family.matrices, family.matrices)
    traces = np.trace(products, axis1=2, axis2=3)
    integral = scale**2 * traces * vol * radius ** (n + 1) / n
    return np.asarray(area ** (-(n + 1) / (n - 1)) * integral)
