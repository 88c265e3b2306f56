"""
Weighted pinch norm of a symmetric 2-tensor.

For M = Ric - rho*g positive definite the smallest lambda with
-lambda M <= h <= lambda M is the spectral radius of M^{-1/2} h M^{-1/2},
i.e. the largest |eigenvalue| of the generalized problem h x = lambda M x.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy import linalg

from neck_lab.core.exceptions import InputValidationError, NotPositiveDefiniteError
from neck_lab.core.types import SYMMETRY_TOLERANCE, Matrix


class PinchNorm(NamedTuple):
    """Pinch norm lambda and its exponentially weighted form psi = e^{2 rho t} lambda."""

    rho: float
    t: float
    lam: float
    psi: float


def _require_symmetric(name: str, m: Matrix) -> Matrix:
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InputValidationError(f"{name} must be square: {arr.shape}", field=name)
    defect = float(np.max(np.abs(arr - arr.T), initial=0.0))
    if defect > SYMMETRY_TOLERANCE * max(1.0, float(np.max(np.abs(arr), initial=0.0))):
        raise InputValidationError(f"{name} must be symmetric (defect {defect:.3e})", field=name)
    return 0.5 * (arr + arr.T)


def weighted_pinch_norm(h: Matrix, ric: Matrix, rho: float) -> float:
    """
    inf{lambda > 0 : -lambda (Ric - rho g) <= h <= lambda (Ric - rho g)}.

    Args:
        h: Symmetric matrix.
        ric: Symmetric Ricci matrix in an orthonormal frame.
        rho: Shift rho.

    Returns:
        The pinch norm lambda >= 0.

    Raises:
        InputValidationError: If h or Ric is not symmetric, or their shapes differ.
        NotPositiveDefiniteError: If Ric - rho*I is not positive definite.
    """
    h_sym = _require_symmetric("h", h)
    ric_sym = _require_symmetric("Ric", ric)
    if h_sym.shape != ric_sym.shape:
        raise InputValidationError(
            f"h and Ric must have the same shape: {h_sym.shape} != {ric_sym.shape}", field="ric"
        )
    weight = ric_sym - rho * np.eye(h_sym.shape[0])
    min_eig = float(np.linalg.eigvalsh(weight)[0])
    if min_eig <= 0:
        raise NotPositiveDefiniteError(
            f"Ric - rho*g must be positive definite (min eigenvalue {min_eig:.3e})",
            min_eigenvalue=min_eig,
        )
    eigenvalues = linalg.eigh(h_sym, weight, eigvals_only=True)
    return float(np.max(np.abs(eigenvalues)))


def pinch_norm(h: Matrix, ric: Matrix, rho: float, t: float) -> PinchNorm:
    """Pinch norm together with psi = e^{2 rho t} lambda."""
    if rho <= 0:
        raise ValueError(f"rho must be positive: {rho}")
    lam = weighted_pinch_norm(h, ric, rho)
    return PinchNorm(rho=rho, t=t, lam=lam, psi=math.exp(2.0 * rho * t) * lam)
