"""
Dirichlet heat kernel on [-L, L] by the method of images.

    S(z, t; w) = (4 pi t)^{-1/2} sum_k [ exp(-(z - w + 4kL)^2 / 4t)
                                        - exp(-(z + w + 4kL - 2L)^2 / 4t) ]

The sum is truncated to |k| <= K. Every dropped term of index k is bounded
by a_k = exp(-(4|k|L - 4L)^2 / 4t) and the a_k decay faster than a
geometric series, which gives the a priori tail bound

    tail(K) <= 4 a_{K+1} / ((1 - q) sqrt(4 pi t)),   q = a_{K+2} / a_{K+1}.

K is chosen as the smallest order whose bound meets the target.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from neck_lab.core.exceptions import TimeDomainError
from neck_lab.core.types import KERNEL_TAIL_TARGET, FloatArray

logger = logging.getLogger(__name__)

MAX_IMAGES: int = 64
"""Upper limit on the truncation order."""

BOUNDARY_BOUND_CONSTANT: float = 1.0
"""Calibrated constant C in |dS/dw(z, t-s; +-L)| <= C L (t-s)^{-3/2} e^{-L^2/(100(t-s))}."""

ArrayLike = float | npt.NDArray[np.float64]


def _image_weight(k: int, length: float, t: float) -> float:
    reach = max(0.0, 4.0 * k * length - 4.0 * length)
    return math.exp(-(reach**2) / (4.0 * t))


def truncation_bound(length: float, t: float, order: int) -> float:
    """A priori bound on the images with |k| > order."""
    if t <= 0:
        raise TimeDomainError(f"kernel time must be positive: {t}", t=t)
    a1 = _image_weight(order + 1, length, t)
    a2 = _image_weight(order + 2, length, t)
    q = a2 / a1 if a1 > 0 else 0.0
    if q >= 1.0:
        return math.inf
    return 4.0 * a1 / ((1.0 - q) * math.sqrt(4.0 * math.pi * t))


def truncation_order(length: float, t: float, target: float = KERNEL_TAIL_TARGET) -> int:
    """Smallest K >= 1 with truncation_bound(L, t, K) <= target."""
    for order in range(1, MAX_IMAGES + 1):
        if truncation_bound(length, t, order) <= target:
            return order
    logger.warning(
        "Image sum for L=%.6g, t=%.6g needs more than %d images; tail bound %.3e",
        length,
        t,
        MAX_IMAGES,
        truncation_bound(length, t, MAX_IMAGES),
    )
    return MAX_IMAGES


class KernelValue(NamedTuple):
    """Truncated kernel value with its truncation data."""

    value: FloatArray
    order: int
    bound: float


@dataclass(frozen=True)
class DirichletKernel:
    """
    Image-charge Dirichlet kernel on [-L, L].

    Attributes:
        length: Half-width L > 0.
        order: Truncation order K; None selects it per time from the target.
        target: Tail bound targeted by the adaptive order.
    """

    length: float
    order: int | None = None
    target: float = KERNEL_TAIL_TARGET

    def __post_init__(self) -> None:
        """Validate parameters."""
        if self.length <= 0:
            raise ValueError(f"length must be positive: {self.length}")
        if self.order is not None and self.order < 0:
            raise ValueError(f"order must be non-negative: {self.order}")
        if self.target <= 0:
            raise ValueError(f"target must be positive: {self.target}")

    def order_for(self, t: float) -> int:
        """Truncation order used at time t."""
        if self.order is not None:
            return self.order
        return truncation_order(self.length, t, self.target)

    def _images(self, t: float) -> FloatArray:
        if t <= 0:
            raise TimeDomainError(f"kernel time must be positive: {t}", t=t)
        order = self.order_for(t)
        return np.arange(-order, order + 1, dtype=float)

    def evaluate(self, z: ArrayLike, t: float, w: ArrayLike) -> KernelValue:
        """
        S(z, t; w) for broadcastable z and w.

        Raises:
            TimeDomainError: If t <= 0.
        """
        k = self._images(t)
        zz = np.asarray(z, dtype=float)[..., None]
        ww = np.asarray(w, dtype=float)[..., None]
        big_l = self.length
        direct = np.exp(-((zz - ww + 4.0 * k * big_l) ** 2) / (4.0 * t))
        mirror = np.exp(-((zz + ww + 4.0 * k * big_l - 2.0 * big_l) ** 2) / (4.0 * t))
        value = np.sum(direct - mirror, axis=-1) / math.sqrt(4.0 * math.pi * t)
        order = int(k[-1])
        return KernelValue(value, order, truncation_bound(big_l, t, order))

    def w_derivative(self, z: ArrayLike, t: float, w: ArrayLike) -> FloatArray:
        """dS/dw (z, t; w)."""
        k = self._images(t)
        zz = np.asarray(z, dtype=float)[..., None]
        ww = np.asarray(w, dtype=float)[..., None]
        big_l = self.length
        x1 = zz - ww + 4.0 * k * big_l
        x2 = zz + ww + 4.0 * k * big_l - 2.0 * big_l
        terms = x1 / (2.0 * t) * np.exp(-(x1**2) / (4.0 * t)) + x2 / (2.0 * t) * np.exp(
            -(x2**2) / (4.0 * t)
        )
        return np.asarray(np.sum(terms, axis=-1) / math.sqrt(4.0 * math.pi * t))


def kernel_eval(
    z: ArrayLike, t: float, w: ArrayLike, length: float, order: int | None = None
) -> KernelValue:
    """
    Truncated Dirichlet kernel S(z, t; w) on [-L, L].

    Example:
        >>> round(float(kernel_eval(0.0, 1.0, 0.0, 50.0).value), 5)
        0.28209
    """
    return DirichletKernel(length, order).evaluate(z, t, w)


def boundary_kernel_bound(
    z: float,
    t: float,
    s: float,
    length: float,
    constant: float = BOUNDARY_BOUND_CONSTANT,
) -> tuple[float, float]:
    """
    Boundary flux of the kernel and its Gaussian bound.

    Returns:
        (max over w = +-L of |dS/dw(z, t-s; w)|,
         C L (t-s)^{-3/2} exp(-L^2 / (100 (t-s))))

    Raises:
        TimeDomainError: If s >= t.
    """
    tau = t - s
    if tau <= 0:
        raise TimeDomainError(f"need s < t, got t - s = {tau}", t=tau)
    kernel = DirichletKernel(length)
    flux = kernel.w_derivative(np.array([z, z]), tau, np.array([length, -length]))
    value = float(np.max(np.abs(flux)))
    bound = constant * length * tau ** (-1.5) * math.exp(-(length**2) / (100.0 * tau))
    return value, bound
