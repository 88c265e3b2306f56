"""
Polynomials in the ambient coordinates of R^n, restricted to S^{n-1}.

A SpherePolynomial is a sum of homogeneous parts, each stored as a
symmetric tensor T_d of shape (n,)*d, so that

    f(x) = sum_d T_d[x, ..., x].

Derivatives use the homogeneous extensions: on the unit sphere
Delta_S f_d = Delta_amb f_d - d(d + n - 2) f_d, and the sphere gradient
is the tangential projection of the ambient gradient. Integrals use the
exact monomial moments

    int x^alpha dmu = 2 prod Gamma((alpha_i + 1)/2) / Gamma((|alpha| + n)/2)

for even alpha and 0 otherwise.
"""

from __future__ import annotations

import functools
import itertools
import math
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from neck_lab.core.exceptions import DimensionError, InputValidationError
from neck_lab.core.types import FloatArray, Matrix, Vector


def sphere_volume(n: int) -> float:
    """vol(S^{n-1}) = 2 pi^{n/2} / Gamma(n/2)."""
    if n < 1:
        raise DimensionError(f"n must be positive: {n}", n=n, required=1)
    return float(2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0))


@functools.lru_cache(maxsize=64)
def _moment_tensor(n: int, degree: int) -> FloatArray:
    moments = np.zeros((n,) * degree)
    for index in itertools.product(range(n), repeat=degree):
        counts = np.bincount(np.asarray(index, dtype=int), minlength=n)
        if np.any(counts % 2):
            continue
        log_value = float(np.sum(gammaln((counts + 1) / 2.0)) - gammaln((degree + n) / 2.0))
        moments[index] = 2.0 * math.exp(log_value)
    moments.flags.writeable = False
    return moments


def moment_tensor(n: int, degree: int) -> FloatArray:
    """Tensor of monomial integrals int x_{i1} ... x_{id} over S^{n-1}."""
    if degree == 0:
        return np.array(sphere_volume(n))
    return _moment_tensor(n, degree)


def _symmetrize(tensor: FloatArray) -> FloatArray:
    degree = tensor.ndim
    if degree < 2:
        return tensor.astype(float)
    perms = list(itertools.permutations(range(degree)))
    total = np.zeros_like(tensor, dtype=float)
    for perm in perms:
        total += np.transpose(tensor, perm)
    return total / len(perms)


def _contract_points(tensor: FloatArray, points: FloatArray) -> FloatArray:
    """T[x, ..., x] for each row x of points (P, n)."""
    if tensor.ndim == 0:
        return np.full(points.shape[0], float(tensor))
    result = np.tensordot(points, tensor, axes=([1], [0]))
    for _ in range(tensor.ndim - 1):
        result = np.einsum("pi,pi...->p...", points, result)
    return np.asarray(result)


@dataclass(frozen=True)
class SpherePolynomial:
    """
    Sum of homogeneous polynomial parts in n ambient variables.

    Attributes:
        n: Ambient dimension.
        parts: Mapping degree -> symmetric tensor of shape (n,)*degree.

    Example:
        >>> p = SpherePolynomial.linear(np.array([1.0, 0.0, 0.0]))
        >>> float(p.evaluate(np.array([[1.0, 0.0, 0.0]]))[0])
        1.0
    """

    n: int
    parts: Mapping[int, FloatArray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Validate shapes and store symmetrized copies."""
        if self.n < 2:
            raise DimensionError(f"n must be at least 2: {self.n}", n=self.n, required=2)
        clean: dict[int, FloatArray] = {}
        for degree, tensor in self.parts.items():
            array = np.asarray(tensor, dtype=float)
            if degree < 0 or array.shape != (self.n,) * degree:
                raise InputValidationError(
                    f"degree-{degree} part must have shape {(self.n,) * degree}, got {array.shape}",
                    field="parts",
                )
            clean[degree] = _symmetrize(array)
        object.__setattr__(self, "parts", clean)

    # -------------------------------------------------------------------------
    # constructors
    # -------------------------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> SpherePolynomial:
        """The zero polynomial."""
        return cls(n, {})

    @classmethod
    def constant(cls, n: int, value: float) -> SpherePolynomial:
        """Constant function."""
        return cls(n, {0: np.array(float(value))})

    @classmethod
    def linear(cls, a: Vector) -> SpherePolynomial:
        """x -> a . x."""
        a = np.asarray(a, dtype=float)
        return cls(a.size, {1: a})

    @classmethod
    def quadratic(cls, s: Matrix) -> SpherePolynomial:
        """x -> x^T S x (S is symmetrized)."""
        s = np.asarray(s, dtype=float)
        return cls(s.shape[0], {2: s})

    # -------------------------------------------------------------------------
    # algebra
    # -------------------------------------------------------------------------

    @property
    def degree(self) -> int:
        """Highest stored degree; -1 for the zero polynomial."""
        return max(self.parts, default=-1)

    def __add__(self, other: SpherePolynomial | float) -> SpherePolynomial:
        if not isinstance(other, SpherePolynomial):
            other = SpherePolynomial.constant(self.n, float(other))
        self._check_compatible(other)
        parts = dict(self.parts)
        for degree, tensor in other.parts.items():
            parts[degree] = parts[degree] + tensor if degree in parts else tensor
        return SpherePolynomial(self.n, parts)

    __radd__ = __add__

    def __neg__(self) -> SpherePolynomial:
        return self.scale(-1.0)

    def __sub__(self, other: SpherePolynomial | float) -> SpherePolynomial:
        return self + (-other)

    def __mul__(self, other: SpherePolynomial | float) -> SpherePolynomial:
        if not isinstance(other, SpherePolynomial):
            return self.scale(float(other))
        self._check_compatible(other)
        parts: dict[int, FloatArray] = {}
        for (d1, t1), (d2, t2) in itertools.product(self.parts.items(), other.parts.items()):
            product = np.multiply.outer(t1, t2)
            degree = d1 + d2
            parts[degree] = parts[degree] + product if degree in parts else product
        return SpherePolynomial(self.n, parts)

    __rmul__ = __mul__

    def scale(self, factor: float) -> SpherePolynomial:
        """Multiply by a constant."""
        return SpherePolynomial(self.n, {d: factor * t for d, t in self.parts.items()})

    def _check_compatible(self, other: SpherePolynomial) -> None:
        if other.n != self.n:
            raise DimensionError(
                f"polynomials live in different dimensions: {self.n} vs {other.n}",
                n=other.n,
                required=self.n,
            )

    # -------------------------------------------------------------------------
    # evaluation and calculus
    # -------------------------------------------------------------------------

    def evaluate(self, points: FloatArray) -> FloatArray:
        """Values at the rows of points (P, n)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        total = np.zeros(points.shape[0])
        for tensor in self.parts.values():
            total = total + _contract_points(tensor, points)
        return total

    def ambient_gradient(self, points: FloatArray) -> FloatArray:
        """Ambient gradient at each point, shape (P, n)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        total = np.zeros_like(points)
        for degree, tensor in self.parts.items():
            if degree == 0:
                continue
            if degree == 1:
                total = total + tensor[None, :]
                continue
            reduced = np.moveaxis(tensor, -1, 0)
            values = np.stack([_contract_points(reduced[k], points) for k in range(self.n)], axis=1)
            total = total + degree * values
        return total

    def sphere_gradient(self, points: FloatArray) -> FloatArray:
        """Tangential projection (I - x x^T) of the ambient gradient."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        grad = self.ambient_gradient(points)
        radial = np.sum(grad * points, axis=1)
        return grad - radial[:, None] * points

    def directional(self, v: Vector) -> SpherePolynomial:
        """Polynomial x -> grad f(x) . v."""
        parts: dict[int, FloatArray] = {}
        for degree, tensor in self.parts.items():
            if degree == 0:
                continue
            parts[degree - 1] = degree * np.tensordot(tensor, v, axes=([-1], [0]))
        return SpherePolynomial(self.n, parts)

    def linear_directional(self, m: Matrix) -> SpherePolynomial:
        """Polynomial x -> grad f(x) . (M x)."""
        parts: dict[int, FloatArray] = {}
        for degree, tensor in self.parts.items():
            if degree == 0:
                continue
            parts[degree] = degree * np.tensordot(tensor, m, axes=([-1], [0]))
        return SpherePolynomial(self.n, parts)

    def euler(self) -> SpherePolynomial:
        """x . grad f, that is degree times each homogeneous part."""
        return SpherePolynomial(self.n, {d: d * t for d, t in self.parts.items() if d > 0})

    def ambient_laplacian(self) -> SpherePolynomial:
        """Euclidean Laplacian of the homogeneous extension."""
        parts: dict[int, FloatArray] = {}
        for degree, tensor in self.parts.items():
            if degree < 2:
                continue
            parts[degree - 2] = degree * (degree - 1) * np.trace(tensor, axis1=-2, axis2=-1)
        return SpherePolynomial(self.n, parts)

    def sphere_laplacian(self) -> SpherePolynomial:
        """Laplace-Beltrami operator of S^{n-1} applied to the restriction."""
        shift = SpherePolynomial(
            self.n, {d: -d * (d + self.n - 2) * t for d, t in self.parts.items() if d > 0}
        )
        return self.ambient_laplacian() + shift

    def sphere_hessian(self, points: FloatArray) -> FloatArray:
        """
        Hessian of the restriction at each point, shape (P, n, n).

        Hess_S f = P (D^2 f) P - (x . grad f) P with P = I - x x^T.
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        count = points.shape[0]
        ambient = np.zeros((count, self.n, self.n))
        for degree, tensor in self.parts.items():
            if degree < 2:
                continue
            reduced = np.moveaxis(tensor, (-2, -1), (0, 1))
            for i in range(self.n):
                for j in range(self.n):
                    ambient[:, i, j] += (
                        degree * (degree - 1) * _contract_points(reduced[i, j], points)
                    )
        proj = np.eye(self.n)[None] - np.einsum("pi,pj->pij", points, points)
        radial = self.euler().evaluate(points)
        return np.asarray(proj @ ambient @ proj - radial[:, None, None] * proj)

    def integrate(self) -> float:
        """Exact integral over the unit sphere S^{n-1}."""
        return float(
            sum(np.sum(tensor * moment_tensor(self.n, d)) for d, tensor in self.parts.items())
        )

    def l2_inner(self, other: SpherePolynomial) -> float:
        """Exact L^2(S^{n-1}) inner product."""
        return (self * other).integrate()


def coordinate(n: int, index: int) -> SpherePolynomial:
    """The restriction of the coordinate x_index."""
    a = np.zeros(n)
    a[index] = 1.0
    return SpherePolynomial.linear(a)
