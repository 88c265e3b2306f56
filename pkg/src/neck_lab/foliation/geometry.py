"""
Extrinsic and ambient geometry of axisymmetric graphs in a NeckMetric.

A leaf is the graph z = u(theta) over the polar angle. Writing m = n - 2
and Q = sqrt(1 + u'^2 / W), with W and its partials evaluated at
(u(theta), theta), the upward unit normal and mean curvature are

    nu = (1/Q) d_z - (u' / (W Q)) d_theta
    H  = div nu

and the induced metric is a dtheta^2 + b g_{S^{n-2}} with a = W + u'^2,
b = W sin^2(theta). The ambient metric is a warped product over the
two-dimensional base h = dz^2 + G^2 dtheta^2 (G = sqrt(W)) with fiber
S^{n-2} and warping F = G sin(theta), so Ricci curvature follows from the
base curvature K_B = -G_zz / G and the base Hessian of F:

    Ric(X, X) = K_B |X|^2 - (m/F) Hess F(X, X)          X horizontal
    Ric(U, U) = (m-1)(1 - |dF|^2)/F^2 - Lap F / F       U unit, vertical
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from neck_lab.core.types import FloatArray
from neck_lab.foliation.metric import NeckMetric, WarpSample


class GraphJet(NamedTuple):
    """Height u(theta) of a graph and its theta-derivatives."""

    theta: FloatArray
    u: FloatArray
    du: FloatArray
    ddu: FloatArray
    dddu: FloatArray


class ShapeOperator(NamedTuple):
    """Principal curvatures of an axisymmetric graph."""

    meridian: FloatArray
    fiber: FloatArray
    mean: FloatArray

    def norm_squared(self, n: int) -> FloatArray:
        """|A|^2 = k_theta^2 + (n-2) k_fiber^2."""
        return np.asarray(self.meridian**2 + (n - 2) * self.fiber**2)


class BaseGeometry(NamedTuple):
    """
    Curvature of the base h and derivatives of the warping F.

    slope_deficit is 1 - |dF|_h^2, expanded so that it stays accurate at the poles.
    """

    f: FloatArray
    f_z: FloatArray
    f_t: FloatArray
    g: FloatArray
    k_base: FloatArray
    hess_zz: FloatArray
    hess_zt: FloatArray
    hess_tt: FloatArray
    slope_deficit: FloatArray

    @property
    def laplacian(self) -> FloatArray:
        """Delta_h F."""
        return np.asarray(self.hess_zz + self.hess_tt / self.g**2)


def _ratio(jet: GraphJet, w: WarpSample) -> FloatArray:
    return np.asarray(np.sqrt(1.0 + jet.du**2 / w.w))


def mean_curvature(metric: NeckMetric, jet: GraphJet) -> FloatArray:
    """
    Pointwise mean curvature of the graph z = u(theta).

    Example:
        >>> theta = np.linspace(0.5, 2.5, 3)
        >>> jet = GraphJet(theta, np.zeros(3), np.zeros(3), np.zeros(3), np.zeros(3))
        >>> float(np.abs(mean_curvature(NeckMetric.cylinder(4), jet)).max())
        0.0
    """
    n, m = metric.n, metric.n - 2
    w = metric.sample(jet.u, jet.theta)
    p, q = jet.du, jet.ddu
    ratio = _ratio(jet, w)
    ratio_t = (p * q / w.w - p**2 * w.w_t / (2.0 * w.w**2)) / ratio
    cot = np.cos(jet.theta) / np.sin(jet.theta)
    vertical = (n - 1) * w.w_z / (2.0 * w.w * ratio) + p**2 * w.w_z / (2.0 * w.w**2 * ratio**3)
    angular = (((n - 1) * w.w_t / (2.0 * w.w) + m * cot) * p + q) / (w.w * ratio)
    correction = p * w.w_t / (w.w**2 * ratio) + p * ratio_t / (w.w * ratio**2)
    return np.asarray(vertical - angular + correction)


def unit_normal(metric: NeckMetric, jet: GraphJet) -> tuple[FloatArray, FloatArray]:
    """Components (nu^z, nu^theta) of the upward unit normal."""
    w = metric.sample(jet.u, jet.theta)
    ratio = _ratio(jet, w)
    return np.asarray(1.0 / ratio), np.asarray(-jet.du / (w.w * ratio))


def base_geometry(metric: NeckMetric, z: FloatArray, theta: FloatArray) -> BaseGeometry:
    """K_B, F and the base Hessian of F at (z, theta)."""
    w = metric.sample(z, theta)
    g = np.sqrt(w.w)
    g_z = w.w_z / (2.0 * g)
    g_t = w.w_t / (2.0 * g)
    g_zz = w.w_zz / (2.0 * g) - w.w_z**2 / (4.0 * g**3)
    g_zt = w.w_zt / (2.0 * g) - w.w_z * w.w_t / (4.0 * g**3)
    g_tt = w.w_tt / (2.0 * g) - w.w_t**2 / (4.0 * g**3)
    s, c = np.sin(theta), np.cos(theta)
    f = g * s
    f_z = g_z * s
    f_t = g_t * s + g * c
    f_zz = g_zz * s
    f_zt = g_zt * s + g_z * c
    f_tt = g_tt * s + 2.0 * g_t * c - g * s
    return BaseGeometry(
        f=f,
        f_z=f_z,
        f_t=f_t,
        g=g,
        k_base=-g_zz / g,
        hess_zz=f_zz,
        hess_zt=f_zt - (g_z / g) * f_t,
        hess_tt=f_tt + g * g_z * f_z - (g_t / g) * f_t,
        slope_deficit=s**2 * (1.0 - (g_t / g) ** 2) - 2.0 * c * s * (g_t / g) - f_z**2,
    )


def horizontal_ricci(
    metric: NeckMetric, z: FloatArray, theta: FloatArray, x_z: FloatArray, x_t: FloatArray
) -> FloatArray:
    """Ric(X, X) for the horizontal vector X = x_z d_z + x_t d_theta."""
    base = base_geometry(metric, z, theta)
    m = metric.n - 2
    length = x_z**2 + base.g**2 * x_t**2
    hessian = base.hess_zz * x_z**2 + 2.0 * base.hess_zt * x_z * x_t + base.hess_tt * x_t**2
    return np.asarray(base.k_base * length - (m / base.f) * hessian)


def fiber_ricci(metric: NeckMetric, z: FloatArray, theta: FloatArray) -> FloatArray:
    """Ric(U, U) for a unit vector U tangent to the S^{n-2} fibers."""
    base = base_geometry(metric, z, theta)
    m = metric.n - 2
    return np.asarray(
        (m - 1) * base.slope_deficit / base.f**2 - base.laplacian / base.f
    )


def scalar_curvature(metric: NeckMetric, z: FloatArray, theta: FloatArray) -> FloatArray:
    """
    R = 2 K_B - 2m Lap F / F + m(m-1)(1 - |dF|^2) / F^2.

    Example:
        >>> round(float(scalar_curvature(NeckMetric.cylinder(4), 0.0, 1.0)), 12)
        6.0
    """
    base = base_geometry(metric, np.asarray(z, dtype=float), np.asarray(theta, dtype=float))
    m = metric.n - 2
    return np.asarray(
        2.0 * base.k_base
        - 2.0 * m * base.laplacian / base.f
        + m * (m - 1) * base.slope_deficit / base.f**2
    )


def normal_ricci(metric: NeckMetric, jet: GraphJet) -> FloatArray:
    """Ric(nu, nu) along the graph."""
    nu_z, nu_t = unit_normal(metric, jet)
    return horizontal_ricci(metric, jet.u, jet.theta, nu_z, nu_t)


def shape_operator(metric: NeckMetric, jet: GraphJet) -> ShapeOperator:
    """Meridian and fiber principal curvatures; k_fiber = nu(log F)."""
    nu_z, nu_t = unit_normal(metric, jet)
    base = base_geometry(metric, jet.u, jet.theta)
    fiber = (nu_z * base.f_z + nu_t * base.f_t) / base.f
    mean = mean_curvature(metric, jet)
    return ShapeOperator(np.asarray(mean - (metric.n - 2) * fiber), np.asarray(fiber), mean)


class InducedMetric(NamedTuple):
    """a dtheta^2 + b g_{S^{n-2}} and the theta-derivatives of a and b."""

    a: FloatArray
    b: FloatArray
    da: FloatArray
    db: FloatArray


def induced_metric(metric: NeckMetric, jet: GraphJet) -> InducedMetric:
    """Coefficients of the metric induced on the graph."""
    w = metric.sample(jet.u, jet.theta)
    along = w.w_z * jet.du + w.w_t
    s = np.sin(jet.theta)
    return InducedMetric(
        a=np.asarray(w.w + jet.du**2),
        b=np.asarray(w.w * s**2),
        da=np.asarray(along + 2.0 * jet.du * jet.ddu),
        db=np.asarray(along * s**2 + 2.0 * w.w * s * np.cos(jet.theta)),
    )


def area_density(metric: NeckMetric, jet: GraphJet) -> FloatArray:
    """sqrt(a) b^{(n-2)/2}; integrate in theta and multiply by vol(S^{n-2})."""
    induced = induced_metric(metric, jet)
    return np.asarray(np.sqrt(induced.a) * induced.b ** ((metric.n - 2) / 2.0))


def leaf_laplacian(
    metric: NeckMetric, jet: GraphJet, v: FloatArray, dv: FloatArray, ddv: FloatArray
) -> FloatArray:
    """Laplace-Beltrami operator of the graph applied to an axisymmetric v(theta)."""
    induced = induced_metric(metric, jet)
    m = metric.n - 2
    drift = 0.5 * m * induced.db / induced.b - induced.da / (2.0 * induced.a)
    return np.asarray((ddv + dv * drift) / induced.a)


def jacobi_operator(
    metric: NeckMetric, jet: GraphJet, v: FloatArray, dv: FloatArray, ddv: FloatArray
) -> FloatArray:
    """Delta_Sigma v + (|A|^2 + Ric(nu, nu)) v."""
    potential = shape_operator(metric, jet).norm_squared(metric.n) + normal_ricci(metric, jet)
    return np.asarray(leaf_laplacian(metric, jet, v, dv, ddv) + potential * v)


def normal_speed(
    metric: NeckMetric, jet: GraphJet, w: FloatArray, dw: FloatArray, ddw: FloatArray
) -> tuple[FloatArray, FloatArray, FloatArray]:
    """
    v = w / Q with its first two theta-derivatives along the graph.

    w is the vertical velocity of a family of graphs; v is its normal
    component, the lapse of the family.
    """
    s = metric.sample(jet.u, jet.theta)
    p, q, r = jet.du, jet.ddu, jet.dddu
    dwarp = s.w_z * p + s.w_t
    ddwarp = s.w_zz * p**2 + 2.0 * s.w_zt * p + s.w_tt + s.w_z * q
    d = p**2 / s.w
    dd = 2.0 * p * q / s.w - p**2 * dwarp / s.w**2
    ddd = (
        2.0 * (q**2 + p * r) / s.w
        - 4.0 * p * q * dwarp / s.w**2
        - p**2 * ddwarp / s.w**2
        + 2.0 * p**2 * dwarp**2 / s.w**3
    )
    ratio = np.sqrt(1.0 + d)
    dratio = dd / (2.0 * ratio)
    ddratio = ddd / (2.0 * ratio) - dd**2 / (4.0 * ratio**3)
    v = w / ratio
    dv = dw / ratio - w * dratio / ratio**2
    ddv = (
        ddw / ratio
        - 2.0 * dw * dratio / ratio**2
        - w * ddratio / ratio**2
        + 2.0 * w * dratio**2 / ratio**3
    )
    return np.asarray(v), np.asarray(dv), np.asarray(ddv)
