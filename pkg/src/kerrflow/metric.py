"""Kerr metric components, inverse quadratic form, and Killing contractions.

The separated inverse-metric pieces `radial_term` and `polar_term` are the
workhorses of the whole package: the quadratic form of a covector is
(radial_term + polar_term) / rho^2 in Boyer-Lindquist components.  They are
written with numpy-compatible arithmetic so they accept scalars or arrays.
"""

from __future__ import annotations

import math

import numpy as np

from .charts import ChartId, ChartPoint, Covector, chart_map_cov
from .errors import OutsideChart
from .params import SpacetimeParams


def metric_scalars(params: SpacetimeParams, r, theta):
    """Return (Delta, rho^2, sigma^2) at (r, theta); array-safe."""
    a = params.a
    delta = params.delta(r)
    sin2 = np.sin(theta) ** 2
    rho2 = r * r + a * a * (1.0 - sin2)
    sigma2 = (r * r + a * a) ** 2 - a * a * delta * sin2
    return delta, rho2, sigma2


def radial_term(params: SpacetimeParams, r, xi_t, xi_r, xi_phi):
    """Radial piece of rho^2 * g^{-1}(xi, xi); array-safe."""
    a = params.a
    delta = params.delta(r)
    q = (r * r + a * a) * xi_t + a * xi_phi
    return delta * xi_r * xi_r - q * q / delta


def polar_term(params: SpacetimeParams, theta, xi_t, xi_theta, xi_phi):
    """Polar piece of rho^2 * g^{-1}(xi, xi); array-safe."""
    a = params.a
    sin2 = np.sin(theta) ** 2
    u = a * sin2 * xi_t + xi_phi
    return xi_theta * xi_theta + u * u / sin2


def polar_term_stereo(params: SpacetimeParams, x1, x2, xi_t, xi_1, xi_2):
    """Polar piece in the stereographic patch; smooth through the axis.

    Identical to polar_term under the patch's cotangent identification:
    xi1^2 + xi2^2 - (x.xi)^2 + 2 a xi_t (x1 xi2 - x2 xi1)
    + a^2 (x1^2 + x2^2) xi_t^2.
    """
    a = params.a
    dot = x1 * xi_1 + x2 * xi_2
    ang = x1 * xi_2 - x2 * xi_1
    s2 = x1 * x1 + x2 * x2
    return (xi_1 * xi_1 + xi_2 * xi_2 - dot * dot
            + 2.0 * a * xi_t * ang + a * a * s2 * xi_t * xi_t)


def radial_term_dr(params: SpacetimeParams, r, xi_t, xi_r, xi_phi):
    """d/dr of radial_term at fixed covector; array-safe."""
    a = params.a
    delta = params.delta(r)
    ddelta = 2.0 * (r - params.M)
    q = (r * r + a * a) * xi_t + a * xi_phi
    return (ddelta * xi_r * xi_r
            - (4.0 * r * xi_t * q * delta - q * q * ddelta) / (delta * delta))


def quadform_bl(params: SpacetimeParams, r, theta, xi_t, xi_r, xi_theta, xi_phi):
    """g^{-1}(xi, xi) in Boyer-Lindquist components; array-safe."""
    _, rho2, _ = metric_scalars(params, r, theta)
    return (radial_term(params, r, xi_t, xi_r, xi_phi)
            + polar_term(params, theta, xi_t, xi_theta, xi_phi)) / rho2


def metric_cov(params: SpacetimeParams, x: ChartPoint) -> np.ndarray:
    """Covariant metric components as a symmetric 4x4 array.

    Closed tables exist for BL_I, KerrStar and StarKerr; other charts have
    no direct table here (transport the covector instead).
    """
    if x.chart == ChartId.BL_I:
        t, r, theta, phi = x.coords
        if not r > params.r_plus:
            raise OutsideChart(f"metric table needs r > r_plus, got r = {r}")
        return _bl_table(params, r, theta)
    if x.chart in (ChartId.KerrStar, ChartId.StarKerr):
        _, r, theta, _ = x.coords
        if not r > params.r_minus:
            raise OutsideChart(f"metric table needs r > r_minus, got r = {r}")
        return _star_table(params, r, theta,
                           sign=+1.0 if x.chart == ChartId.KerrStar else -1.0)
    raise OutsideChart(f"no covariant table for chart {x.chart.value}")


def _bl_table(params: SpacetimeParams, r: float, theta: float) -> np.ndarray:
    M, a = params.M, params.a
    delta, rho2, sigma2 = metric_scalars(params, r, theta)
    sin2 = math.sin(theta) ** 2
    g = np.zeros((4, 4))
    g[0, 0] = -(1.0 - 2.0 * M * r / rho2)
    g[0, 3] = g[3, 0] = -2.0 * a * M * r * sin2 / rho2
    g[1, 1] = rho2 / delta
    g[2, 2] = rho2
    g[3, 3] = sigma2 * sin2 / rho2
    return g


def _star_table(params: SpacetimeParams, r: float, theta: float,
                sign: float) -> np.ndarray:
    """Kerr-star (sign=+1) / star-Kerr (sign=-1) covariant table."""
    M, a = params.M, params.a
    _, rho2, sigma2 = metric_scalars(params, r, theta)
    sin2 = math.sin(theta) ** 2
    g = np.zeros((4, 4))
    g[0, 0] = -(1.0 - 2.0 * M * r / rho2)
    g[0, 3] = g[3, 0] = -2.0 * a * M * r * sin2 / rho2
    g[3, 3] = sigma2 * sin2 / rho2
    g[0, 1] = g[1, 0] = sign * 1.0
    g[1, 3] = g[3, 1] = -sign * a * sin2
    g[2, 2] = rho2
    return g


def quadform(params: SpacetimeParams, x: ChartPoint, xi: Covector) -> float:
    """g^{-1}(xi, xi) evaluated in the covector's own chart.

    BL_I and AxisStereo use closed separated forms; KerrStar/StarKerr invert
    their covariant tables; Kruskal and Conformal are evaluated after exact
    transport to KerrStar (no covariant table is used for those charts).
    """
    if xi.chart != x.chart:
        raise OutsideChart("covector chart does not match point chart")
    if x.chart == ChartId.BL_I:
        _, r, theta, _ = x.coords
        return float(quadform_bl(params, r, theta, *xi.comps))
    if x.chart == ChartId.AxisStereo:
        t, r, x1, x2 = x.coords
        kt, kr, k1, k2 = xi.comps
        s2 = x1 * x1 + x2 * x2
        rho2 = r * r + params.a**2 * (1.0 - s2)
        ang = x1 * k2 - x2 * k1
        return float((radial_term(params, r, kt, kr, ang)
                      + polar_term_stereo(params, x1, x2, kt, k1, k2)) / rho2)
    if x.chart in (ChartId.KerrStar, ChartId.StarKerr):
        g = metric_cov(params, x)
        v = np.linalg.solve(g, np.asarray(xi.comps))
        return float(np.asarray(xi.comps) @ v)
    if x.chart in (ChartId.Kruskal, ChartId.Conformal):
        xs, ks = chart_map_cov(params, x, xi, ChartId.KerrStar)
        return quadform(params, xs, ks)
    raise OutsideChart(f"unknown chart {x.chart}")  # pragma: no cover


def killing_contraction(params: SpacetimeParams, x: ChartPoint, xi: Covector,
                        field: str) -> float:
    """Contraction of xi with a Killing field, 'v_I' or 'v_H'.

    In BL components: v_I -> xi_t, v_H -> xi_t + Omega_H xi_phi.  The
    Kruskal chart is also supported (the fields' Kruskal expressions).
    """
    if field not in ("v_I", "v_H"):
        raise ValueError(f"unknown Killing field {field!r}")
    k = xi.comps
    if xi.chart in (ChartId.BL_I, ChartId.KerrStar, ChartId.StarKerr,
                    ChartId.Conformal):
        # t-type and phi-type components are shared by these charts
        return k[0] if field == "v_I" else k[0] + params.Omega_H * k[3]
    if xi.chart == ChartId.Kruskal:
        U, V, _, _ = x.coords
        vh = params.kappa_plus * (V * k[1] - U * k[0])
        return vh if field == "v_H" else vh - params.Omega_H * k[3]
    if xi.chart == ChartId.AxisStereo:
        # on-patch phi-component is x1 xi2 - x2 xi1
        _, _, x1, x2 = x.coords
        ang = x1 * k[3] - x2 * k[2]
        return k[0] if field == "v_I" else k[0] + params.Omega_H * ang
    raise OutsideChart(f"unknown chart {xi.chart}")  # pragma: no cover


def ergoregion_membership(params: SpacetimeParams, x: ChartPoint,
                          field: str) -> bool:
    """True iff the Killing field is spacelike at x (BL_I point)."""
    if x.chart != ChartId.BL_I:
        raise OutsideChart("ergoregion test expects a BL_I point")
    if field not in ("v_I", "v_H"):
        raise ValueError(f"unknown Killing field {field!r}")
    _, r, theta, _ = x.coords
    M, a = params.M, params.a
    _, rho2, sigma2 = metric_scalars(params, r, theta)
    if field == "v_I":
        return rho2 - 2.0 * M * r < 0.0
    sin2 = math.sin(theta) ** 2
    om = params.Omega_H
    val = ((1.0 - 2.0 * M * r / rho2)
           + (4.0 * a * M * r * sin2 / rho2) * om
           - (sigma2 / rho2) * sin2 * om * om)
    return val < 0.0
