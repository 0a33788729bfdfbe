"""Construction and classification of null covectors.

A null covector at a Boyer-Lindquist point is fixed by its spatial part
(xi_r, xi_theta, xi_phi) plus a branch choice for xi_t; the plus branch is
future pointing and the minus branch past pointing.  On the rotation axis
the polar chart degenerates and the stereographic patch takes over.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .charts import ChartId, ChartPoint, Covector
from .errors import DegenerateZero, NotNull, OnAxis, OutsideChart, ZeroSpatialPart
from .metric import metric_scalars, quadform
from .params import SpacetimeParams
from .tolerances import DEFAULT_TOL, ToleranceConfig


class OrientationTag(str, enum.Enum):
    Future = "Future"
    Past = "Past"


class NullCompletionChoice(str, enum.Enum):
    """Branch of the time component; Plus is future, Minus is past."""

    Plus = "Plus"
    Minus = "Minus"


def _branch_sign(choice) -> float:
    if isinstance(choice, NullCompletionChoice):
        choice = choice.value
    if choice in ("Plus", "+", "plus"):
        return 1.0
    if choice in ("Minus", "-", "minus"):
        return -1.0
    raise ValueError(f"unknown branch choice {choice!r}")


def xi_t_on_shell(params: SpacetimeParams, r, theta, xi_r, xi_theta, xi_phi,
                  sign):
    """Time component closing the null shell; array-safe.

    xi_t = -2Mar/sigma^2 * xi_phi
           +/- sqrt(Delta/sigma^2 (Delta xi_r^2 + xi_theta^2
                                   + rho^4/(sigma^2 sin^2) xi_phi^2))
    """
    M, a = params.M, params.a
    delta, rho2, sigma2 = metric_scalars(params, r, theta)
    sin2 = np.sin(theta) ** 2
    rad = (delta / sigma2) * (delta * xi_r * xi_r + xi_theta * xi_theta
                              + rho2 * rho2 / (sigma2 * sin2) * xi_phi * xi_phi)
    return -2.0 * M * a * r / sigma2 * xi_phi + sign * np.sqrt(rad)


def complete_null(params: SpacetimeParams, x: ChartPoint, xi_r: float,
                  xi_theta: float, xi_phi: float, choice,
                  tol: ToleranceConfig = DEFAULT_TOL) -> Covector:
    """Complete a spatial covector part to the null shell at a BL_I point."""
    if x.chart != ChartId.BL_I:
        raise OutsideChart("complete_null expects a BL_I point")
    _, r, theta, _ = x.coords
    if math.sin(theta) < tol.axis_sin:
        raise OnAxis("too close to the axis; use complete_null_axis")
    if xi_r == 0.0 and xi_theta == 0.0 and xi_phi == 0.0:
        raise ZeroSpatialPart("spatial covector part vanishes")
    sign = _branch_sign(choice)
    xi_t = float(xi_t_on_shell(params, r, theta, xi_r, xi_theta, xi_phi, sign))
    return Covector(ChartId.BL_I, (xi_t, xi_r, xi_theta, xi_phi))


def xi_t_on_shell_axis(params: SpacetimeParams, r, xi_r, xi_1, xi_2, sign):
    """On-axis time component: +/- sqrt(Delta/(r^2+a^2)^2 (xi1^2+xi2^2+Delta xi_r^2))."""
    a = params.a
    delta = params.delta(r)
    return sign * np.sqrt(delta / (r * r + a * a) ** 2
                          * (xi_1 * xi_1 + xi_2 * xi_2 + delta * xi_r * xi_r))


def complete_null_axis(params: SpacetimeParams, x: ChartPoint, xi_r: float,
                       xi_1: float, xi_2: float, choice) -> Covector:
    """Complete to the null shell at a stereographic-patch point."""
    if x.chart != ChartId.AxisStereo:
        raise OutsideChart("complete_null_axis expects an AxisStereo point")
    if xi_r == 0.0 and xi_1 == 0.0 and xi_2 == 0.0:
        raise ZeroSpatialPart("spatial covector part vanishes")
    _, r, _, _ = x.coords
    sign = _branch_sign(choice)
    xi_t = float(xi_t_on_shell_axis(params, r, xi_r, xi_1, xi_2, sign))
    return Covector(ChartId.AxisStereo, (xi_t, xi_r, xi_1, xi_2), pole=x.pole)


def grad_t_contraction(params: SpacetimeParams, x: ChartPoint,
                       xi: Covector) -> float:
    """xi . (-grad t) = (sigma^2 xi_t + 2Mar xi_phi) / (rho^2 Delta).

    Positive exactly for future-pointing causal covectors.  Supports BL_I
    and the stereographic patch (where -grad t = (r^2+a^2)/Delta d/dt on
    the axis and the phi-component is x1 xi2 - x2 xi1 off it).
    """
    M, a = params.M, params.a
    if x.chart == ChartId.BL_I:
        _, r, theta, _ = x.coords
        delta, rho2, sigma2 = metric_scalars(params, r, theta)
        xi_t, _, _, xi_phi = xi.comps
        return (sigma2 * xi_t + 2.0 * M * a * r * xi_phi) / (rho2 * delta)
    if x.chart == ChartId.AxisStereo:
        _, r, x1, x2 = x.coords
        xi_t, _, k1, k2 = xi.comps
        s2 = x1 * x1 + x2 * x2
        sin2 = s2  # sin^2(theta) on the patch
        delta = params.delta(r)
        rho2 = r * r + a * a * (1.0 - sin2)
        sigma2 = (r * r + a * a) ** 2 - a * a * delta * sin2
        xi_phi = x1 * k2 - x2 * k1
        return (sigma2 * xi_t + 2.0 * M * a * r * xi_phi) / (rho2 * delta)
    raise OutsideChart("grad_t_contraction expects BL_I or AxisStereo")


def orientation(params: SpacetimeParams, x: ChartPoint, xi: Covector,
                tol: ToleranceConfig = DEFAULT_TOL) -> OrientationTag:
    """Classify a null covector as Future or Past via the -grad t sign."""
    scale = xi.norm()
    if scale == 0.0:
        raise ZeroSpatialPart("zero covector has no orientation")
    q = quadform(params, x, xi)
    if abs(q) > tol.null_tol * scale * scale:
        raise NotNull(f"quadform residual {q:.3e} exceeds tolerance")
    contr = grad_t_contraction(params, x, xi)
    if abs(contr) < tol.degenerate * scale:
        raise DegenerateZero("orientation contraction below tolerance")
    return OrientationTag.Future if contr > 0.0 else OrientationTag.Past
