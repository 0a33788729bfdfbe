"""Chart atlas for the Kerr exterior.

Charts and their coordinate orders:

* BL_I        (t, r, theta, phi)        Boyer-Lindquist, r > r_plus
* KerrStar    (t*, r, theta, phi*)      regular across the future horizon
* StarKerr    (*t, r, theta, *phi)      regular across the past horizon
* Kruskal     (U, V, theta, phi#)       maximal extension; block I is U,V > 0
* Conformal   (t* or *t, w, theta, phi* or *phi), w = 1/r, with a
              past/future variant flag; past null infinity is w -> 0+
* AxisStereo  (t, r, x1, x2)            stereographic polar patch, with a
              north/south pole flag

phi-type coordinates are kept unwrapped (on the real line) so that covector
transport stays smooth; wrap only at I/O if needed.

Covectors transform with the Jacobian transpose of the inverse coordinate
map, so round trips are exact up to floating point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from scipy.optimize import brentq

from .errors import ChartDomain, HorizonSingular, NoBracket, OutsideChart
from .params import SpacetimeParams

# exp() overflows past ~709; reject Kruskal images before that point
_EXP_LIMIT = 700.0


class ChartId(str, enum.Enum):
    BL_I = "BL_I"
    KerrStar = "KerrStar"
    StarKerr = "StarKerr"
    Kruskal = "Kruskal"
    Conformal = "Conformal"
    AxisStereo = "AxisStereo"


@dataclass(frozen=True)
class ChartPoint:
    """A spacetime event tagged with the chart it is expressed in.

    `variant` ("past"/"future") is meaningful only for Conformal charts,
    `pole` ("north"/"south") only for AxisStereo.
    """

    chart: ChartId
    coords: tuple[float, float, float, float]
    variant: str = "past"
    pole: str = "north"


@dataclass(frozen=True)
class Covector:
    """Cotangent components in the coordinate order of `chart`."""

    chart: ChartId
    comps: tuple[float, float, float, float]
    variant: str = "past"
    pole: str = "north"

    def norm(self) -> float:
        return math.sqrt(sum(c * c for c in self.comps))


# ---------------------------------------------------------------------------
# tortoise-type radial functions
# ---------------------------------------------------------------------------


def tortoise_coeffs(params: SpacetimeParams) -> tuple[float, float]:
    """Partial-fraction coefficients of (r^2+a^2)/Delta - 1.

    c_plus = (r_+^2+a^2)/(r_+-r_-) = 1/(2 kappa_+); the r_- coefficient
    vanishes for a = 0.
    """
    rp, rm, a = params.r_plus, params.r_minus, params.a
    c_plus = (rp * rp + a * a) / (rp - rm)
    c_minus = -(rm * rm + a * a) / (rp - rm)
    return c_plus, c_minus


def tortoise(params: SpacetimeParams, r: float) -> float:
    """x(r) with dx/dr = (r^2+a^2)/Delta, integration constant zero."""
    rp, rm = params.r_plus, params.r_minus
    if r == rp or r == rm:
        raise HorizonSingular(f"tortoise coordinate singular at r = {r}")
    c_plus, c_minus = tortoise_coeffs(params)
    out = r + c_plus * math.log(abs(r - rp))
    if c_minus != 0.0:
        out += c_minus * math.log(abs(r - rm))
    return out


def axial_shift(params: SpacetimeParams, r: float) -> float:
    """Lambda(r) with dLambda/dr = a/Delta, integration constant zero."""
    rp, rm, a = params.r_plus, params.r_minus, params.a
    if a == 0.0:
        return 0.0
    if r == rp or r == rm:
        raise HorizonSingular(f"axial shift singular at r = {r}")
    return (a / (rp - rm)) * math.log(abs((r - rp) / (r - rm)))


def dtortoise_dr(params: SpacetimeParams, r: float) -> float:
    return (r * r + params.a**2) / params.delta(r)


def daxial_dr(params: SpacetimeParams, r: float) -> float:
    return params.a / params.delta(r)


# ---------------------------------------------------------------------------
# Kruskal radius inversion
# ---------------------------------------------------------------------------


def kruskal_uv_from_r(params: SpacetimeParams, r: float) -> float:
    """UV as a function of r on block I/II: UV = (r - r_+)/G(r)."""
    return (r - params.r_plus) / _kruskal_g(params, r)


def _kruskal_g(params: SpacetimeParams, r: float) -> float:
    """G(r) = exp(-2 kappa_+ r) (r - r_-)^(r_-/r_+)."""
    rp, rm = params.r_plus, params.r_minus
    expo = rm / rp
    base = r - rm
    if base <= 0.0:
        raise ChartDomain(f"r = {r} <= r_minus = {rm}")
    return math.exp(-2.0 * params.kappa_plus * r) * base**expo


def kruskal_r_from_UV(params: SpacetimeParams, UV: float) -> float:
    """Invert UV = (r - r_+)/G(r) on r in (r_minus, infinity).

    Bracketed solve (brentq); residual below 1e-12 * max(1, |r|).
    """
    rp, rm = params.r_plus, params.r_minus
    if not math.isfinite(UV):
        raise NoBracket(f"UV = {UV} not finite")
    if UV == 0.0:
        return rp

    def f(r):
        return (r - rp) - UV * _kruskal_g(params, r)

    if UV > 0.0:
        lo = rp
        hi = rp + max(1.0, params.M)
        for _ in range(400):
            if f(hi) > 0.0:
                break
            hi *= 2.0
        else:
            raise NoBracket(f"UV = {UV} outside attainable range")
    else:
        # block II: r in (r_minus, r_plus); f(r_plus) > 0
        hi = rp
        lo = rm + (rp - rm) * 1e-15
        flo = f(lo)
        if flo > 0.0:
            raise NoBracket(f"UV = {UV} outside attainable range")
        if flo == 0.0:
            return lo
    root = brentq(f, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    if abs(f(root)) > 1e-12 * max(1.0, abs(root), abs(UV)):
        raise NoBracket(f"residual too large inverting UV = {UV}")
    return root


# ---------------------------------------------------------------------------
# domain validation
# ---------------------------------------------------------------------------


def validate_point(params: SpacetimeParams, x: ChartPoint) -> None:
    """Raise OutsideChart if x violates its chart's domain."""
    c = x.coords
    if x.chart == ChartId.BL_I:
        _, r, theta, _ = c
        if not r > params.r_plus:
            raise OutsideChart(f"BL_I requires r > r_plus, got r = {r}")
        _check_polar(theta)
    elif x.chart in (ChartId.KerrStar, ChartId.StarKerr):
        _, r, theta, _ = c
        if not r > params.r_minus:
            raise OutsideChart(f"{x.chart.value} requires r > r_minus, got r = {r}")
        _check_polar(theta)
    elif x.chart == ChartId.Kruskal:
        U, V, theta, _ = c
        _check_polar(theta)
        if not (math.isfinite(U) and math.isfinite(V)):
            raise OutsideChart("Kruskal coordinates must be finite")
        kruskal_r_from_UV(params, U * V)  # raises NoBracket if unattainable
    elif x.chart == ChartId.Conformal:
        _, w, theta, _ = c
        if not (0.0 < w < 1.0 / params.r_plus):
            raise OutsideChart(f"Conformal requires 0 < w < 1/r_plus, got w = {w}")
        _check_polar(theta)
    elif x.chart == ChartId.AxisStereo:
        _, r, x1, x2 = c
        if not r > params.r_plus:
            raise OutsideChart(f"AxisStereo requires r > r_plus, got r = {r}")
        if not x1 * x1 + x2 * x2 < 1.0:
            raise OutsideChart("AxisStereo requires x1^2 + x2^2 < 1")
    else:  # pragma: no cover
        raise OutsideChart(f"unknown chart {x.chart}")


def _check_polar(theta: float) -> None:
    if not 0.0 < theta < math.pi:
        raise OutsideChart(f"polar chart requires 0 < theta < pi, got {theta}")


# ---------------------------------------------------------------------------
# chart maps (point + covector), BL_I as the hub
# ---------------------------------------------------------------------------


def chart_map(params: SpacetimeParams, x: ChartPoint, target: ChartId,
              variant: str = "past", pole: str = "north") -> ChartPoint:
    """Map a point to `target`; routes through BL_I on block I."""
    if isinstance(target, str):
        target = ChartId(target)
    if x.chart == target:
        if target == ChartId.Conformal and x.variant != variant:
            pass  # re-route below to change variant
        elif target == ChartId.AxisStereo and x.pole != pole:
            pass
        else:
            return x
    validate_point(params, x)
    bl = _point_to_bl(params, x)
    out = _point_from_bl(params, bl, target, variant=variant, pole=pole)
    validate_point(params, out)
    return out


def chart_map_cov(params: SpacetimeParams, x: ChartPoint, xi: Covector,
                  target: ChartId, variant: str = "past",
                  pole: str = "north") -> tuple[ChartPoint, Covector]:
    """Map an event/covector pair to `target` (Jacobian-transpose pullback)."""
    if isinstance(target, str):
        target = ChartId(target)
    if xi.chart != x.chart:
        raise OutsideChart("covector chart does not match point chart")
    if x.chart == target and not (
        (target == ChartId.Conformal and x.variant != variant)
        or (target == ChartId.AxisStereo and x.pole != pole)
    ):
        return x, xi
    validate_point(params, x)
    bl_x, bl_xi = _cov_to_bl(params, x, xi)
    out_x = _point_from_bl(params, bl_x, target, variant=variant, pole=pole)
    out_xi = _cov_from_bl(params, bl_x, bl_xi, target, variant=variant, pole=pole)
    validate_point(params, out_x)
    return out_x, out_xi


# ---- to BL_I ----


def _point_to_bl(params: SpacetimeParams, x: ChartPoint) -> ChartPoint:
    c = x.coords
    if x.chart == ChartId.BL_I:
        return x
    if x.chart == ChartId.KerrStar:
        ts, r, theta, ps = c
        _require_exterior(params, r)
        return ChartPoint(ChartId.BL_I, (ts - tortoise(params, r), r, theta,
                                         ps - axial_shift(params, r)))
    if x.chart == ChartId.StarKerr:
        st, r, theta, sp = c
        _require_exterior(params, r)
        return ChartPoint(ChartId.BL_I, (st + tortoise(params, r), r, theta,
                                         sp + axial_shift(params, r)))
    if x.chart == ChartId.Kruskal:
        U, V, theta, ph = c
        if not (U > 0.0 and V > 0.0):
            raise ChartDomain("block I requires U > 0 and V > 0")
        r = kruskal_r_from_UV(params, U * V)
        _require_exterior(params, r)
        t = math.log(V / U) / (2.0 * params.kappa_plus)
        phi = ph + params.Omega_H * t
        return ChartPoint(ChartId.BL_I, (t, r, theta, phi))
    if x.chart == ChartId.Conformal:
        tc, w, theta, pc = c
        r = 1.0 / w
        _require_exterior(params, r)
        xr, lam = tortoise(params, r), axial_shift(params, r)
        if x.variant == "past":
            return ChartPoint(ChartId.BL_I, (tc - xr, r, theta, pc - lam))
        return ChartPoint(ChartId.BL_I, (tc + xr, r, theta, pc + lam))
    if x.chart == ChartId.AxisStereo:
        t, r, x1, x2 = c
        _require_exterior(params, r)
        s = math.hypot(x1, x2)
        if s == 0.0:
            raise ChartDomain("polar charts exclude the axis itself")
        theta = math.asin(min(s, 1.0))
        if x.pole == "south":
            theta = math.pi - theta
        phi = math.atan2(x2, x1)
        return ChartPoint(ChartId.BL_I, (t, r, theta, phi))
    raise OutsideChart(f"unknown chart {x.chart}")  # pragma: no cover


def _cov_to_bl(params: SpacetimeParams, x: ChartPoint,
               xi: Covector) -> tuple[ChartPoint, Covector]:
    bl_x = _point_to_bl(params, x)
    c, k = x.coords, xi.comps
    if x.chart == ChartId.BL_I:
        return bl_x, xi
    if x.chart == ChartId.KerrStar:
        _, r, _, _ = c
        xp, lp = dtortoise_dr(params, r), daxial_dr(params, r)
        comps = (k[0], k[1] + xp * k[0] + lp * k[3], k[2], k[3])
        return bl_x, Covector(ChartId.BL_I, comps)
    if x.chart == ChartId.StarKerr:
        _, r, _, _ = c
        xp, lp = dtortoise_dr(params, r), daxial_dr(params, r)
        comps = (k[0], k[1] - xp * k[0] - lp * k[3], k[2], k[3])
        return bl_x, Covector(ChartId.BL_I, comps)
    if x.chart == ChartId.Kruskal:
        U, V, _, _ = c
        r = bl_x.coords[1]
        kU, kV, kth, kph = k
        kap = params.kappa_plus
        xi_phi = kph
        xi_t = kap * (V * kV - U * kU) - params.Omega_H * xi_phi
        xi_r = kap * (U * kU + V * kV) * (r * r + params.a**2) / params.delta(r)
        return bl_x, Covector(ChartId.BL_I, (xi_t, xi_r, kth, xi_phi))
    if x.chart == ChartId.Conformal:
        _, w, _, _ = c
        r = 1.0 / w
        xp, lp = dtortoise_dr(params, r), daxial_dr(params, r)
        xi_rstar = -w * w * k[1]
        if x.variant == "past":
            xi_r = xi_rstar + xp * k[0] + lp * k[3]
        else:
            xi_r = xi_rstar - xp * k[0] - lp * k[3]
        return bl_x, Covector(ChartId.BL_I, (k[0], xi_r, k[2], k[3]))
    if x.chart == ChartId.AxisStereo:
        _, _, x1, x2 = c
        kt, kr, k1, k2 = k
        s2 = x1 * x1 + x2 * x2
        s = math.sqrt(s2)
        cth = math.sqrt(max(0.0, 1.0 - s2))
        dot = x1 * k1 + x2 * k2
        xi_theta = (cth / s) * dot
        xi_phi = x1 * k2 - x2 * k1
        if x.pole == "south":
            xi_theta = -xi_theta
        return bl_x, Covector(ChartId.BL_I, (kt, kr, xi_theta, xi_phi))
    raise OutsideChart(f"unknown chart {x.chart}")  # pragma: no cover


# ---- from BL_I ----


def _point_from_bl(params: SpacetimeParams, bl: ChartPoint, target: ChartId,
                   variant: str, pole: str) -> ChartPoint:
    t, r, theta, phi = bl.coords
    if target == ChartId.BL_I:
        return bl
    _require_exterior(params, r)
    if target == ChartId.KerrStar:
        return ChartPoint(ChartId.KerrStar, (t + tortoise(params, r), r, theta,
                                             phi + axial_shift(params, r)))
    if target == ChartId.StarKerr:
        return ChartPoint(ChartId.StarKerr, (t - tortoise(params, r), r, theta,
                                             phi - axial_shift(params, r)))
    if target == ChartId.Kruskal:
        kap = params.kappa_plus
        xr = tortoise(params, r)
        au = -kap * (t - xr)
        av = kap * (t + xr)
        if abs(au) > _EXP_LIMIT or abs(av) > _EXP_LIMIT:
            raise ChartDomain("Kruskal exponentials overflow at this event")
        U, V = math.exp(au), math.exp(av)
        return ChartPoint(ChartId.Kruskal, (U, V, theta,
                                            phi - params.Omega_H * t))
    if target == ChartId.Conformal:
        w = 1.0 / r
        xr, lam = tortoise(params, r), axial_shift(params, r)
        if variant == "past":
            coords = (t + xr, w, theta, phi + lam)
        elif variant == "future":
            coords = (t - xr, w, theta, phi - lam)
        else:
            raise ChartDomain(f"unknown conformal variant {variant!r}")
        return ChartPoint(ChartId.Conformal, coords, variant=variant)
    if target == ChartId.AxisStereo:
        if pole == "north":
            th = theta
        elif pole == "south":
            th = math.pi - theta
        else:
            raise ChartDomain(f"unknown pole {pole!r}")
        if not th < math.pi / 2.0:
            raise ChartDomain("point outside the requested stereo patch")
        s = math.sin(th)
        return ChartPoint(ChartId.AxisStereo,
                          (t, r, s * math.cos(phi), s * math.sin(phi)),
                          pole=pole)
    raise OutsideChart(f"unknown chart {target}")  # pragma: no cover


def _cov_from_bl(params: SpacetimeParams, bl: ChartPoint, xi: Covector,
                 target: ChartId, variant: str, pole: str) -> Covector:
    t, r, theta, phi = bl.coords
    kt, kr, kth, kph = xi.comps
    if target == ChartId.BL_I:
        return xi
    if target == ChartId.KerrStar:
        xp, lp = dtortoise_dr(params, r), daxial_dr(params, r)
        return Covector(ChartId.KerrStar, (kt, kr - xp * kt - lp * kph, kth, kph))
    if target == ChartId.StarKerr:
        xp, lp = dtortoise_dr(params, r), daxial_dr(params, r)
        return Covector(ChartId.StarKerr, (kt, kr + xp * kt + lp * kph, kth, kph))
    if target == ChartId.Kruskal:
        pt = _point_from_bl(params, bl, ChartId.Kruskal, variant, pole)
        U, V, _, _ = pt.coords
        kap = params.kappa_plus
        delta = params.delta(r)
        radial = kr * delta / (r * r + params.a**2)
        axial = kt + params.Omega_H * kph
        kU = (-axial + radial) / (2.0 * kap * U)
        kV = (axial + radial) / (2.0 * kap * V)
        return Covector(ChartId.Kruskal, (kU, kV, kth, kph))
    if target == ChartId.Conformal:
        xp, lp = dtortoise_dr(params, r), daxial_dr(params, r)
        if variant == "past":
            xi_rstar = kr - xp * kt - lp * kph
        else:
            xi_rstar = kr + xp * kt + lp * kph
        return Covector(ChartId.Conformal, (kt, -r * r * xi_rstar, kth, kph),
                        variant=variant)
    if target == ChartId.AxisStereo:
        th, kth_eff = theta, kth
        if pole == "south":
            th, kth_eff = math.pi - theta, -kth
        sth, cth = math.sin(th), math.cos(th)
        if sth == 0.0 or cth <= 0.0:
            raise ChartDomain("covector pullback singular at patch boundary")
        A = kth_eff / cth
        B = kph / sth
        cph, sph = math.cos(phi), math.sin(phi)
        k1 = A * cph - B * sph
        k2 = A * sph + B * cph
        return Covector(ChartId.AxisStereo, (kt, kr, k1, k2), pole=pole)
    raise OutsideChart(f"unknown chart {target}")  # pragma: no cover


def _require_exterior(params: SpacetimeParams, r: float) -> None:
    if r == params.r_plus:
        raise HorizonSingular("map singular exactly at r = r_plus")
    if r < params.r_plus:
        raise ChartDomain(f"block I maps require r > r_plus, got r = {r}")


def wrap_angle(phi: float) -> float:
    """Reduce an unwrapped phi-type coordinate to [0, 2 pi) for I/O."""
    return phi % (2.0 * math.pi)
