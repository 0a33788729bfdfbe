"""Null bicharacteristic flow of the rescaled Hamiltonian.

The Hamiltonian is G = radial_term + polar_term (rho^2 times the inverse
quadratic form), whose flow coincides with the null geodesic flow up to
parameterization.  Integration runs in Boyer-Lindquist coordinates and
switches to the stereographic polar patch near the axis; trajectories end
at the horizon pad, at the escape radius, or when the parameter budget is
exhausted.

Direction bookkeeping: the tangent dx/ds = dG/dxi is 2 rho^2 xi-sharp,
which is past-directed exactly when xi is future pointing.  The sign of ds
is chosen from the requested time direction and the orientation of the
initial covector, and that choice is conserved along the flow.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from io import StringIO
from typing import Optional

import numpy as np

from .charts import ChartId, ChartPoint, Covector, chart_map_cov
from .errors import (NotNull, OnAxisInPolarChart, OutsideChart,
                     StepBudgetExceeded, TolFailure)
from .metric import polar_term, polar_term_stereo, radial_term
from .nullcone import complete_null, grad_t_contraction
from .params import SpacetimeParams
from .tolerances import DEFAULT_TOL, ToleranceConfig
from .trapping import SearchReport, photon_radius_candidates

# hysteresis band for BL <-> stereo switching, in sin(theta)
_SIN_TO_STEREO = 0.25
_ABS_X_TO_BL = 0.5
# radial band ceiling (units of M) certifying trapping on budget exhaustion
_TRAP_BAND = 10.0


@dataclass(frozen=True)
class PhasePoint:
    """Event + covector (same chart) at flow parameter s."""

    point: ChartPoint
    covector: Covector
    s: float = 0.0


@dataclass(frozen=True)
class IntegratorOpts:
    rel_tol: float = 1e-12
    abs_tol: float = 1e-12
    s_max: float = 400.0
    r_escape: float = 1000.0
    r_horizon_pad: float = 1e-3
    max_steps: int = 200_000

    def validate(self, params: SpacetimeParams) -> None:
        if min(self.rel_tol, self.abs_tol, self.s_max, self.r_escape,
               self.r_horizon_pad) <= 0.0 or self.max_steps <= 0:
            raise ValueError("integrator options must be positive")
        if not self.r_escape > 10.0 * params.r_plus:
            raise ValueError("r_escape must exceed 10 r_plus")


@dataclass
class Trajectory:
    samples: list  # ordered PhasePoints, s strictly monotone
    events: list  # (s, tag) pairs
    g_residuals: list  # per-sample scaled |G|
    diagnostics: dict

    def to_jsonl(self) -> str:
        buf = StringIO()
        for q, res in zip(self.samples, self.g_residuals):
            buf.write(json.dumps({
                "s": q.s,
                "chart": q.point.chart.value,
                "coords": list(q.point.coords),
                "covector": list(q.covector.comps),
                "g_residual": res,
            }) + "\n")
        return buf.getvalue()

    def to_csv(self) -> str:
        buf = StringIO()
        buf.write("s,chart,c0,c1,c2,c3,k0,k1,k2,k3,g_residual\n")
        for q, res in zip(self.samples, self.g_residuals):
            row = [repr(q.s), q.point.chart.value]
            row += [repr(c) for c in q.point.coords]
            row += [repr(c) for c in q.covector.comps]
            row.append(repr(res))
            buf.write(",".join(row) + "\n")
        return buf.getvalue()


@dataclass(frozen=True)
class FateReport:
    fate: str  # HorizonPast | ScriPast | HorizonFuture | ScriFuture | Trapped | Undecided
    exit_state: Optional[PhasePoint]
    diagnostics: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Hamiltonian right-hand sides (plain floats; hot path)
# ---------------------------------------------------------------------------


def _rhs_bl(M, a, y):
    _, r, th, _, kt, kr, kth, kph = y
    delta = r * (r - 2.0 * M) + a * a
    r2a2 = r * r + a * a
    q = r2a2 * kt + a * kph
    sth = math.sin(th)
    s2 = sth * sth
    u = a * s2 * kt + kph
    ddelta = 2.0 * (r - M)
    dkr = -(ddelta * kr * kr
            - (4.0 * r * kt * q * delta - q * q * ddelta) / (delta * delta))
    dkth = -(2.0 * u * math.cos(th) / (s2 * sth)) * (a * s2 * kt - kph)
    return (-2.0 * q * r2a2 / delta + 2.0 * a * u,
            2.0 * delta * kr,
            2.0 * kth,
            -2.0 * q * a / delta + 2.0 * u / s2,
            0.0, dkr, dkth, 0.0)


def _rhs_stereo(M, a, y):
    _, r, x1, x2, kt, kr, k1, k2 = y
    delta = r * (r - 2.0 * M) + a * a
    r2a2 = r * r + a * a
    ang = x1 * k2 - x2 * k1
    q = r2a2 * kt + a * ang
    dot = x1 * k1 + x2 * k2
    s2 = x1 * x1 + x2 * x2
    ddelta = 2.0 * (r - M)
    dkr = -(ddelta * kr * kr
            - (4.0 * r * kt * q * delta - q * q * ddelta) / (delta * delta))
    qa = 2.0 * q * a / delta
    akt = 2.0 * a * kt
    return (-2.0 * q * r2a2 / delta + 2.0 * a * ang + 2.0 * a * a * s2 * kt,
            2.0 * delta * kr,
            qa * x2 + 2.0 * k1 - 2.0 * dot * x1 - akt * x2,
            -qa * x1 + 2.0 * k2 - 2.0 * dot * x2 + akt * x1,
            0.0, dkr,
            qa * k2 + 2.0 * dot * k1 - akt * k2 - 2.0 * a * a * x1 * kt * kt,
            -qa * k1 + 2.0 * dot * k2 + akt * k1 - 2.0 * a * a * x2 * kt * kt)


def hamilton_rhs(params: SpacetimeParams, q: PhasePoint,
                 tol: ToleranceConfig = DEFAULT_TOL):
    """Flow derivatives (dx/ds, dxi/ds) as a tuple of 8 floats.

    The t-type and phi-type covector derivatives are exactly zero; in the
    polar chart a near-axis point raises OnAxisInPolarChart to request a
    switch to the stereographic patch.
    """
    if q.point.chart != q.covector.chart:
        raise OutsideChart("point and covector live in different charts")
    y = q.point.coords + q.covector.comps
    if q.point.chart == ChartId.BL_I:
        if abs(math.sin(q.point.coords[2])) < tol.axis_sin:
            raise OnAxisInPolarChart("switch to the stereographic patch")
        return _rhs_bl(params.M, params.a, y)
    if q.point.chart == ChartId.AxisStereo:
        return _rhs_stereo(params.M, params.a, y)
    raise OutsideChart("flow runs in BL_I or AxisStereo only")


def _g_value(params, chart, y):
    """(Hamiltonian, magnitude of its constituent terms) at a raw state.

    The magnitude is the scale against which the residual of the null shell
    is meaningful: at large radius the Hamiltonian is a small difference of
    huge terms and only the relative cancellation is informative.
    """
    if chart == "bl":
        _, r, th, _, kt, kr, kth, kph = y
        delta = params.delta(r)
        q = (r * r + params.a**2) * kt + params.a * kph
        gr = delta * kr * kr - q * q / delta
        gth = polar_term(params, th, kt, kth, kph)
        mag = delta * kr * kr + q * q / delta + abs(gth)
        return gr + gth, mag
    _, r, x1, x2, kt, kr, k1, k2 = y
    ang = x1 * k2 - x2 * k1
    delta = params.delta(r)
    q = (r * r + params.a**2) * kt + params.a * ang
    gr = delta * kr * kr - q * q / delta
    gth = polar_term_stereo(params, x1, x2, kt, k1, k2)
    mag = delta * kr * kr + q * q / delta + abs(gth)
    return gr + gth, mag


def _conserved(params, chart, y):
    """(xi_t, xi_phi, polar value) of a raw state."""
    if chart == "bl":
        _, _, th, _, kt, kr, kth, kph = y
        return kt, kph, polar_term(params, th, kt, kth, kph)
    _, _, x1, x2, kt, kr, k1, k2 = y
    ang = x1 * k2 - x2 * k1
    return kt, ang, polar_term_stereo(params, x1, x2, kt, k1, k2)


# ---------------------------------------------------------------------------
# Dormand-Prince 5(4) with PI step control
# ---------------------------------------------------------------------------

_A = (
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
     -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
     11.0 / 84.0),
)
# b - b_hat, error estimate weights (k2 weight is zero)
_E = (71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0,
      -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)


def _dp54_step(rhs, M, a, y, f0, h):
    """One embedded step; returns (y_new, f_new, err_norm_unscaled_list)."""
    a1, = _A[0]
    k1 = f0
    y2 = tuple(y[i] + h * a1 * k1[i] for i in range(8))
    k2 = rhs(M, a, y2)
    b1, b2 = _A[1]
    y3 = tuple(y[i] + h * (b1 * k1[i] + b2 * k2[i]) for i in range(8))
    k3 = rhs(M, a, y3)
    c1, c2, c3 = _A[2]
    y4 = tuple(y[i] + h * (c1 * k1[i] + c2 * k2[i] + c3 * k3[i])
               for i in range(8))
    k4 = rhs(M, a, y4)
    d1, d2, d3, d4 = _A[3]
    y5 = tuple(y[i] + h * (d1 * k1[i] + d2 * k2[i] + d3 * k3[i] + d4 * k4[i])
               for i in range(8))
    k5 = rhs(M, a, y5)
    e1, e2, e3, e4, e5 = _A[4]
    y6 = tuple(y[i] + h * (e1 * k1[i] + e2 * k2[i] + e3 * k3[i] + e4 * k4[i]
                           + e5 * k5[i]) for i in range(8))
    k6 = rhs(M, a, y6)
    g1, g2, g3, g4, g5, g6 = _A[5]
    ynew = tuple(y[i] + h * (g1 * k1[i] + g2 * k2[i] + g3 * k3[i]
                             + g4 * k4[i] + g5 * k5[i] + g6 * k6[i])
                 for i in range(8))
    k7 = rhs(M, a, ynew)
    w1, _, w3, w4, w5, w6, w7 = _E
    err = tuple(h * (w1 * k1[i] + w3 * k3[i] + w4 * k4[i] + w5 * k5[i]
                     + w6 * k6[i] + w7 * k7[i]) for i in range(8))
    return ynew, k7, err


def _hermite(y0, f0, y1, f1, h, tau):
    """Cubic Hermite interpolant on one accepted step."""
    t2 = tau * tau
    t3 = t2 * tau
    h00 = 2.0 * t3 - 3.0 * t2 + 1.0
    h10 = t3 - 2.0 * t2 + tau
    h01 = -2.0 * t3 + 3.0 * t2
    h11 = t3 - t2
    return tuple(h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i]
                 for i in range(8))


def _locate_radius(y0, f0, y1, f1, h, r_target, s_tol=1e-8):
    """tau in (0, 1] where the interpolated radius crosses r_target."""
    g0 = y0[1] - r_target
    lo, hi = 0.0, 1.0
    for _ in range(200):
        if abs(h) * (hi - lo) < s_tol:
            break
        mid = 0.5 * (lo + hi)
        gm = _hermite(y0, f0, y1, f1, h, mid)[1] - r_target
        if (gm > 0.0) == (g0 > 0.0):
            lo = mid
        else:
            hi = mid
    return hi


# ---------------------------------------------------------------------------
# integration driver
# ---------------------------------------------------------------------------


def _make_phase(chart, pole, y, s):
    cid = ChartId.BL_I if chart == "bl" else ChartId.AxisStereo
    return PhasePoint(ChartPoint(cid, tuple(y[:4]), pole=pole),
                      Covector(cid, tuple(y[4:]), pole=pole), s)


def integrate(params: SpacetimeParams, q0: PhasePoint, direction: str,
              opts: IntegratorOpts = IntegratorOpts(),
              tol: ToleranceConfig = DEFAULT_TOL,
              record: bool = True) -> Trajectory:
    """Integrate the flow until horizon pad, escape radius, or budget.

    `direction` is "past" or "future" (coordinate-time direction of travel).
    Events land on the sample list via cubic-Hermite location to 1e-8 in s.
    """
    if direction not in ("past", "future"):
        raise ValueError("direction must be 'past' or 'future'")
    opts.validate(params)
    M, a = params.M, params.a
    scale0 = sum(c * c for c in q0.covector.comps)
    g0 = _g_for_phase(params, q0)
    if abs(g0) > tol.null_tol * scale0 * max(1.0, q0.point.coords[1]) ** 2:
        raise NotNull(f"initial data off the null shell (G = {g0:.3e})")
    contr = grad_t_contraction(params, q0.point, q0.covector)
    sgn = 1.0 if (contr > 0.0) == (direction == "past") else -1.0

    if q0.point.chart == ChartId.BL_I:
        chart, pole = "bl", "north"
    elif q0.point.chart == ChartId.AxisStereo:
        chart, pole = "stereo", q0.point.pole
    else:
        raise OutsideChart("flow starts in BL_I or AxisStereo")
    y = q0.point.coords + q0.covector.comps
    s = q0.s
    s0 = s
    r_h = params.r_plus + opts.r_horizon_pad
    kt0, kph0, gth0 = _conserved(params, chart, y)
    norm0 = math.sqrt(scale0)

    samples = [_make_phase(chart, pole, y, s)]
    residuals = [abs(g0) / scale0]
    events = []
    drift_kt = drift_kph = drift_gth = 0.0
    g_res_max = residuals[0]
    r_min = r_max = y[1]

    rhs = _rhs_bl if chart == "bl" else _rhs_stereo
    f = rhs(M, a, y)
    h = sgn * 1e-6
    err_old = 1.0
    n_steps = 0
    terminal = None
    safety, alpha, beta = 0.9, 0.14, 0.08

    while True:
        if abs(s - s0) >= opts.s_max - 1e-14:
            terminal = "budget"
            break
        if n_steps >= opts.max_steps:
            raise StepBudgetExceeded(f"max_steps = {opts.max_steps} reached")
        if abs(h) < 1e-14:
            raise TolFailure("step size underflow")
        # never step past the parameter budget
        rem = opts.s_max - abs(s - s0)
        if abs(h) > rem:
            h = sgn * rem
        ynew, fnew, err = _dp54_step(rhs, M, a, y, f, h)
        acc = 0.0
        for i in range(8):
            sc = opts.abs_tol + opts.rel_tol * max(abs(y[i]), abs(ynew[i]))
            q = err[i] / sc
            acc += q * q
        err_norm = math.sqrt(acc / 8.0)
        n_steps += 1
        if err_norm > 1.0:
            h *= max(0.2, safety * err_norm ** -0.2)
            continue
        # accepted
        fac = safety * (err_norm ** -alpha) * (err_old ** beta) \
            if err_norm > 0.0 else 5.0
        h_next = h * min(5.0, max(0.2, fac))
        err_old = max(err_norm, 1e-10)

        # terminal radius events (located on the interpolant)
        r1 = ynew[1]
        if r1 <= r_h:
            tau = _locate_radius(y, f, ynew, fnew, h, r_h)
            ynew = _hermite(y, f, ynew, fnew, h, tau)
            s = s + tau * h
            terminal = "horizon_pad"
        elif r1 >= opts.r_escape:
            tau = _locate_radius(y, f, ynew, fnew, h, opts.r_escape)
            ynew = _hermite(y, f, ynew, fnew, h, tau)
            s = s + tau * h
            terminal = "escape"
        else:
            s = s + h
        y, f = ynew, fnew
        h = h_next

        if chart == "stereo":
            # xi_phi is exact but only implicit here (x1 xi2 - x2 xi1), so
            # integration error accumulates in it; re-impose it by the
            # minimal-norm shift of (xi1, xi2)
            s2 = y[2] * y[2] + y[3] * y[3]
            if s2 > 1e-12:
                ang_err = (y[2] * y[7] - y[3] * y[6]) - kph0
                y = y[:6] + (y[6] + ang_err * y[3] / s2,
                             y[7] - ang_err * y[2] / s2)
                f = rhs(M, a, y)

        kt1, kph1, gth1 = _conserved(params, chart, y)
        drift_kt = max(drift_kt, abs(kt1 - kt0))
        drift_kph = max(drift_kph, abs(kph1 - kph0))
        drift_gth = max(drift_gth, abs(gth1 - gth0))
        gval, gmag = _g_value(params, chart, y)
        res = abs(gval) / max(scale0, gmag)
        g_res_max = max(g_res_max, res)
        r_min = min(r_min, y[1])
        r_max = max(r_max, y[1])
        if record:
            samples.append(_make_phase(chart, pole, y, s))
            residuals.append(res)
        if terminal:
            events.append((s, terminal))
            break

        # chart switches at accepted samples (exact transport)
        if chart == "bl" and abs(math.sin(y[2])) < _SIN_TO_STEREO:
            pole = "north" if math.cos(y[2]) > 0.0 else "south"
            pt, cv = chart_map_cov(
                params, ChartPoint(ChartId.BL_I, tuple(y[:4])),
                Covector(ChartId.BL_I, tuple(y[4:])),
                ChartId.AxisStereo, pole=pole)
            y = pt.coords + cv.comps
            chart, rhs = "stereo", _rhs_stereo
            f = rhs(M, a, y)
            events.append((s, "switch:AxisStereo"))
        elif chart == "stereo" and y[2] * y[2] + y[3] * y[3] > _ABS_X_TO_BL**2:
            pt, cv = chart_map_cov(
                params, ChartPoint(ChartId.AxisStereo, tuple(y[:4]), pole=pole),
                Covector(ChartId.AxisStereo, tuple(y[4:]), pole=pole),
                ChartId.BL_I)
            # transport roundoff lands in the exactly conserved slot
            y = pt.coords + cv.comps[:3] + (kph0,)
            chart, pole, rhs = "bl", "north", _rhs_bl
            f = rhs(M, a, y)
            events.append((s, "switch:BL_I"))

    if not record:
        samples = [samples[0], _make_phase(chart, pole, y, s)]
        gval, gmag = _g_value(params, chart, y)
        residuals = [residuals[0], abs(gval) / max(scale0, gmag)]
    elif terminal == "budget":
        pass  # last accepted sample already recorded
    diagnostics = {
        "drift_xi_t": drift_kt / max(1.0, norm0),
        "drift_xi_phi": drift_kph / max(1.0, norm0),
        "drift_polar": drift_gth / max(1.0, scale0),
        "g_residual_max": g_res_max,
        "r_min": r_min,
        "r_max": r_max,
        "n_steps": n_steps,
        "s_end": s,
        "terminal": terminal,
        "ds_sign": sgn,
    }
    return Trajectory(samples, events, residuals, diagnostics)


def _g_for_phase(params: SpacetimeParams, q: PhasePoint) -> float:
    if q.point.chart == ChartId.BL_I:
        return _g_value(params, "bl", q.point.coords + q.covector.comps)[0]
    if q.point.chart == ChartId.AxisStereo:
        return _g_value(params, "stereo", q.point.coords + q.covector.comps)[0]
    raise OutsideChart("flow states live in BL_I or AxisStereo")


# ---------------------------------------------------------------------------
# fate classification
# ---------------------------------------------------------------------------


def classify_fate(params: SpacetimeParams, q0: PhasePoint, direction: str,
                  opts: IntegratorOpts = IntegratorOpts(),
                  tol: ToleranceConfig = DEFAULT_TOL) -> FateReport:
    """Run the flow and name its endpoint.

    Horizon and escape exits are transformed into horizon-regular and
    conformal charts respectively; integrator failures map to Undecided
    with the error recorded in the diagnostics.
    """
    try:
        traj = integrate(params, q0, direction, opts, tol=tol, record=False)
    except (StepBudgetExceeded, TolFailure) as exc:
        return FateReport("Undecided", None, {"error": str(exc)})
    last = traj.samples[-1]
    diag = dict(traj.diagnostics)
    terminal = diag["terminal"]
    if terminal == "horizon_pad":
        fate = "HorizonPast" if direction == "past" else "HorizonFuture"
        target = ChartId.StarKerr if direction == "past" else ChartId.KerrStar
        exit_state = _transport_exit(params, last, target, direction)
        return FateReport(fate, exit_state, diag)
    if terminal == "escape":
        fate = "ScriPast" if direction == "past" else "ScriFuture"
        exit_state = _transport_exit(params, last, ChartId.Conformal, direction)
        return FateReport(fate, exit_state, diag)
    # budget exhausted: trapped only if the radius stayed in a bounded band
    if diag["r_max"] <= _TRAP_BAND * params.M:
        return FateReport("Trapped", last, diag)
    return FateReport("Undecided", last, diag)


def _transport_exit(params: SpacetimeParams, q: PhasePoint, target: ChartId,
                    direction: str) -> PhasePoint:
    variant = "past" if direction == "past" else "future"
    try:
        pt, cv = chart_map_cov(params, q.point, q.covector, target,
                               variant=variant)
        return PhasePoint(pt, cv, q.s)
    except Exception:
        # near-axis or domain edge cases keep the integration chart
        return q


# ---------------------------------------------------------------------------
# escape campaign
# ---------------------------------------------------------------------------


def gamma_proximity(params: SpacetimeParams, x: ChartPoint,
                    xi: Covector) -> float:
    """Scaled distance of the sample's radial potential from a double root.

    Small values flag data whose bicharacteristic lingers near the photon
    shell; infinity means no stationary radius exists at all.
    """
    _, _, theta, _ = x.coords
    kt, _, kth, kph = xi.comps
    gth = float(polar_term(params, theta, kt, kth, kph))
    best = math.inf
    for rc in photon_radius_candidates(params, kt, kph):
        delta = params.delta(rc)
        q = (rc * rc + params.a**2) * kt + params.a * kph
        top = q * q / delta
        denom = top + gth
        if denom <= 0.0:
            continue
        best = min(best, abs(top - gth) / denom)
    return best


def lemma33_campaign(params: SpacetimeParams, n_samples: int, seed: int,
                     opts: IntegratorOpts = IntegratorOpts(),
                     margin: float = 0.05,
                     tol: ToleranceConfig = DEFAULT_TOL) -> SearchReport:
    """Past-fate statistics of random null data away from the trapped sets.

    Draws null data, excludes samples within `margin` of the forward/backward
    trapped sets (reported, not classified), and classifies the rest.  Every
    kept sample is expected to reach the horizon pad or the escape radius;
    Trapped counts as a violation, Undecided is reported.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    counts = {"HorizonPast": 0, "ScriPast": 0, "HorizonFuture": 0,
              "ScriFuture": 0, "Trapped": 0, "Undecided": 0}
    excluded = 0
    classified = 0
    r_lo = params.r_plus + 2.0 * opts.r_horizon_pad + 0.05 * params.M
    while classified < n_samples:
        r = float(np.exp(rng.uniform(np.log(r_lo), np.log(30.0 * params.M))))
        theta = float(np.arccos(rng.uniform(-0.95, 0.95)))
        v = rng.normal(size=3)
        n = float(np.linalg.norm(v))
        if n == 0.0:
            continue
        v = v / n
        branch = "Plus" if rng.uniform() < 0.5 else "Minus"
        x = ChartPoint(ChartId.BL_I, (0.0, r, theta, 0.0))
        xi = complete_null(params, x, float(v[0]), float(v[1]), float(v[2]),
                           branch, tol=tol)
        if gamma_proximity(params, x, xi) < margin:
            excluded += 1
            continue
        rep = classify_fate(params, PhasePoint(x, xi), "past", opts, tol=tol)
        counts[rep.fate] += 1
        classified += 1
    total_drawn = classified + excluded
    return SearchReport(
        campaign="lemma33",
        params=params.as_dict(),
        n=n_samples,
        seed=seed,
        violations=counts["Trapped"] + counts["HorizonFuture"]
        + counts["ScriFuture"],
        worst_margin=None,
        wall_time_s=time.perf_counter() - t0,
        extra={
            "counts": counts,
            "excluded": excluded,
            "excluded_fraction": excluded / total_drawn,
            "undecided_fraction": counts["Undecided"] / max(1, classified),
            "margin": margin,
        },
    )


# ---------------------------------------------------------------------------
# analytic oracle data
# ---------------------------------------------------------------------------


def principal_null(params: SpacetimeParams, r: float, theta: float,
                   kind: str) -> PhasePoint:
    """Future-pointing principal congruence data (polar part identically
    zero, radius strictly monotone): kind is "in" or "out"."""
    if kind not in ("in", "out"):
        raise ValueError("kind must be 'in' or 'out'")
    a = params.a
    delta = params.delta(r)
    sin2 = math.sin(theta) ** 2
    rho2 = r * r + a * a * (1.0 - sin2)
    kt = 1.0
    kph = -a * sin2 * kt
    kr = (rho2 / delta) * (1.0 if kind == "in" else -1.0)
    x = ChartPoint(ChartId.BL_I, (0.0, r, theta, 0.0))
    return PhasePoint(x, Covector(ChartId.BL_I, (kt, kr, 0.0, kph)))
