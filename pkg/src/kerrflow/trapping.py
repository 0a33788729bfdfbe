"""Trapped set, backward/forward trapped sets, and randomized verifiers.

Conventions.  The trapped set consists of phase points with
radial_term = d(radial_term)/dr = xi_r = 0 and nonzero covector; its
projection along r ("hat data") is (t, theta, phi; xi_t, xi_theta, xi_phi).
The radial potential of hat data is

    Phi(r) = -[radial_term(r, xi_r=0) + polar_term]
           = Q(r)^2 / Delta - polar_term,   Q = (r^2+a^2) xi_t + a xi_phi,

whose double root r' marks the photon shell; a backward/forward trapped
covector at radius r carries xi_r = +/- sgn(r - r') sqrt(Phi(r)/Delta).

Search campaigns sample hat data by drawing (theta, xi_theta, xi_phi) and a
time-component branch, then solving the photon-shell condition for the
radius.  All cores are vectorized; campaigns are reproducible from a seed.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .charts import ChartId, ChartPoint, Covector
from .errors import (DivisionDomain, NoRoot, NotInKHat, OutsideChart,
                     PositivityViolation)
from .metric import (metric_scalars, polar_term, radial_term, radial_term_dr)
from .nullcone import xi_t_on_shell, xi_t_on_shell_axis
from .params import SpacetimeParams
from .tolerances import DEFAULT_TOL, ToleranceConfig

# widest radius ever searched for photon-shell roots; trapping radii for
# subextreme spins lie in (M, 4M], the wide bracket is cheap insurance
R_BRACKET_FACTOR = 1e3


# ---------------------------------------------------------------------------
# report / witness types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrappedWitness:
    """Outcome of a pointwise trapped-set membership test."""

    in_k: bool
    r_hat: float
    residual_g: float
    residual_dg: float
    residual_xi_r: float
    reason: str = ""
    cond_timelike_flag: Optional[bool] = None  # xi_t (xi_t + Omega0 xi_phi) > 0


@dataclass(frozen=True)
class GammaMembership:
    """Outcome of a backward/forward trapped-set membership test."""

    side: str  # "plus" or "minus"
    in_set: bool
    r_prime: Optional[float]
    xi_r_required: Optional[float]
    reason: str = ""


@dataclass
class SearchReport:
    """Reproducible summary of a randomized verification campaign."""

    campaign: str
    params: dict
    n: int
    seed: int
    violations: int
    worst_margin: Optional[float]
    wall_time_s: float
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "campaign": self.campaign,
            "params": self.params,
            "n": self.n,
            "seed": self.seed,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
            "wall_time_s": self.wall_time_s,
        }
        out.update(self.extra)
        return out


# ---------------------------------------------------------------------------
# pointwise functions
# ---------------------------------------------------------------------------


def radial_functions(params: SpacetimeParams, r, theta, xi):
    """(radial_term, polar_term, d(radial_term)/dr) for covector components.

    `xi` is (xi_t, xi_r, xi_theta, xi_phi); array-safe in r/theta/xi.
    """
    xi_t, xi_r, xi_theta, xi_phi = xi
    gr = radial_term(params, r, xi_t, xi_r, xi_phi)
    gth = polar_term(params, theta, xi_t, xi_theta, xi_phi)
    dgr = radial_term_dr(params, r, xi_t, xi_r, xi_phi)
    return gr, gth, dgr


def trapped_condition_value(params: SpacetimeParams, r, xi_t, xi_phi):
    """xi_t [r^2(r-3M) + a^2(r+M)] - a xi_phi (r-M); zero on the photon shell
    (given xi_r = 0 and a null covector); array-safe."""
    M, a = params.M, params.a
    return xi_t * (r * r * (r - 3.0 * M) + a * a * (r + M)) \
        - a * xi_phi * (r - M)


def _cubic_roots(params: SpacetimeParams, xi_t, xi_phi, r_max):
    """Real roots of the photon-shell cubic in (r_plus, r_max), ascending."""
    M, a = params.M, params.a
    c = [xi_t, -3.0 * M * xi_t, a * a * xi_t - a * xi_phi,
         a * a * M * xi_t + a * M * xi_phi]
    if c[0] == 0.0:
        # degenerate linear case -a xi_phi (r - M): root r = M <= r_plus
        return []
    roots = np.roots(c)
    out = [float(z.real) for z in roots
           if abs(z.imag) <= 1e-9 * max(1.0, abs(z.real))
           and params.r_plus < z.real < r_max]
    return sorted(out)


def photon_radius_candidates(params: SpacetimeParams, xi_t, xi_phi,
                             r_max: Optional[float] = None) -> list:
    """All stationary radii of the radial term in (r_plus, r_max), ascending."""
    if r_max is None:
        r_max = R_BRACKET_FACTOR * params.M
    return _cubic_roots(params, xi_t, xi_phi, r_max)


def photon_radius_solve(params: SpacetimeParams, xi_t, xi_phi,
                        r_max: Optional[float] = None,
                        tol: ToleranceConfig = DEFAULT_TOL) -> Optional[float]:
    """Smallest root of trapped_condition_value in (r_plus, r_max), or None.

    Roots are located by cubic companion solve and polished by Newton steps;
    the residual contract is |value| < root_residual * scale.
    """
    if xi_t == 0.0 and xi_phi == 0.0:
        raise ValueError("(xi_t, xi_phi) must not both vanish")
    if r_max is None:
        r_max = R_BRACKET_FACTOR * params.M
    roots = _cubic_roots(params, xi_t, xi_phi, r_max)
    if not roots:
        return None
    r = _polish_cubic_root(params, roots[0], xi_t, xi_phi)
    scale = max(abs(xi_t), abs(xi_phi)) * max(1.0, r) ** 3
    if abs(trapped_condition_value(params, r, xi_t, xi_phi)) > \
            tol.root_residual * scale:
        return None
    return r


def _polish_cubic_root(params: SpacetimeParams, r, xi_t, xi_phi,
                       iters: int = 3) -> float:
    M, a = params.M, params.a
    for _ in range(iters):
        f = trapped_condition_value(params, r, xi_t, xi_phi)
        df = xi_t * (3.0 * r * r - 6.0 * M * r + a * a) - a * xi_phi
        if df == 0.0:
            break
        step = f / df
        r = r - step
        if abs(step) < 1e-15 * max(1.0, abs(r)):
            break
    return r


def phi_potential(params: SpacetimeParams, r, x_hat, xi_hat):
    """Radial potential of hat data: Phi(r) = -(value of the flow Hamiltonian
    at (r, x_hat) with xi_r = 0); array-safe in r.

    x_hat = (t, theta, phi), xi_hat = (xi_t, xi_theta, xi_phi).
    """
    _, theta, _ = x_hat
    xi_t, xi_theta, xi_phi = xi_hat
    return -(radial_term(params, r, xi_t, 0.0, xi_phi)
             + polar_term(params, theta, xi_t, xi_theta, xi_phi))


def r_prime_solve(params: SpacetimeParams, x_hat, xi_hat,
                  tol: ToleranceConfig = DEFAULT_TOL,
                  r_scan_max: float = 1e4) -> float:
    """Root r' of the radial potential of validated hat data.

    For genuine hat data the potential has a tangential (double) root, so the
    solve goes through the stationarity cubic and keeps the candidate where
    the potential itself vanishes.  Uniqueness is asserted by a sign scan on
    a log grid out to r_scan_max * M; a second root is a hard error.
    """
    xi_t, xi_theta, xi_phi = xi_hat
    scale = xi_t * xi_t + xi_theta * xi_theta + xi_phi * xi_phi
    if scale == 0.0:
        raise NotInKHat("hat covector vanishes")
    candidates = _cubic_roots(params, xi_t, xi_phi, R_BRACKET_FACTOR * params.M)
    best, best_phi = None, math.inf
    for r in candidates:
        r = _polish_cubic_root(params, r, xi_t, xi_phi)
        p = abs(float(phi_potential(params, r, x_hat, xi_hat)))
        if p < best_phi:
            best, best_phi = r, p
    if best is None or best_phi > tol.k_tol * scale * max(1.0, best) ** 2:
        raise NotInKHat(
            f"no stationary radius with vanishing potential (best {best_phi:.3e})"
        )
    # uniqueness / nonnegativity scan
    grid = np.geomspace(params.r_plus * (1.0 + 1e-8), r_scan_max * params.M, 4096)
    vals = phi_potential(params, grid, x_hat, xi_hat)
    neg = vals < -tol.k_tol * scale
    away = np.abs(grid - best) > 1e-3 * max(1.0, best)
    if np.any(neg & away):
        raise NoRoot("radial potential goes negative away from its double root; "
                     "second root structure detected")
    return best


def gamma_membership(params: SpacetimeParams, x: ChartPoint, xi: Covector,
                     side: str, tol: ToleranceConfig = DEFAULT_TOL
                     ) -> GammaMembership:
    """Membership in the backward ('plus') / forward ('minus') trapped set."""
    if side not in ("plus", "minus"):
        raise ValueError("side must be 'plus' or 'minus'")
    if x.chart != ChartId.BL_I:
        raise OutsideChart("gamma_membership expects a BL_I point")
    t, r, theta, phi = x.coords
    xi_t, xi_r, xi_theta, xi_phi = xi.comps
    x_hat = (t, theta, phi)
    xi_hat = (xi_t, xi_theta, xi_phi)
    try:
        r_prime = r_prime_solve(params, x_hat, xi_hat, tol=tol)
    except (NotInKHat, NoRoot) as exc:
        return GammaMembership(side, False, None, None, reason=str(exc))
    delta = params.delta(r)
    pot = float(phi_potential(params, r, x_hat, xi_hat))
    if pot < 0.0:
        scale = sum(c * c for c in xi.comps)
        if pot < -tol.k_tol * scale:
            return GammaMembership(side, False, r_prime, None,
                                   reason="potential negative at r")
        pot = 0.0
    sgn = math.copysign(1.0, r - r_prime) if r != r_prime else 0.0
    required = (1.0 if side == "plus" else -1.0) * sgn * math.sqrt(pot / delta)
    ok = abs(xi_r - required) <= tol.k_tol * max(1.0, xi.norm())
    return GammaMembership(side, ok, r_prime, required,
                           reason="" if ok else "xi_r mismatch")


def is_in_K(params: SpacetimeParams, x: ChartPoint, xi: Covector,
            tol: ToleranceConfig = DEFAULT_TOL) -> TrappedWitness:
    """Pointwise trapped-set membership with residual bookkeeping."""
    if x.chart != ChartId.BL_I:
        raise OutsideChart("is_in_K expects a BL_I point")
    _, r, theta, _ = x.coords
    xi_t, xi_r, xi_theta, xi_phi = xi.comps
    scale = xi_t * xi_t + xi_r * xi_r + xi_theta * xi_theta + xi_phi * xi_phi
    if scale == 0.0:
        return TrappedWitness(False, r, 0.0, 0.0, 0.0, reason="zero-covector")
    gr, gth, dgr = radial_functions(params, r, theta, xi.comps)
    g = float(gr + gth)
    dgr = float(dgr)
    norm = math.sqrt(scale)
    if abs(xi_r) > tol.k_tol * norm:
        return TrappedWitness(False, r, g, dgr, xi_r, reason="xi_r")
    # (r^2+a^2) xi_t + a xi_phi = 0 together with a vanishing Hamiltonian
    # forces the whole covector to vanish
    q = (r * r + params.a**2) * xi_t + params.a * xi_phi
    if abs(q) < tol.k_tol * norm * (r * r + params.a**2) and abs(g) < tol.k_tol * scale:
        return TrappedWitness(False, r, g, dgr, xi_r, reason="zero-covector")
    if abs(g) > tol.k_tol * scale:
        return TrappedWitness(False, r, g, dgr, xi_r, reason="hamiltonian")
    if abs(dgr) > tol.k_tol * scale * max(1.0, r):
        return TrappedWitness(False, r, g, dgr, xi_r, reason="radial-derivative")
    omega0 = params.a / (r * r + params.a**2)
    flag = xi_t * (xi_t + omega0 * xi_phi) > 0.0 if xi_t != 0.0 else None
    return TrappedWitness(True, r, g, dgr, xi_r, cond_timelike_flag=flag)


# ---------------------------------------------------------------------------
# positivity certificate polynomial
# ---------------------------------------------------------------------------


def p_polynomial(params: SpacetimeParams, r):
    """r^3 - 3 M r^2 + (r_+^2 + 2 a^2) r - M r_+^2; array-safe."""
    M, a, rp = params.M, params.a, params.r_plus
    return r * r * r - 3.0 * M * r * r + (rp * rp + 2.0 * a * a) * r - M * rp * rp


def p_positivity_scan(params: SpacetimeParams, grid=None,
                      n: int = 10_000, r_max: Optional[float] = None) -> dict:
    """Verify the certificate polynomial vanishes at the horizon and is
    strictly positive and strictly increasing on a log grid above it."""
    rp = params.r_plus
    if r_max is None:
        r_max = 1e3 * params.M
    if grid is None:
        grid = np.geomspace(rp * (1.0 + 1e-8), r_max, n)
    grid = np.asarray(grid, dtype=float)
    horizon_value = float(p_polynomial(params, rp))
    scale = max(1.0, rp**3)
    if abs(horizon_value) > 1e-10 * scale:
        raise PositivityViolation(
            f"polynomial at the horizon is {horizon_value}, expected 0")
    vals = p_polynomial(params, grid)
    if np.any(vals <= 0.0):
        bad = float(grid[np.argmax(vals <= 0.0)])
        raise PositivityViolation(f"nonpositive certificate value at r = {bad}")
    slopes = np.diff(vals)
    if np.any(slopes <= 0.0):
        bad = float(grid[np.argmax(slopes <= 0.0)])
        raise PositivityViolation(f"nonincreasing certificate near r = {bad}")
    return {
        "horizon_value": horizon_value,
        "min_value": float(vals.min()),
        "min_slope": float(slopes.min()),
        "grid_points": int(grid.size),
        "r_max": float(grid[-1]),
    }


def omega_ratio(params: SpacetimeParams, r, theta, xi_theta, xi_phi):
    """|xi_t / (a xi_phi)| of the past branch at xi_r = 0:
    2Mr/sigma^2 + sqrt(Delta/sigma^2 (rho^4/(sigma^2 a^2 sin^2)
    + xi_theta^2/(a^2 xi_phi^2))); array-safe."""
    M, a = params.M, params.a
    if np.any(np.asarray(a * xi_phi) == 0.0):
        raise DivisionDomain("omega_ratio requires a * xi_phi != 0")
    delta, rho2, sigma2 = metric_scalars(params, r, theta)
    sin2 = np.sin(theta) ** 2
    return (2.0 * M * r / sigma2
            + np.sqrt((delta / sigma2)
                      * (rho2 * rho2 / (sigma2 * a * a * sin2)
                         + xi_theta * xi_theta / (a * a * xi_phi * xi_phi))))


# ---------------------------------------------------------------------------
# vectorized photon-shell sampler
# ---------------------------------------------------------------------------


def trapped_radius_on_shell(params: SpacetimeParams, theta, xi_theta, xi_phi,
                            sign, n_grid: int = 96, n_bisect: int = 60,
                            r_hi_factor: float = 6.0):
    """Vectorized solve of the photon-shell condition with the time component
    recomputed on the null shell at every radius.

    Returns (r_hat, found) arrays.  Unresolved samples have found=False.
    """
    theta = np.asarray(theta, dtype=float)
    xi_theta = np.asarray(xi_theta, dtype=float)
    xi_phi = np.asarray(xi_phi, dtype=float)
    sign = np.asarray(sign, dtype=float)
    r_lo = params.r_plus * (1.0 + 1e-10)
    r_hi = r_hi_factor * params.M

    def f(r):
        xt = xi_t_on_shell(params, r, theta, 0.0, xi_theta, xi_phi, sign)
        return trapped_condition_value(params, r, xt, xi_phi)

    grid = np.geomspace(r_lo, r_hi, n_grid)
    prev_r = np.full(theta.shape, grid[0])
    prev_f = f(np.broadcast_to(grid[0], theta.shape).copy())
    lo = np.zeros(theta.shape)
    hi = np.zeros(theta.shape)
    found = np.zeros(theta.shape, dtype=bool)
    for rj in grid[1:]:
        cur_r = np.broadcast_to(rj, theta.shape)
        cur_f = f(cur_r.copy())
        new = (~found) & (np.sign(cur_f) != np.sign(prev_f)) \
            & np.isfinite(cur_f) & np.isfinite(prev_f)
        lo[new] = prev_r[new]
        hi[new] = rj
        found |= new
        prev_r, prev_f = np.broadcast_to(rj, theta.shape).copy(), cur_f
    if not np.any(found):
        return np.full(theta.shape, np.nan), found
    a = np.where(found, lo, r_lo)
    b = np.where(found, hi, r_hi)
    fa = f(a)
    for _ in range(n_bisect):
        m = 0.5 * (a + b)
        fm = f(m)
        left = np.sign(fm) == np.sign(fa)
        a = np.where(left, m, a)
        fa = np.where(left, fm, fa)
        b = np.where(left, b, m)
    r_hat = 0.5 * (a + b)
    return np.where(found, r_hat, np.nan), found


def _sample_hat_data(params: SpacetimeParams, m: int, rng: np.random.Generator,
                     branch: str, tol: ToleranceConfig):
    """Draw m candidate hat-data samples; return validated arrays.

    Returns dict of arrays (theta, xi_t, xi_theta, xi_phi, r_hat) for the
    samples that pass residual validation, plus the rejected count.
    """
    sign = 1.0 if branch == "Plus" else -1.0
    cos_th = rng.uniform(-1.0, 1.0, m)
    theta = np.arccos(cos_th)
    # keep clear of the axis; axis membership is handled separately
    np.clip(theta, 1e-3, math.pi - 1e-3, out=theta)
    v = rng.normal(size=(2, m))
    norm = np.hypot(v[0], v[1])
    norm[norm == 0.0] = 1.0
    xi_theta = v[0] / norm
    xi_phi = v[1] / norm
    r_hat, found = trapped_radius_on_shell(params, theta, xi_theta, xi_phi,
                                           np.full(m, sign))
    xi_t = np.where(found,
                    xi_t_on_shell(params, np.where(found, r_hat, 3.0 * params.M),
                                  theta, 0.0, xi_theta, xi_phi, sign),
                    np.nan)
    ok = found.copy()
    # residual validation at the witness radius
    scale = xi_t * xi_t + xi_theta * xi_theta + xi_phi * xi_phi
    dgr = radial_term_dr(params, np.where(found, r_hat, 3.0 * params.M),
                         xi_t, 0.0, xi_phi)
    with np.errstate(invalid="ignore"):
        ok &= np.abs(dgr) <= tol.k_tol * scale * np.maximum(1.0, r_hat)
        ok &= np.abs(xi_t) >= 1e-10 * np.sqrt(scale)
    rejected = int(m - np.count_nonzero(ok))
    return {
        "theta": theta[ok],
        "xi_t": xi_t[ok],
        "xi_theta": xi_theta[ok],
        "xi_phi": xi_phi[ok],
        "r_hat": r_hat[ok],
    }, rejected


# ---------------------------------------------------------------------------
# campaigns
# ---------------------------------------------------------------------------


def lemma65_search(params: SpacetimeParams, n_samples: int, seed: int,
                   axis_fraction: float = 0.01,
                   tol: ToleranceConfig = DEFAULT_TOL) -> SearchReport:
    """Randomized emptiness check of {xi_t < 0} & {xi.v_H > 0} on the
    trapped set.

    Samples hat data on the past branch (the only one that can reach
    xi_t < 0 with positive horizon-field contraction), validates trapped-set
    membership, and counts violations.  worst_margin is the largest
    xi_t + Omega_H xi_phi found among xi_t < 0 members (expected <= 0).
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    n_axis = int(round(axis_fraction * n_samples))
    n_polar = n_samples - n_axis
    got = 0
    violations = 0
    rejected = 0
    worst = -math.inf
    while got < n_polar:
        need = n_polar - got
        batch, rej = _sample_hat_data(params, max(2048, int(1.25 * need)),
                                      rng, "Minus", tol)
        rejected += rej
        take = min(need, batch["xi_t"].size)
        xi_t = batch["xi_t"][:take]
        xi_phi = batch["xi_phi"][:take]
        margin = xi_t + params.Omega_H * xi_phi
        neg_t = xi_t < 0.0
        violations += int(np.count_nonzero(neg_t & (margin > 0.0)))
        if np.any(neg_t):
            worst = max(worst, float(margin[neg_t].max()))
        got += take
        rejected += int(batch["xi_t"].size - take) * 0  # untaken are unused, not rejected
    axis_violations = 0
    if n_axis > 0:
        # on-axis members have vanishing angular component, so the horizon
        # field contracts to xi_t itself and xi_t<0 & xi_t>0 is empty
        v = rng.normal(size=(2, n_axis))
        r_ax = _axis_photon_radius(params)
        xt = xi_t_on_shell_axis(params, r_ax, 0.0, v[0], v[1], -1.0)
        axis_violations = int(np.count_nonzero((xt < 0.0) & (xt > 0.0)))
        violations += axis_violations
    return SearchReport(
        campaign="lemma65",
        params=params.as_dict(),
        n=n_samples,
        seed=seed,
        violations=violations,
        worst_margin=None if worst == -math.inf else worst,
        wall_time_s=time.perf_counter() - t0,
        extra={"rejected": rejected, "axis_samples": n_axis},
    )


def _axis_photon_radius(params: SpacetimeParams) -> float:
    """Radius of the polar photon shell: root of r^2(r-3M) + a^2(r+M)."""
    M, a = params.M, params.a
    roots = np.roots([1.0, -3.0 * M, a * a, a * a * M])
    real = [float(z.real) for z in roots
            if abs(z.imag) < 1e-9 and z.real > params.r_plus]
    if not real:
        raise NoRoot("no polar photon-shell radius found")
    return min(real)


def prop67_verify(params: SpacetimeParams, n_samples: int, seed: int,
                  r_max_factor: float = 50.0,
                  tol: ToleranceConfig = DEFAULT_TOL) -> SearchReport:
    """Randomized check that backward/forward trapped covectors passing the
    positivity filter (xi.dt > 0 or xi.v_H > 0) are all future pointing.

    worst_margin is the smallest -grad(t) contraction among kept samples
    (expected > 0); violations counts past-classified covectors.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    M, a = params.M, params.a
    kept = 0
    violations = 0
    skipped_potential = 0
    skipped_filter = 0
    rejected = 0
    worst = math.inf
    upper_bound_breaches = 0
    while kept < n_samples:
        need = n_samples - kept
        m = max(2048, int(0.8 * need))
        plus, rej_p = _sample_hat_data(params, m, rng, "Plus", tol)
        minus, rej_m = _sample_hat_data(params, m, rng, "Minus", tol)
        rejected += rej_p + rej_m
        nb = plus["xi_t"].size + minus["xi_t"].size
        if nb == 0:
            continue
        theta = np.concatenate([plus["theta"], minus["theta"]])
        xi_t = np.concatenate([plus["xi_t"], minus["xi_t"]])
        xi_theta = np.concatenate([plus["xi_theta"], minus["xi_theta"]])
        xi_phi = np.concatenate([plus["xi_phi"], minus["xi_phi"]])
        r_hat = np.concatenate([plus["r_hat"], minus["r_hat"]])
        r = np.exp(rng.uniform(np.log(params.r_plus * (1.0 + 1e-6)),
                               np.log(r_max_factor * params.M), nb))
        pot = -(radial_term(params, r, xi_t, 0.0, xi_phi)
                + polar_term(params, theta, xi_t, xi_theta, xi_phi))
        good = pot >= 0.0
        skipped_potential += int(np.count_nonzero(~good))
        side = np.where(rng.uniform(size=nb) < 0.5, 1.0, -1.0)
        delta = params.delta(r)
        with np.errstate(invalid="ignore"):
            xi_r = side * np.sign(r - r_hat) * np.sqrt(np.maximum(pot, 0.0) / delta)
        passes = good & ((xi_t > 0.0) | (xi_t + params.Omega_H * xi_phi > 0.0))
        skipped_filter += int(np.count_nonzero(good & ~passes))
        take_idx = np.flatnonzero(passes)[: n_samples - kept]
        if take_idx.size == 0:
            continue
        rr, tt = r[take_idx], theta[take_idx]
        _, rho2, sigma2 = metric_scalars(params, rr, tt)
        grad_t = (sigma2 * xi_t[take_idx]
                  + 2.0 * M * a * rr * xi_phi[take_idx]) / (rho2 * delta[take_idx])
        violations += int(np.count_nonzero(grad_t < 0.0))
        worst = min(worst, float(grad_t.min()))
        # bookkeeping for the past-pointing upper bound: a past-pointing
        # covector with xi_t > 0 would need xi_t < Omega_H |a xi_phi| / a
        pos_t = xi_t[take_idx] > 0.0
        if np.any(pos_t):
            bound = (params.Omega_H / a * np.abs(a * xi_phi[take_idx][pos_t])
                     if a != 0.0 else np.zeros(np.count_nonzero(pos_t)))
            upper_bound_breaches += int(np.count_nonzero(
                (grad_t[pos_t] < 0.0) & (xi_t[take_idx][pos_t] >= bound)))
        kept += take_idx.size
    return SearchReport(
        campaign="prop67",
        params=params.as_dict(),
        n=n_samples,
        seed=seed,
        violations=violations,
        worst_margin=None if worst == math.inf else worst,
        wall_time_s=time.perf_counter() - t0,
        extra={
            "rejected": rejected,
            "skipped_potential_negative": skipped_potential,
            "skipped_filter": skipped_filter,
            "upper_bound_breaches": upper_bound_breaches,
        },
    )


def radial_instability_rate(params: SpacetimeParams, r_hat: float,
                            xi_t: float, xi_phi: float) -> float:
    """Exponential rate of the radial subsystem linearized at a photon-shell
    radius: sqrt(-2 Delta d^2(radial_term)/dr^2), with the second derivative
    by central difference.  Scales linearly with the covector."""
    h = 1e-5 * max(1.0, r_hat)
    d2 = (radial_term_dr(params, r_hat + h, xi_t, 0.0, xi_phi)
          - radial_term_dr(params, r_hat - h, xi_t, 0.0, xi_phi)) / (2.0 * h)
    return math.sqrt(max(0.0, -2.0 * float(params.delta(r_hat)) * float(d2)))


def sample_k_point(params: SpacetimeParams, rng: np.random.Generator,
                   branch: str = "Minus",
                   tol: ToleranceConfig = DEFAULT_TOL
                   ) -> tuple[ChartPoint, Covector]:
    """Draw a single validated trapped-set phase point (BL_I chart).

    The covector is normalized to unit radial instability rate, so roundoff
    perturbations of different samples leave the photon shell on comparable
    parameter scales (around s = 30 in double precision).
    """
    for _ in range(256):
        batch, _ = _sample_hat_data(params, 64, rng, branch, tol)
        if batch["xi_t"].size:
            theta = float(batch["theta"][0])
            r_hat = float(batch["r_hat"][0])
            xi_t = float(batch["xi_t"][0])
            xi_theta = float(batch["xi_theta"][0])
            xi_phi = float(batch["xi_phi"][0])
            lam = radial_instability_rate(params, r_hat, xi_t, xi_phi)
            c = 1.0 / lam if lam > 0.0 else 1.0
            xi = Covector(ChartId.BL_I,
                          (c * xi_t, 0.0, c * xi_theta, c * xi_phi))
            x = ChartPoint(ChartId.BL_I, (0.0, r_hat, theta, 0.0))
            return x, xi
    raise NoRoot("could not draw a validated trapped-set sample")
