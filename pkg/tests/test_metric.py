import math

import numpy as np
import pytest

from kerrflow import SpacetimeParams
from kerrflow.charts import ChartId, ChartPoint, Covector, chart_map_cov
from kerrflow.errors import OutsideChart
from kerrflow.metric import (ergoregion_membership, killing_contraction,
                             metric_cov, metric_scalars, polar_term,
                             polar_term_stereo, quadform, quadform_bl,
                             radial_term, radial_term_dr)

P = SpacetimeParams(1.0, 0.7)


def _rand_bl_states(n, seed, r_hi=40.0):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        r = float(np.exp(rng.uniform(np.log(P.r_plus * 1.01), np.log(r_hi))))
        th = float(rng.uniform(0.05, math.pi - 0.05))
        x = ChartPoint(ChartId.BL_I, (float(rng.uniform(-5, 5)), r, th,
                                      float(rng.uniform(0, 2 * math.pi))))
        xi = Covector(ChartId.BL_I, tuple(rng.normal(size=4)))
        yield x, xi


def test_scalar_identities():
    rng = np.random.default_rng(1)
    r = np.exp(rng.uniform(np.log(1.8), np.log(100.0), 500))
    th = rng.uniform(1e-3, math.pi - 1e-3, 500)
    delta, rho2, sigma2 = metric_scalars(P, r, th)
    a = P.a
    sin2 = np.sin(th) ** 2
    # two closed forms of sigma^2 agree
    alt = (r * r + a * a) * rho2 + 2.0 * a * a * P.M * r * sin2
    assert np.max(np.abs(sigma2 - alt) / sigma2) < 1e-14
    assert np.max(np.abs(rho2 - (r * r + a * a * np.cos(th) ** 2))
                  / rho2) < 1e-15


def test_metric_table_determinant_and_inverse():
    for x, _ in _rand_bl_states(200, 2):
        _, r, th, _ = x.coords
        g = metric_cov(P, x)
        delta, rho2, _ = metric_scalars(P, r, th)
        det = np.linalg.det(g)
        expected = -(rho2 ** 2) * math.sin(th) ** 2
        assert abs(det - expected) < 1e-10 * abs(expected)
        # 2x2 t-phi block identity: g_tt g_pp - g_tp^2 = -Delta sin^2
        blk = g[0, 0] * g[3, 3] - g[0, 3] ** 2
        assert abs(blk + delta * math.sin(th) ** 2) < 1e-12 * max(
            1.0, abs(blk))


def test_quadform_two_routes_agree():
    # closed separated form vs full matrix inversion of the covariant table
    for x, xi in _rand_bl_states(300, 3):
        q1 = quadform(P, x, xi)
        g = metric_cov(P, x)
        v = np.linalg.solve(g, np.asarray(xi.comps))
        q2 = float(np.asarray(xi.comps) @ v)
        assert abs(q1 - q2) <= 1e-12 * max(1.0, abs(q1), abs(q2))


def test_quadform_invariant_across_charts():
    targets = [ChartId.KerrStar, ChartId.StarKerr, ChartId.Kruskal,
               ChartId.Conformal]
    for (x, xi), tgt in zip(_rand_bl_states(200, 4, r_hi=20.0),
                            targets * 50):
        q0 = quadform(P, x, xi)
        y, eta = chart_map_cov(P, x, xi, tgt)
        q1 = quadform(P, y, eta)
        assert abs(q1 - q0) <= 1e-9 * max(1.0, abs(q0))


def test_polar_term_stereo_matches_polar_term():
    rng = np.random.default_rng(5)
    for _ in range(300):
        th = float(rng.uniform(1e-3, math.pi / 2 - 1e-3))
        ph = float(rng.uniform(0.0, 2 * math.pi))
        kt, kth, kph = rng.normal(size=3)
        x1, x2 = math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph)
        A = kth / math.cos(th)
        B = kph / math.sin(th)
        k1 = A * math.cos(ph) - B * math.sin(ph)
        k2 = A * math.sin(ph) + B * math.cos(ph)
        v1 = float(polar_term(P, th, kt, kth, kph))
        v2 = float(polar_term_stereo(P, x1, x2, kt, k1, k2))
        assert abs(v1 - v2) <= 1e-10 * max(1.0, abs(v1))


def test_radial_term_derivative_matches_finite_difference():
    rng = np.random.default_rng(6)
    for _ in range(200):
        r = float(np.exp(rng.uniform(np.log(1.9), np.log(50.0))))
        kt, kr, kph = rng.normal(size=3)
        h = 1e-6 * max(1.0, r)
        fd = (radial_term(P, r + h, kt, kr, kph)
              - radial_term(P, r - h, kt, kr, kph)) / (2.0 * h)
        an = radial_term_dr(P, r, kt, kr, kph)
        assert abs(an - fd) <= 1e-5 * max(1.0, abs(an))


def test_quadform_separation():
    for x, xi in _rand_bl_states(100, 7):
        _, r, th, _ = x.coords
        kt, kr, kth, kph = xi.comps
        _, rho2, _ = metric_scalars(P, r, th)
        sep = (radial_term(P, r, kt, kr, kph)
               + polar_term(P, th, kt, kth, kph)) / rho2
        assert abs(sep - quadform_bl(P, r, th, kt, kr, kth, kph)) < 1e-13


def test_killing_contractions():
    x = ChartPoint(ChartId.BL_I, (0.3, 5.0, 1.0, 0.7))
    xi = Covector(ChartId.BL_I, (1.5, -0.2, 0.4, -2.0))
    assert killing_contraction(P, x, xi, "v_I") == 1.5
    assert killing_contraction(P, x, xi, "v_H") == 1.5 + P.Omega_H * -2.0
    # invariance under chart transport, including Kruskal
    for tgt in (ChartId.KerrStar, ChartId.StarKerr, ChartId.Kruskal,
                ChartId.Conformal, ChartId.AxisStereo):
        y, eta = chart_map_cov(P, x, xi, tgt)
        for f in ("v_I", "v_H"):
            assert abs(killing_contraction(P, y, eta, f)
                       - killing_contraction(P, x, xi, f)) < 1e-9


def test_ergoregion():
    # equatorial stationary-field ergoregion is r_plus < r < 2M
    eq = math.pi / 2.0
    assert ergoregion_membership(
        P, ChartPoint(ChartId.BL_I, (0, 1.9, eq, 0)), "v_I")
    assert not ergoregion_membership(
        P, ChartPoint(ChartId.BL_I, (0, 2.1, eq, 0)), "v_I")
    # near the axis the stationary field is timelike down to the horizon
    assert not ergoregion_membership(
        P, ChartPoint(ChartId.BL_I, (0, 1.75, 0.05, 0)), "v_I")
    # horizon field contraction at the pad radius is near null, not spacelike
    assert not ergoregion_membership(
        P, ChartPoint(ChartId.BL_I, (0, P.r_plus + 1e-4, eq, 0)), "v_H")


def test_metric_cov_domain():
    with pytest.raises(OutsideChart):
        metric_cov(P, ChartPoint(ChartId.BL_I, (0, 1.0, 1.0, 0)))
    with pytest.raises(OutsideChart):
        metric_cov(P, ChartPoint(ChartId.Kruskal, (1.0, 1.0, 1.0, 0)))
