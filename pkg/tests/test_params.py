import math

import pytest

from kerrflow import SpacetimeParams, derive_constants
from kerrflow.errors import ExtremalOrSuper, NonpositiveMass

# frozen 50-digit oracle values (r_plus, r_minus, kappa_plus, kappa_minus,
# Omega_H, T_H) for M = 1
ORACLE = {
    0.0: (2.0, 0.0, 0.25, None, 0.0, 0.039788735772973833942),
    0.3: (1.9539392014169456492, 0.046060798583054350847,
          0.24410667453858693974, -10.355217785649698051,
          0.076767997638423918079, 0.038850783894540620515),
    0.7: (1.7141428428542849998, 0.2858571571457150002,
          0.20830902332069897939, -1.2491253498513112243,
          0.20418368367551071443, 0.033153410752134144426),
    0.999: (1.0447101778122163142, 0.9552898221877836858,
            0.021398364236216353591, -0.023401368241222360599,
            0.47812303412801986276, 0.0034056554422746621578),
}


@pytest.mark.parametrize("a", sorted(ORACLE))
def test_constants_against_high_precision_oracle(a):
    p = SpacetimeParams(1.0, a)
    rp, rm, kp, km, om, th = ORACLE[a]
    assert abs(p.r_plus - rp) <= 1e-12 * rp
    assert abs(p.r_minus - rm) <= 1e-12 * max(1.0, rm)
    assert abs(p.kappa_plus - kp) <= 1e-12 * kp
    if km is None:
        assert p.kappa_minus == -math.inf
    else:
        assert abs(p.kappa_minus - km) <= 1e-12 * abs(km)
    assert abs(p.Omega_H - om) <= 1e-12 * max(1.0, om)
    assert abs(p.T_H - th) <= 1e-12 * th


def test_derive_constants_matches_dataclass():
    p = derive_constants(2.0, 1.0)
    assert p.r_plus == 2.0 + math.sqrt(3.0)
    assert p.T_H == p.kappa_plus / (2.0 * math.pi)


def test_mass_scaling():
    # all constants scale as powers of M
    p1 = SpacetimeParams(1.0, 0.5)
    p2 = SpacetimeParams(3.0, 1.5)
    assert abs(p2.r_plus - 3.0 * p1.r_plus) < 1e-14
    assert abs(p2.kappa_plus - p1.kappa_plus / 3.0) < 1e-15
    assert abs(p2.Omega_H - p1.Omega_H / 3.0) < 1e-15


def test_parameter_validation():
    with pytest.raises(NonpositiveMass):
        SpacetimeParams(0.0, 0.0)
    with pytest.raises(NonpositiveMass):
        SpacetimeParams(-1.0, 0.0)
    with pytest.raises(ExtremalOrSuper):
        SpacetimeParams(1.0, 1.0)
    with pytest.raises(ExtremalOrSuper):
        SpacetimeParams(1.0, -1.2)
    SpacetimeParams(1.0, -0.9)  # negative subextreme spin is fine


def test_delta_roots_at_horizons():
    p = SpacetimeParams(1.0, 0.8)
    assert abs(p.delta(p.r_plus)) < 1e-14
    assert abs(p.delta(p.r_minus)) < 1e-14
    assert p.delta(10.0) == 10.0 * 8.0 + 0.64
