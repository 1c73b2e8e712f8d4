import math

import numpy as np
import pytest

from hypolab.coeff import parse_coeff
from hypolab.probe import (best_constant_curve, eps_from_target, fitted_exponent,
                           jap, lambda_curve, lambda_growth)


def family(alpha):
    return parse_coeff(f"exp(-abs(y)^(-{alpha}))")


def test_jap_bracket_floor():
    assert jap(0.0) == pytest.approx(math.e)
    assert float(np.log(jap(0.0))) == pytest.approx(1.0)
    assert jap(1e8) == pytest.approx(1e8, rel=1e-15)


def test_nondegenerate_weight_holds():
    rep = lambda_growth(parse_coeff("1"), 1.0, n=2049, k_range=(4, 14),
                        stability_check=False)
    assert rep.verdict == "holds"
    # constant potential: Lambda = (pi/2)^2 + zeta^2 exactly in the limit
    assert rep.lambda_min[0] == pytest.approx((math.pi / 2) ** 2 + math.e**4, rel=1e-4)


def test_alpha_one_splits_at_order_one():
    a = family(1.0)
    assert lambda_growth(a, 0.9, stability_check=False).verdict == "holds"
    assert lambda_growth(a, 1.0, stability_check=False).verdict == "fails"


def test_lambda_monotone_in_zeta():
    rep = lambda_growth(family(0.5), 1.0, n=2049, k_range=(4, 14),
                        stability_check=False)
    assert rep.monotone
    assert (np.diff(rep.lambda_min) > 0).all()


def test_verdict_monotone_in_p():
    # once the ratio grows for p it grows for every smaller p
    a = family(0.5)
    assert lambda_growth(a, 1.0, stability_check=False).verdict == "holds"
    for p in (0.9, 0.7, 0.5):
        assert lambda_growth(a, p, stability_check=False).verdict == "holds"


def test_fitted_exponent_balance_value():
    ks = np.arange(4, 21)
    zetas = np.exp(ks / 2.0)
    lams = lambda_curve(family(0.5), zetas, 1.0, 8193)
    s = fitted_exponent(zetas, lams)
    assert abs(s - 4.0) <= 0.35


def test_grid_stability_flag_on_coarse_grid():
    # n = 129 cannot resolve the well at zeta = e^10
    rep = lambda_growth(family(0.5), 1.0, n=129, k_range=(16, 20))
    assert rep.under_resolved


def test_k_range_validation():
    with pytest.raises(ValueError):
        lambda_growth(family(1.0), 1.0, k_range=(0, 20))
    with pytest.raises(ValueError):
        lambda_growth(family(1.0), -1.0)


# --- best constants -----------------------------------------------------------

def test_best_constant_clamped_for_nondegenerate():
    pts = best_constant_curve(parse_coeff("1"), 1.0, [1.0], n=2049, k_range=(4, 14))
    assert pts[0].constant == 0.0
    assert not pts[0].diverging


def test_best_constant_diverges_supercritical():
    pts = best_constant_curve(family(2.0), 1.0, [0.1], n=2049, k_range=(4, 16))
    assert pts[0].constant_extended >= 1.25 * pts[0].constant
    assert pts[0].diverging


def test_best_constant_vanishes_for_large_eps():
    pts = best_constant_curve(family(2.0), 1.0, [1e9], n=513, k_range=(4, 10))
    assert pts[0].constant == 0.0
    assert pts[0].constant_extended == 0.0


def test_best_constant_input_validation():
    with pytest.raises(ValueError):
        best_constant_curve(family(1.0), 1.0, [0.1, 1.0])  # increasing
    with pytest.raises(ValueError):
        best_constant_curve(family(1.0), 1.0, [])


# --- budget split ---------------------------------------------------------------

def test_eps_from_target_reference_value():
    # eps' = 0.01, p = 1, s2 = 1: constant 12, eps = sqrt(0.01 / (12 e))
    assert eps_from_target(0.01, 1.0, 1.0) == pytest.approx(0.017509, abs=5e-7)


def test_eps_from_target_inversion_identities():
    assert eps_from_target(12.0 * math.e, 1.0, 1.0) == pytest.approx(1.0, rel=1e-14)
    assert eps_from_target(3.0 * math.e, 0.5, 2.0) == pytest.approx(1.0, rel=1e-14)


def test_eps_from_target_round_trip():
    rng = np.random.default_rng(0)
    for _ in range(100):
        ep = float(rng.uniform(1e-6, 100.0))
        p = float(rng.uniform(0.25, 2.0))
        s2 = float(rng.uniform(0.25, 3.0))
        eps = eps_from_target(ep, p, s2)
        back = eps ** (2.0 * p) * 3.0 * (2.0 / s2) ** (2.0 * p) * math.e
        assert back == pytest.approx(ep, rel=1e-13)
