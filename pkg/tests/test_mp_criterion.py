import math

import numpy as np
import pytest

from hypolab.coeff import Interval, parse_coeff
from hypolab.mp_criterion import (check_averaged_positivity, decisive_curve,
                                  dyadic_family, fedii_rate, mp_check, scan_intervals)


def family(alpha, domain=(-2.0, 2.0)):
    return parse_coeff(f"exp(-abs(y)^(-{alpha}))", domain=domain)


# --- averaged positivity ----------------------------------------------------

def test_positivity_flat_weight():
    assert check_averaged_positivity(family(1.0), 0.5).ok


def test_positivity_zero_weight():
    res = check_averaged_positivity(parse_coeff("0"), 0.5)
    assert not res.ok
    assert res.witness is not None


def test_positivity_half_line_weight():
    res = check_averaged_positivity(parse_coeff("max(y, 0)"), 0.5)
    assert not res.ok
    assert res.witness.hi <= 0.0  # the vanishing half-line


def test_family_stays_inside_box():
    fam = dyadic_family(0.5, grid=16)
    assert all(-0.5 <= I.lo and I.hi <= 0.5 + 1e-12 for I in fam)


# --- the stopping-time scan --------------------------------------------------

def test_scan_subcritical_holds():
    # alpha = 0.5 < 1/p = 1: the classical threshold admits this weight
    assert mp_check(family(0.5), 1.0, 0.5).verdict == "holds"


def test_scan_supercritical_fails():
    assert mp_check(family(2.0), 1.0, 0.5).verdict == "fails"


def test_scan_positive_weight_empty_sup():
    # candidate set empties once delta undercuts every interval mass
    v = mp_check(parse_coeff("1"), 2.0, 0.5)
    assert v.verdict == "holds"
    assert v.s_curve[-1][1] == 0.0


def test_scan_requires_positivity():
    with pytest.raises(ValueError):
        mp_check(parse_coeff("max(y, 0)"), 1.0, 0.5)


def test_s_curve_nonincreasing_as_delta_shrinks():
    for alpha, p in ((0.5, 1.0), (2.0, 1.0), (0.8, 1.0)):
        v = mp_check(family(alpha), p, 0.5)
        s = [x for _, x in v.s_curve]
        assert all(s[i] >= s[i + 1] - 1e-12 for i in range(len(s) - 1))


def test_scan_scale_coherence():
    # rescaling the weight by c in [1/2, 2] shifts |log a_3I| by at most
    # log 2 and must not flip verdicts away from the threshold
    for alpha, p, want in ((0.5, 1.0, "holds"), (2.0, 1.0, "fails")):
        for c in (0.5, 2.0):
            a = parse_coeff(f"{c}*exp(-abs(y)^(-{alpha}))", domain=(-2.0, 2.0))
            assert mp_check(a, p, 0.5).verdict == want


def test_scan_interval_reuse_matches_direct():
    a = family(1.25)
    entries = scan_intervals(a, 0.5)
    direct = mp_check(a, 0.5, 0.5)
    reused = mp_check(a, 0.5, 0.5, intervals=entries)
    assert direct.verdict == reused.verdict
    assert direct.s_curve == reused.s_curve


def test_decisive_curve_slope_sign_matches_threshold():
    # oracle: independent endpoint asymptotics of the centered-interval mass,
    # log a_3I ~ -(2h)^-alpha + (1+alpha) log(2h) - log alpha for I = [0, h]
    hs = np.array([2.0 ** (-k) for k in range(4, 14)])
    for alpha, p in ((0.5, 1.0), (2.0, 1.0), (1.25, 0.5), (0.8, 2.0)):
        curve = decisive_curve(family(alpha), p, hs)
        log_delta = np.array([ld for _, ld, _ in curve])
        log_T = np.log([t for _, _, t in curve])
        slope = np.polyfit(log_delta, log_T, 1)[0]
        oracle_ld = np.array([-(2 * h) ** -alpha + (1 + alpha) * math.log(2 * h)
                              - math.log(alpha) for h in hs])
        oracle_T = np.log([h ** (1 / p) * abs(ld) for h, ld in zip(hs, oracle_ld)])
        oracle_slope = np.polyfit(oracle_ld, oracle_T, 1)[0]
        assert np.sign(slope) == np.sign(1.0 / p - alpha) == np.sign(oracle_slope)
        assert slope == pytest.approx(oracle_slope, rel=0.05)
        # the asymptotic mass itself validates the quadrature independently
        assert log_delta[-1] == pytest.approx(oracle_ld[-1], rel=1e-3)


# --- pointwise rate -----------------------------------------------------------

def test_rate_subcritical_drains():
    res = fedii_rate(family(0.5), 1.0)
    assert res.verdict == "holds"
    assert abs(res.limit) < 1e-3


def test_rate_boundary_constant_minus_one():
    res = fedii_rate(family(1.0), 1.0)
    assert res.verdict == "fails"
    assert res.limit == pytest.approx(-1.0, abs=1e-12)


def test_rate_supercritical_diverges():
    res = fedii_rate(family(2.0), 1.0)
    assert res.verdict == "fails"
    assert res.limit == -math.inf


def test_rate_slow_drain_extrapolates():
    # |r| = |y|^0.2 never reaches 1e-3 by y = 2^-40 but decreases geometrically
    res = fedii_rate(family(0.8), 1.0)
    assert res.verdict == "holds"
    assert res.limit == 0.0


def test_rate_trivial_weights():
    assert fedii_rate(parse_coeff("1"), 1.0).verdict == "holds"
    assert fedii_rate(parse_coeff("y^2"), 1.0).verdict == "holds"


def test_rate_needs_log_data():
    with pytest.raises(ValueError, match="use mp_check"):
        fedii_rate(parse_coeff("max(y - 0.5, 0)"), 1.0)


# --- the full 18-case agreement grid is exercised in test_acceptance ---------

def test_agreement_spot_checks():
    for alpha, p in ((0.25, 1.0), (2.0, 1.0), (1.25, 0.5)):
        a = family(alpha)
        mp = mp_check(a, p, 0.5)
        rate = fedii_rate(a, p)
        if mp.verdict in ("holds", "fails"):
            assert mp.verdict == rate.verdict
