import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypolab.coeff import (CoeffFn, EvalError, ExprError, Interval, QuadratureError,
                           adaptive_integral, interval_integral, interval_integral_log,
                           parse_coeff)


def test_parse_exp_family_value():
    f = parse_coeff("exp(-abs(y)^(-1))")
    assert f.eval_at(0.5) == pytest.approx(math.exp(-2.0), rel=1e-15)


def test_parse_constant():
    f = parse_coeff("1")
    for y in (-0.7, 0.0, 0.3):
        assert f.eval_at(y) == 1.0


def test_log_eval_exact_exponent():
    f = parse_coeff("exp(-abs(y)^(-0.5))")
    assert f.log_eval(0.04) == pytest.approx(-5.0, abs=1e-12)


def test_eval_at_continuous_extension_at_zero():
    f = parse_coeff("exp(-abs(y)^(-1))")
    assert f.eval_at(0.0) == 0.0


def test_eval_polynomial():
    f = parse_coeff("y^2", domain=(-5.0, 5.0))
    assert f.eval_at(3.0) == 9.0


def test_eval_deep_underflow_region():
    f = parse_coeff("exp(-abs(y)^(-2))")
    assert f.eval_at(0.1) == pytest.approx(math.exp(-100.0), rel=1e-13)


def test_eval_outside_domain():
    f = parse_coeff("y^2")
    with pytest.raises(EvalError):
        f.eval_at(2.0)


def test_syntax_error_carries_position():
    with pytest.raises(ExprError) as err:
        parse_coeff("1 + * 2")
    assert err.value.pos == 4


def test_unknown_function_rejected():
    with pytest.raises(ExprError):
        parse_coeff("sin(y)")


def test_two_variables_rejected():
    with pytest.raises(ExprError):
        parse_coeff("y + z")


def test_negative_weight_rejected():
    with pytest.raises(ExprError):
        parse_coeff("y")  # negative on the left half of the domain
    parse_coeff("y", require_nonneg=False)  # signed coefficients are fine


def test_max_weight_allowed():
    f = parse_coeff("max(y, 0)")
    assert f.eval_at(-0.5) == 0.0
    assert f.eval_at(0.5) == 0.5


def test_metadata_flags():
    f = parse_coeff("exp(-abs(y)^(-1))")
    assert f.parity == "even"
    assert f.monotone_flag == "nonneg-increasing-on-positive-axis"
    assert f.log_form is not None
    g = parse_coeff("max(y, 0)")
    assert g.parity == "none"


def test_log_form_consistency_where_representable():
    f = parse_coeff("exp(-abs(y)^(-1))")
    for y in (0.05, 0.2, 0.9):
        v = f.eval_at(y)
        assert abs(math.exp(f.log_eval(y)) - v) <= 1e-12 * (1.0 + v)


def test_alpha_family_shape_on_grid():
    f = parse_coeff("exp(-abs(y)^(-0.7))")
    pos = np.linspace(0.0, 1.0, 10**4 + 1)[1:]
    right = np.asarray(f(pos))
    assert (right > 0).all()
    assert (np.diff(right) > 0).all()
    assert f.eval_at(0.0) == 0.0
    assert np.array_equal(np.asarray(f(-pos)), right)  # negation is exact


# --- quadrature -------------------------------------------------------------

def test_integral_constant():
    f = parse_coeff("1")
    assert interval_integral(f, Interval(0.25, 0.25)) == pytest.approx(0.5, rel=1e-14)


def test_integral_quadratic_exact():
    f = parse_coeff("y^2")
    assert interval_integral(f, Interval(0.5, 0.5)) == pytest.approx(1.0 / 3.0, rel=1e-14)


def test_flat_integral_against_50_digit_oracle():
    # oracle computed with mpmath at 50 digits, itself cross-checked against
    # the endpoint asymptotic b^2 e^{-1/b} (1 + O(b)) before being trusted
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 50
    oracle = mp.quad(lambda y: mp.e ** (-1.0 / y), [0, mp.mpf("0.01")])
    asym = mp.mpf("0.01") ** 2 * mp.e ** (-100)
    assert abs(oracle / asym - 1) < 0.03  # 1 + O(b) at b = 0.01
    f = parse_coeff("exp(-1/abs(y))")
    got = interval_integral(f, Interval(0.005, 0.005), tol=1e-9)
    assert got == pytest.approx(float(oracle), rel=1e-6)


def test_log_integral_deep_flat_against_endpoint_asymptotic():
    # far below double-precision underflow the endpoint asymptotic
    # (b^(1+alpha)/alpha) exp(-b^-alpha) is the only practical reference
    for alpha, b in ((2.0, 1e-3), (0.25, 1e-18), (4.0, 0.05)):
        f = parse_coeff(f"exp(-abs(y)^(-{alpha}))")
        got = interval_integral_log(f, Interval(b / 2, b / 2), tol=1e-9)
        expect = -b**-alpha + (1 + alpha) * math.log(b) - math.log(alpha)
        assert got == pytest.approx(expect, abs=5.0 * b**alpha + 1e-6)


def test_centered_interval_doubles_one_sided_mass():
    f = parse_coeff("exp(-1/abs(y))")
    one_sided = interval_integral_log(f, Interval(0.005, 0.005), tol=1e-10)
    centered = interval_integral_log(f, Interval(0.0, 0.01), tol=1e-10)
    assert centered == pytest.approx(one_sided + math.log(2.0), abs=1e-8)


def test_integral_collapses_below_float_range():
    f = parse_coeff("exp(-abs(y)^(-2))")
    assert interval_integral(f, Interval(5e-4, 5e-4)) == 0.0
    assert interval_integral_log(f, Interval(5e-4, 5e-4)) < -9e5


def test_zero_weight_integrates_to_zero():
    f = parse_coeff("0")
    assert interval_integral(f, Interval(0.0, 0.5)) == 0.0
    assert interval_integral_log(f, Interval(0.0, 0.5)) == -math.inf


def test_adaptive_integral_signed():
    got = adaptive_integral(lambda t: t**3 - 0.5 * t, -1.0, 2.0, tol=1e-12)
    assert got == pytest.approx(15.0 / 4.0 - 0.75, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    c=st.floats(min_value=-0.4, max_value=0.4),
    w1=st.floats(min_value=1e-3, max_value=0.3),
    w2=st.floats(min_value=1e-3, max_value=0.3),
)
def test_quadrature_monotone_under_inclusion(c, w1, w2):
    f = parse_coeff("exp(-abs(y)^(-1))")
    inner = Interval(c, min(w1, w2))
    outer = Interval(c, max(w1, w2))
    assert interval_integral(f, inner) <= interval_integral(f, outer) * (1 + 1e-9) + 1e-300


@pytest.mark.parametrize("source", [
    "exp(-abs(y)^(-1))",
    "1",
    "y^2",
    "max(y, 0)",
    "min(1, y^2) + 2*abs(y)",
    "(1 + y^2)/(2 - y)",
    "exp(-(abs(y) + 1)^2)",
    "2^y^2",
])
def test_pretty_print_round_trip_idempotent(source):
    f = parse_coeff(source, require_nonneg=False)
    once = f.pretty()
    again = parse_coeff(once, require_nonneg=False).pretty()
    assert once == again
    ys = np.linspace(-0.9, 0.9, 37)
    assert np.array_equal(np.asarray(f(ys)), np.asarray(parse_coeff(once, require_nonneg=False)(ys)))


def test_interval_requires_positive_half_width():
    with pytest.raises(ValueError):
        Interval(0.0, 0.0)


def test_tripled_interval_same_center():
    I = Interval(0.2, 0.1)
    J = I.tripled()
    assert J.center == I.center
    assert J.half_width == pytest.approx(0.3)


def test_quadrature_error_carries_bracket():
    # a ramp of width 1e-45 at y = 1e-30: below 2^-60 of the interval but
    # far above float resolution near 0, so bisection genuinely runs out
    f = parse_coeff("min(1, max(0, (y - 1e-30)*1e45))", domain=(0.0, 1.0))
    with pytest.raises(QuadratureError) as err:
        interval_integral(f, Interval(0.25, 0.25))
    a, b = err.value.bracket
    assert 0.0 <= a < b < 1e-15
