import math

import numpy as np
import pytest

from hypolab.coeff import parse_coeff
from hypolab.elliptic import (EllipticCoefficients, Field, ProfileSolution,
                              barrier_params, coefficient_norms, profile_upper_check,
                              solve_profile, verify_barrier)

ONE = Field.constant(1.0)
LAPLACIAN = EllipticCoefficients(a11=ONE, a22=ONE)


def closed_form_two_point(ps, lam_g):
    """Constant-coefficient oracle: -u'' + lam_g u = 0 with the wall data."""
    mu = math.sqrt(lam_g)
    r, c, lam = ps.r, ps.c, ps.lam
    M = np.array([[math.exp(-mu * r), math.exp(mu * r)],
                  [math.exp(mu * r), math.exp(-mu * r)]])
    rhs = np.array([math.exp(-2.0 * c * math.sqrt(lam) * r), 1.0])
    A, B = np.linalg.solve(M, rhs)
    return A * np.exp(mu * ps.xs) + B * np.exp(-mu * ps.xs)


# --- barrier parameters --------------------------------------------------------

def test_barrier_params_pure_second_order():
    bp = barrier_params(1.0, 0.0, 0.0, 0.0)
    assert bp.beta == 1.0
    assert bp.r0 == pytest.approx(math.log(2.0) / 2.0)


def test_barrier_params_all_ones():
    bp = barrier_params(1.0, 1.0, 1.0, 1.0)
    assert bp.beta == 4.0
    assert bp.r0 == pytest.approx(math.log(2.0) / 8.0)


def test_barrier_params_c0_value():
    bp = barrier_params(1.0, 0.0, 0.0, 1.0, lambda_min=1.0)
    assert bp.c0 == pytest.approx(math.sqrt(2.0))


def test_barrier_params_validation():
    with pytest.raises(ValueError):
        barrier_params(0.0, 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        barrier_params(1.0, -1.0, 0.0, 0.0)


# --- barrier verification --------------------------------------------------------

def test_barrier_supersolution_laplacian():
    bp = barrier_params(1.0, 0.0, 0.0, 1.0)
    rep = verify_barrier(LAPLACIAN, ONE, bp, lam=10.0, dim=1)
    assert rep.ok and rep.min_slack >= 0.0
    assert 1.0 <= rep.w_min and rep.w_max <= 2.0


def test_barrier_negative_zero_order_scaffolding():
    # a0 = -|a0| constant: beta = 4 |a0| makes the chain close with slack >= 0
    norm = 0.75
    a0 = Field.of(parse_coeff(f"0 - {norm}", require_nonneg=False))
    coeffs = EllipticCoefficients(a11=ONE, a0=a0)
    bp = barrier_params(1.0, 0.0, norm, 0.0)
    rep = verify_barrier(coeffs, Field.constant(0.0), bp, lam=1.0, dim=1)
    assert rep.ok
    # at the worst point the gain term dominates 3 a0 = -3 norm
    assert rep.min_slack <= bp.beta**2 * math.exp(2 * bp.beta * bp.r0) - 3.0 * norm + 1e-9


def test_barrier_without_weight():
    bp = barrier_params(1.0, 0.5, 0.5, 0.0)
    drift = Field.of(parse_coeff("0.5*x", require_nonneg=False))
    a0 = Field.of(parse_coeff("0.5*(2*x^2 - 1)", require_nonneg=False))
    coeffs = EllipticCoefficients(a11=ONE, a1=drift, a0=a0)
    rep = verify_barrier(coeffs, Field.constant(0.0), bp, lam=5.0, dim=1)
    assert rep.ok


def test_barrier_rejects_out_of_bound_coefficients():
    bp = barrier_params(1.0, 0.0, 0.0, 1.0)
    big_drift = EllipticCoefficients(a11=ONE, a1=Field.constant(2.0))
    with pytest.raises(ValueError, match="norm_a1"):
        verify_barrier(big_drift, ONE, bp, lam=1.0, dim=1)
    with pytest.raises(ValueError, match="norm_g"):
        verify_barrier(LAPLACIAN, Field.constant(3.0), bp, lam=1.0, dim=1)


# --- profile solve -----------------------------------------------------------------

def test_profile_line_solution_without_weight():
    # g = 0: u'' = 0, the chord over the convex wall exponential
    ps = solve_profile(LAPLACIAN, Field.constant(0.0), lam=4.0, r=0.25, c=1.0,
                       n=201, dim=1)
    assert ps.lower_ok and ps.upper_ok
    line = np.interp(ps.xs, [ps.xs[0], ps.xs[-1]], [ps.u[0], ps.u[-1]])
    assert np.abs(ps.u - line).max() < 1e-10


def test_profile_matches_constant_coefficient_closed_form():
    ps = solve_profile(LAPLACIAN, ONE, lam=4.0, r=0.25, c=1.0, n=801, dim=1)
    exact = closed_form_two_point(ps, lam_g=4.0)
    assert np.abs(ps.u - exact).max() < 1e-6
    assert ps.lower_ok and ps.upper_ok


def test_profile_2d_radial_weight_bounds():
    g = Field.of(parse_coeff("s^2", domain=(0.0, 1.5)), axis="radial")
    ps = solve_profile(LAPLACIAN, g, lam=math.e**2, r=1.0, c=0.0, n=61, dim=2)
    assert ps.lower_ok and ps.upper_ok
    mid = (len(ps.xs) - 1) // 2
    assert ps.v[mid, mid] == 1.0


def test_profile_normalization_exact():
    for dim, n in ((1, 201), (2, 41)):
        ps = solve_profile(LAPLACIAN, ONE, lam=7.0, r=0.3, c=0.5, n=n, dim=dim)
        mid = (n - 1) // 2
        v0 = ps.v[mid] if dim == 1 else ps.v[mid, mid]
        assert v0 == 1.0


def test_profile_clips_r_and_raises_c():
    ps = solve_profile(LAPLACIAN, ONE, lam=2.0, r=5.0, c=0.0, n=101, dim=1)
    bp = barrier_params(*coefficient_norms(LAPLACIAN, ONE, 1))
    assert ps.r == pytest.approx(bp.r0)
    assert ps.c == pytest.approx(bp.c0)


def test_profile_discrete_maximum_principle():
    # interior values stay below twice the boundary maximum (w <= 2)
    drift = EllipticCoefficients(a11=ONE, a1=Field.of(parse_coeff("x", require_nonneg=False)))
    ps = solve_profile(drift, ONE, lam=math.e**2, r=1.0, c=0.0, n=201, dim=1)
    assert ps.u[1:-1].max() <= 2.0 * max(ps.u[0], ps.u[-1]) + 1e-12


def test_profile_grid_convergence_second_order():
    def solve(n):
        return solve_profile(LAPLACIAN, Field.of(parse_coeff("x^2")), lam=math.e**2,
                             r=0.3, c=1.0, n=n, dim=1)
    coarse, mid, fine = solve(101), solve(201), solve(401)
    e1 = np.abs(coarse.u - mid.u[::2]).max()
    e2 = np.abs(mid.u - fine.u[::2]).max()
    assert e1 / e2 == pytest.approx(4.0, rel=0.25)


def test_profile_input_validation():
    with pytest.raises(ValueError):
        solve_profile(LAPLACIAN, ONE, lam=0.5, r=0.2, c=1.0, n=101, dim=1)
    with pytest.raises(ValueError):
        solve_profile(LAPLACIAN, ONE, lam=2.0, r=0.2, c=1.0, n=100, dim=1)
    with pytest.raises(ValueError):
        solve_profile(LAPLACIAN, ONE, lam=2.0, r=0.2, c=1.0, n=101, dim=3)


# --- normalized growth check ---------------------------------------------------------

def test_upper_check_line_arithmetic():
    ps = solve_profile(LAPLACIAN, Field.constant(0.0), lam=4.0, r=0.25, c=1.0,
                       n=201, dim=1)
    # the line through the wall values has center (e^{-2 c sqrt(lam) r} + 1)/2
    u0 = (math.exp(-2.0 * ps.c * 2.0 * ps.r) + 1.0) / 2.0
    assert ps.center_value == pytest.approx(u0, abs=1e-10)
    maxv = float(np.abs(ps.v).max())
    assert maxv == pytest.approx(1.0 / u0, rel=1e-9)
    assert maxv <= 2.0 * math.exp(ps.c * math.sqrt(ps.lam) * ps.r)
    assert profile_upper_check(ps)


def test_upper_check_implied_by_two_sided_bounds():
    for lam in (1.0, math.e**2, math.e**4):
        ps = solve_profile(LAPLACIAN, ONE, lam=lam, r=0.25, c=0.0, n=201, dim=1)
        assert ps.lower_ok and ps.upper_ok
        assert profile_upper_check(ps)


def test_upper_check_rejects_fabricated_violation():
    # center value far below the wall floor makes the normalized max blow up
    xs = np.linspace(-0.25, 0.25, 11)
    u = np.full(11, 1.0)
    u[5] = 1e-9
    broken = ProfileSolution(lam=4.0, r=0.25, c=1.0, dim=1, xs=xs, u=u, v=u / u[5],
                             lower_ok=False, upper_ok=True, residual=0.0, tol=1e-6)
    assert not profile_upper_check(broken)
