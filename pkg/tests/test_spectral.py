import math

import numpy as np
import pytest

from hypolab.coeff import parse_coeff
from hypolab.spectral import (DiscreteOperator, SpectralSurrogate, apply_function,
                              band, band_range, build_schrodinger, cutoff,
                              full_decomposition, lp_project, lp_sandwich_check,
                              smallest_eigenvalues)


def jacobi_eigenvalues(A, sweeps=100, tol=1e-14):
    """Dense cyclic Jacobi rotations; the oracle for the tridiagonal path."""
    A = A.copy()
    n = A.shape[0]
    for _ in range(sweeps):
        off = np.sqrt(np.sum(np.tril(A, -1) ** 2))
        if off < tol * max(1.0, np.abs(np.diag(A)).max()):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if A[p, q] == 0.0:
                    continue
                theta = 0.5 * math.atan2(2.0 * A[p, q], A[q, q] - A[p, p])
                c, s = math.cos(theta), math.sin(theta)
                J = np.eye(n)
                J[p, p] = J[q, q] = c
                J[p, q] = s
                J[q, p] = -s
                A = J.T @ A @ J
    return np.sort(np.diag(A))


def dirichlet_laplacian(n, R=1.0):
    zero = parse_coeff("0")
    return build_schrodinger(zero, 1.0, R, n)


def test_laplacian_ground_state():
    lam1 = smallest_eigenvalues(dirichlet_laplacian(4097), 1)[0]
    assert lam1 == pytest.approx((math.pi / 2.0) ** 2, abs=1e-3)


def test_constant_potential_is_a_shift():
    one = parse_coeff("1")
    A = build_schrodinger(one, 10.0, 1.0, 4097)
    lam1 = smallest_eigenvalues(A, 1)[0]
    assert lam1 == pytest.approx((math.pi / 2.0) ** 2 + 100.0, abs=1e-3)


def test_flat_weight_ground_state_in_balance_window():
    # fine-grid oracle (n = 32769) gives 71.9196; the balance asymptotic
    # (2 log zeta)^2 = 144 brackets it within [0.3, 3] x 144
    a = parse_coeff("exp(-1/abs(y))")
    A = build_schrodinger(a, math.e**6, 1.0, 8193)
    lam1 = smallest_eigenvalues(A, 1)[0]
    assert 0.3 * 144.0 <= lam1 <= 3.0 * 144.0
    assert lam1 == pytest.approx(71.91956496, rel=1e-4)


def test_two_by_two_analytic():
    D = DiscreteOperator(grid=np.array([0.0, 1.0]), spacing=1.0,
                         diag=np.array([2.0, 2.0]), offdiag=np.array([-1.0]))
    assert smallest_eigenvalues(D, 2) == pytest.approx([1.0, 3.0])
    assert full_decomposition(D).shift == 0.0


def test_smallest_eigenvalues_vs_jacobi_oracle():
    rng = np.random.default_rng(0)
    n = 50
    diag = rng.uniform(1.0, 5.0, n)
    off = rng.uniform(-1.0, 1.0, n - 1)
    D = DiscreteOperator(grid=np.linspace(-1, 1, n), spacing=2.0 / (n + 1),
                         diag=diag, offdiag=off)
    got = smallest_eigenvalues(D, n)
    oracle = jacobi_eigenvalues(D.dense())
    assert np.abs(got - oracle).max() < 1e-9


def test_eigenvalue_richardson_convergence():
    exact = (math.pi / 2.0) ** 2
    errs = [abs(smallest_eigenvalues(dirichlet_laplacian(n), 1)[0] - exact)
            for n in (257, 513, 1025)]
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.1)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.1)


def test_build_validation():
    a = parse_coeff("1")
    with pytest.raises(ValueError):
        build_schrodinger(a, 1.0, 1.0, 4)  # even
    with pytest.raises(ValueError):
        build_schrodinger(a, 1.0, 2.0, 5)  # outside coefficient domain
    D = dirichlet_laplacian(5)
    with pytest.raises(ValueError):
        smallest_eigenvalues(D, 6)


def test_stencil_shape():
    a = parse_coeff("exp(-1/abs(y))")
    A = build_schrodinger(a, 3.0, 1.0, 9)
    h = 2.0 / 10.0
    assert A.spacing == pytest.approx(h)
    assert 0.0 in A.grid  # odd n puts the degeneracy point on the grid
    assert (A.diag >= 2.0 / h**2).all()
    assert A.offdiag == pytest.approx(np.full(8, -1.0 / h**2))


def test_full_decomposition_shift_examples():
    # eigenvalues {-2, 5}: the normalization lifts the bottom to exactly 1
    D = DiscreteOperator(grid=np.array([0.0, 1.0]), spacing=1.0,
                         diag=np.array([1.5, 1.5]), offdiag=np.array([3.5]))
    S = full_decomposition(D)
    assert S.shift == pytest.approx(3.0)
    assert S.eigenvalues[0] == pytest.approx(1.0)


def test_full_decomposition_residuals_and_reconstruction():
    rng = np.random.default_rng(3)
    n = 200
    D = DiscreteOperator(grid=np.linspace(-1, 1, n), spacing=2.0 / (n + 1),
                         diag=rng.uniform(2.0, 6.0, n), offdiag=rng.uniform(-1, 1, n - 1))
    S = full_decomposition(D)
    raw = S.eigenvalues - S.shift
    for k in (0, n // 2, n - 1):
        res = np.linalg.norm(D.matvec(S.eigenvectors[:, k]) - raw[k] * S.eigenvectors[:, k])
        assert res <= 1e-10 * (1.0 + abs(raw[k]))
    assert np.abs(S.eigenvectors.T @ S.eigenvectors - np.eye(n)).max() < 1e-12
    rebuilt = (S.eigenvectors * raw) @ S.eigenvectors.T
    assert np.abs(rebuilt - D.dense()).max() < 1e-8


def test_budget_enforced():
    n = 4097
    D = DiscreteOperator(grid=np.linspace(-1, 1, n), spacing=1.0,
                         diag=np.ones(n), offdiag=np.zeros(n - 1))
    with pytest.raises(ValueError):
        full_decomposition(D)


# --- spectral calculus --------------------------------------------------------

@pytest.fixture(scope="module")
def surrogate():
    a = parse_coeff("exp(-1/abs(y))")
    return full_decomposition(build_schrodinger(a, math.e**4, 1.0, 257))


def test_apply_identity_multiplier(surrogate):
    rng = np.random.default_rng(5)
    u = rng.standard_normal(surrogate.n)
    w = apply_function(surrogate, lambda lam: np.ones_like(lam), u)
    assert np.abs(w - u).max() < 1e-12


def test_apply_linear_multiplier_reproduces_operator(surrogate):
    rng = np.random.default_rng(6)
    u = rng.standard_normal(surrogate.n)
    w = apply_function(surrogate, lambda lam: lam, u)
    # eigenvalues carry the normalization shift, so compare against A + shift
    a = parse_coeff("exp(-1/abs(y))")
    A = build_schrodinger(a, math.e**4, 1.0, 257)
    expect = A.matvec(u) + surrogate.shift * u
    assert np.abs(w - expect).max() <= 1e-8 * np.abs(expect).max()


def test_sqrt_multiplier_gives_quadratic_form(surrogate):
    rng = np.random.default_rng(7)
    u = rng.standard_normal(surrogate.n)
    w = apply_function(surrogate, np.sqrt, u)
    coeffs = surrogate.coefficients(u)
    form = float(np.sum(surrogate.eigenvalues * coeffs**2))
    assert float(w @ w) == pytest.approx(form, rel=1e-10)


def test_apply_rejects_nonfinite_multiplier(surrogate):
    u = np.zeros(surrogate.n)
    with pytest.raises(ValueError):
        apply_function(surrogate, lambda lam: 1.0 / (lam - lam[0]), u)


def test_cutoff_shape():
    lams = np.linspace(0.0, 4.0, 10**4)
    vals = cutoff(lams)
    assert ((0.0 <= vals) & (vals <= 1.0)).all()
    assert cutoff(1.0) == 1.0
    assert cutoff(math.e) == 0.0
    inside = (lams >= 1.0) & (lams <= math.e)
    assert (np.diff(vals[inside]) <= 0).all()
    assert np.array_equal(cutoff(-lams), vals)


def test_partition_of_unity():
    lams = np.exp(np.linspace(0.0, 25.0, 10**4))
    total = sum(band(lams, j) for j in range(28))
    assert np.abs(total - 1.0).max() <= 1e-12


def test_band_at_scale_center():
    for j in (0, 1, 3, 7):
        assert band(math.exp(j), j) == pytest.approx(1.0, abs=1e-15)


def test_projection_fixes_single_mode():
    lam = np.array([math.exp(3.0)])
    S = SpectralSurrogate(eigenvalues=lam, eigenvectors=np.array([[1.0]]),
                          shift=0.0, grid=np.array([0.0]), spacing=1.0)
    u = np.array([2.5])
    assert lp_project(S, 3, u) == pytest.approx(u)
    assert np.abs(lp_project(S, 1, u)).max() == 0.0


def test_band_orthogonality(surrogate):
    rng = np.random.default_rng(8)
    u = rng.standard_normal(surrogate.n)
    v = rng.standard_normal(surrogate.n)
    for j, jj in ((0, 2), (1, 3), (2, 5), (0, 4)):
        assert abs(lp_project(surrogate, j, u) @ lp_project(surrogate, jj, v)) <= 1e-12


def test_band_reconstruction(surrogate):
    rng = np.random.default_rng(9)
    u = rng.standard_normal(surrogate.n)
    recon = sum(lp_project(surrogate, j, u) for j in band_range(surrogate))
    assert np.abs(recon - u).max() <= 1e-10


def test_band_sum_norm_bounds(surrogate):
    rng = np.random.default_rng(10)
    for _ in range(20):
        u = rng.standard_normal(surrogate.n)
        total = sum(float(np.sum(lp_project(surrogate, j, u) ** 2))
                    for j in band_range(surrogate))
        nrm = float(u @ u)
        assert 0.5 * nrm <= total * (1 + 1e-12)
        assert total <= nrm * (1 + 1e-12)


def test_sandwich_single_mode_arithmetic():
    lam = np.array([math.exp(4.0)])
    S = SpectralSurrogate(eigenvalues=lam, eigenvectors=np.array([[1.0]]),
                          shift=0.0, grid=np.array([0.0]), spacing=1.0)
    u = np.array([1.0])
    rep = lp_sandwich_check(S, np.sqrt, u)
    assert rep.ok
    assert rep.lower == pytest.approx(math.exp(3.0))
    assert rep.middle == pytest.approx(math.exp(4.0))
    assert rep.upper == pytest.approx(2.0 * math.exp(5.0))


def test_sandwich_constant_multiplier(surrogate):
    # f = 1 reduces to the band-sum bounds (brute-forced independently)
    rng = np.random.default_rng(11)
    u = rng.standard_normal(surrogate.n)
    rep = lp_sandwich_check(surrogate, lambda lam: np.ones_like(np.asarray(lam, float)), u)
    assert rep.ok
    brute = sum(float(np.sum(lp_project(surrogate, j, u) ** 2))
                for j in band_range(surrogate))
    assert rep.lower == pytest.approx(brute, rel=1e-10)
    assert rep.middle == pytest.approx(float(u @ u), rel=1e-12)


def test_sandwich_exponential_multiplier(surrogate):
    rng = np.random.default_rng(12)
    for _ in range(10):
        u = rng.standard_normal(surrogate.n)
        rep = lp_sandwich_check(surrogate, lambda lam: np.exp(0.1 * np.sqrt(lam)), u)
        assert rep.ok
        assert rep.slack_lower >= 0.0
        assert rep.slack_upper >= 0.0
