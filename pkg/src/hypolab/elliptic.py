"""Barrier-verified solutions of the frequency-parameterized elliptic problem.

On the box Q_r = (-r, r)^dim the operator

    L1 u = -sum_d a_dd(x) d^2_d u + sum_d a_d(x) d_d u + a0(x) u

with a nonnegative weight g couples to a spectral parameter lambda >= 1
through L1 u + lambda g u = 0, with exponential wall data
u = exp(c sqrt(lambda) (x1 - r)) on the boundary.  The explicit barrier
w = 3 - exp(beta (r - x1)) pins the solution between that wall profile and
the constant 2 once beta, r and c are chosen from the coefficient norms;
``verify_barrier`` checks the supersolution inequality pointwise and
``solve_profile`` produces the normalized profile with both bounds
verified on the grid.

The finite-difference stencil upwinds the drift term whenever the cell
Peclet number |a_d| h / (2 a_dd) exceeds 1, keeping the discrete matrix an
M-matrix so the maximum-principle structure survives discretization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded
from scipy.sparse import csr_matrix
from scipy.sparse.linalg import spsolve

from .coeff import CoeffFn, _ev

__all__ = [
    "Field",
    "EllipticCoefficients",
    "BarrierParams",
    "BarrierReport",
    "ProfileSolution",
    "coefficient_norms",
    "barrier_params",
    "verify_barrier",
    "solve_profile",
    "profile_upper_check",
]


@dataclass(frozen=True)
class Field:
    """A coefficient field on the box: constant, a function of x1, or radial."""

    fn: CoeffFn | None = None
    axis: str = "x1"  # "x1" or "radial"
    value: float = 0.0

    @staticmethod
    def constant(v: float) -> "Field":
        return Field(fn=None, value=float(v))

    @staticmethod
    def of(fn: CoeffFn, axis: str = "x1") -> "Field":
        if axis not in ("x1", "radial"):
            raise ValueError(f"axis must be 'x1' or 'radial', got {axis!r}")
        return Field(fn=fn, axis=axis)

    def values(self, *coords) -> np.ndarray:
        coords = [np.asarray(c, float) for c in coords]
        shape = np.broadcast_shapes(*(c.shape for c in coords))
        if self.fn is None:
            return np.full(shape, self.value)
        if self.axis == "x1":
            arg = np.broadcast_to(coords[0], shape)
        else:
            arg = np.sqrt(sum(np.broadcast_to(c, shape) ** 2 for c in coords))
        out = np.asarray(_ev(self.fn.expr, arg), float)
        if np.isnan(out).any():
            raise ValueError("field is undefined somewhere on the box")
        return out


@dataclass(frozen=True)
class EllipticCoefficients:
    a11: Field
    a22: Field | None = None  # second diagonal entry, dim-2 solves only
    a1: Field = Field.constant(0.0)
    a2: Field = Field.constant(0.0)
    a0: Field = Field.constant(0.0)

    @staticmethod
    def laplacian() -> "EllipticCoefficients":
        one = Field.constant(1.0)
        return EllipticCoefficients(a11=one, a22=one)


@dataclass(frozen=True)
class BarrierParams:
    """beta, r0, c0 from the coefficient norms.

    beta = max((|a1| + 1)/inf a11, 4 |a0|) makes the barrier a
    supersolution; r0 = min(log2/(2 beta), 1) keeps 1 <= w <= 2; c0 is the
    smallest c with inf a11 c^2 lam >= |a1| c sqrt(lam) + |g| lam + |a0| + 1
    for all lam >= lambda_min (the +1 margin makes the wall profile a
    strict subsolution).
    """

    beta: float
    r0: float
    c0: float
    inf_a11: float
    norm_a1: float
    norm_a0: float
    norm_g: float
    lambda_min: float = 1.0


def barrier_params(inf_a11: float, norm_a1: float, norm_a0: float, norm_g: float,
                   lambda_min: float = 1.0) -> BarrierParams:
    if not inf_a11 > 0:
        raise ValueError("inf_a11 must be positive")
    if min(norm_a1, norm_a0, norm_g) < 0:
        raise ValueError("norms must be nonnegative")
    if not lambda_min >= 1:
        raise ValueError("lambda_min must be at least 1")
    beta0 = (norm_a1 + 1.0) / inf_a11
    beta1 = 4.0 * norm_a0
    beta = max(beta0, beta1)
    r0 = min(math.log(2.0) / (2.0 * beta), 1.0)
    lam = lambda_min
    rhs0 = norm_g * lam + norm_a0 + 1.0
    c0 = (norm_a1 * math.sqrt(lam)
          + math.sqrt(norm_a1**2 * lam + 4.0 * inf_a11 * lam * rhs0)) / (2.0 * inf_a11 * lam)
    return BarrierParams(beta=beta, r0=r0, c0=c0, inf_a11=inf_a11,
                         norm_a1=norm_a1, norm_a0=norm_a0, norm_g=norm_g,
                         lambda_min=lambda_min)


def coefficient_norms(coeffs: EllipticCoefficients, g: Field, dim: int,
                      samples: int = 65) -> tuple[float, float, float, float]:
    """(inf a11, sup|a_drift|, sup|a0|, sup g) sampled over the unit box."""
    xs = np.linspace(-1.0, 1.0, samples)
    if dim == 1:
        grids = (xs,)
    else:
        grids = np.meshgrid(xs, xs, indexing="ij")
    a11 = coeffs.a11.values(*grids)
    inf_a11 = float(a11.min())
    norm_a1 = float(np.abs(coeffs.a1.values(*grids)).max())
    if dim == 2:
        a22 = (coeffs.a22 or coeffs.a11).values(*grids)
        inf_a11 = min(inf_a11, float(a22.min()))
        norm_a1 = max(norm_a1, float(np.abs(coeffs.a2.values(*grids)).max()))
    norm_a0 = float(np.abs(coeffs.a0.values(*grids)).max())
    norm_g = float(g.values(*grids).max())
    return inf_a11, norm_a1, norm_a0, norm_g


@dataclass(frozen=True)
class BarrierReport:
    ok: bool
    min_slack: float
    w_min: float
    w_max: float


def verify_barrier(coeffs: EllipticCoefficients, g: Field, bp: BarrierParams,
                   lam: float, grid: int = 129, dim: int = 1,
                   r: float | None = None) -> BarrierReport:
    """Pointwise check that (L1 + lambda g) w >= 0 for the explicit barrier.

    Coefficients are first checked against the norms ``bp`` was built from;
    a violated bound raises with the offending norm named.  The barrier
    derivative is analytic: only the x1 direction contributes.
    """
    if r is None:
        r = bp.r0
    if not 0 < r <= bp.r0:
        raise ValueError(f"r must lie in (0, r0], r0 = {bp.r0}")
    xs = np.linspace(-r, r, grid)
    grids = (xs,) if dim == 1 else np.meshgrid(xs, xs, indexing="ij")

    a11 = coeffs.a11.values(*grids)
    a1 = coeffs.a1.values(*grids)
    a0 = coeffs.a0.values(*grids)
    gv = g.values(*grids)
    if float(a11.min()) < bp.inf_a11 - 1e-12:
        raise ValueError(f"inf_a11 violated: {a11.min()} < declared {bp.inf_a11}")
    if float(np.abs(a1).max()) > bp.norm_a1 + 1e-12:
        raise ValueError(f"norm_a1 violated: {np.abs(a1).max()} > declared {bp.norm_a1}")
    if float(np.abs(a0).max()) > bp.norm_a0 + 1e-12:
        raise ValueError(f"norm_a0 violated: {np.abs(a0).max()} > declared {bp.norm_a0}")
    if float(gv.max()) > bp.norm_g + 1e-12 or float(gv.min()) < -1e-12:
        raise ValueError(f"norm_g violated: g range [{gv.min()}, {gv.max()}] "
                         f"vs declared [0, {bp.norm_g}]")

    x1 = grids[0]
    E = np.exp(bp.beta * (r - x1))
    w = 3.0 - E
    lhs = a11 * bp.beta**2 * E + a1 * bp.beta * E + (a0 + lam * gv) * w
    min_slack = float(lhs.min())
    return BarrierReport(ok=min_slack >= -1e-9, min_slack=min_slack,
                         w_min=float(w.min()), w_max=float(w.max()))


@dataclass(frozen=True)
class ProfileSolution:
    lam: float
    r: float
    c: float
    dim: int
    xs: np.ndarray
    u: np.ndarray
    v: np.ndarray
    lower_ok: bool
    upper_ok: bool
    residual: float
    tol: float

    @property
    def center_value(self) -> float:
        mid = (len(self.xs) - 1) // 2
        return float(self.u[mid] if self.dim == 1 else self.u[mid, mid])

    def as_record(self) -> dict:
        return {
            "lambda": self.lam, "r": self.r, "c": self.c, "dim": self.dim,
            "lower_ok": self.lower_ok, "upper_ok": self.upper_ok,
            "residual": self.residual, "tol": self.tol,
        }


def _axis_terms(add, ad, h):
    """Diagonal/off-diagonal stencil contributions for one axis.

    Central differences for the drift until |a_d| h / (2 a_dd) > 1, then
    first-order upwinding; off-diagonal entries stay nonpositive either way.
    """
    peclet = np.abs(ad) * h / (2.0 * np.maximum(add, 1e-300))
    up = peclet > 1.0
    coef_lo = -add / h**2 - np.where(up, np.where(ad > 0, ad / h, 0.0), ad / (2.0 * h))
    coef_hi = -add / h**2 + np.where(up, np.where(ad < 0, ad / h, 0.0), ad / (2.0 * h))
    coef_di = 2.0 * add / h**2 + np.where(up, np.abs(ad) / h, 0.0)
    return coef_lo, coef_di, coef_hi


def solve_profile(coeffs: EllipticCoefficients, g: Field, lam: float, r: float,
                  c: float, n: int, dim: int = 1) -> ProfileSolution:
    """Solve L1 u + lambda g u = 0 with wall data exp(c sqrt(lam) (x1 - r)).

    r is clipped to r0 and c raised to c0 (both from the sampled coefficient
    norms), then the Dirichlet problem is solved on an n-point grid per axis
    (n odd, boundary included) and the two-sided bound

        exp(c sqrt(lam) (x1 - r)) - tol <= u <= 2 + tol

    is checked at tol = 1e-6 (1 + max|u|).
    """
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and at least 3")
    if dim not in (1, 2):
        raise ValueError("dim must be 1 or 2")
    if not lam >= 1:
        raise ValueError("lambda must be at least 1")
    bp = barrier_params(*coefficient_norms(coeffs, g, dim))
    r_eff = min(r, bp.r0)
    c_eff = max(c, bp.c0)
    xs = np.linspace(-r_eff, r_eff, n)
    h = xs[1] - xs[0]
    root = c_eff * math.sqrt(lam)

    def wall(x1):
        return np.exp(root * (x1 - r_eff))

    if dim == 1:
        a11 = coeffs.a11.values(xs)
        a1 = coeffs.a1.values(xs)
        zero = coeffs.a0.values(xs) + lam * g.values(xs)
        lo, di, hi = _axis_terms(a11, a1, h)
        m = n - 2
        ab = np.zeros((3, m))
        ab[0, 1:] = hi[1:-1][:-1]
        ab[1, :] = di[1:-1] + zero[1:-1]
        ab[2, :-1] = lo[1:-1][1:]
        rhs = np.zeros(m)
        rhs[0] -= lo[1] * wall(xs[0])
        rhs[-1] -= hi[-2] * wall(xs[-1])
        interior = solve_banded((1, 1), ab, rhs)
        u = np.concatenate(([wall(xs[0])], interior, [wall(xs[-1])]))
        op_u = np.empty(m)
        op_u = (lo[1:-1] * u[:-2] + (di[1:-1] + zero[1:-1]) * u[1:-1] + hi[1:-1] * u[2:])
        residual = float(np.abs(op_u).max())
        ul = wall(xs)
    else:
        X1, X2 = np.meshgrid(xs, xs, indexing="ij")
        a11 = coeffs.a11.values(X1, X2)
        a22 = (coeffs.a22 or coeffs.a11).values(X1, X2)
        a1 = coeffs.a1.values(X1, X2)
        a2 = coeffs.a2.values(X1, X2)
        zero = coeffs.a0.values(X1, X2) + lam * g.values(X1, X2)
        lo1, di1, hi1 = _axis_terms(a11, a1, h)
        lo2, di2, hi2 = _axis_terms(a22, a2, h)
        m = n - 2
        idx = lambda i, j: (i - 1) * m + (j - 1)
        u = np.zeros((n, n))
        u[0, :] = wall(xs[0])
        u[-1, :] = wall(xs[-1])
        u[:, 0] = wall(xs)
        u[:, -1] = wall(xs)
        rows, cols, vals = [], [], []
        rhs = np.zeros(m * m)
        I, J = np.meshgrid(np.arange(1, n - 1), np.arange(1, n - 1), indexing="ij")
        I = I.ravel()
        J = J.ravel()
        base = idx(I, J)
        diag_vals = di1[I, J] + di2[I, J] + zero[I, J]
        rows.append(base); cols.append(base); vals.append(diag_vals)
        for di_, dj_, coef in ((-1, 0, lo1), (1, 0, hi1), (0, -1, lo2), (0, 1, hi2)):
            Pi, Pj = I + di_, J + dj_
            cv = coef[I, J]
            inner = (Pi >= 1) & (Pi <= n - 2) & (Pj >= 1) & (Pj <= n - 2)
            rows.append(base[inner]); cols.append(idx(Pi[inner], Pj[inner])); vals.append(cv[inner])
            edge = ~inner
            np.add.at(rhs, base[edge], -cv[edge] * u[Pi[edge], Pj[edge]])
        A = csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                       shape=(m * m, m * m))
        interior = spsolve(A, rhs)
        residual = float(np.abs(A @ interior - rhs).max())
        u[1:-1, 1:-1] = interior.reshape(m, m)
        ul = wall(X1)

    umax = float(np.abs(u).max())
    tol = 1e-6 * (1.0 + umax)
    lower_ok = bool((u >= ul - tol).all())
    upper_ok = bool((u <= 2.0 + tol).all())
    mid = (n - 1) // 2
    u0 = float(u[mid] if dim == 1 else u[mid, mid])
    v = u / u0
    return ProfileSolution(lam=float(lam), r=r_eff, c=c_eff, dim=dim, xs=xs, u=u, v=v,
                           lower_ok=lower_ok, upper_ok=upper_ok,
                           residual=residual, tol=tol)


def profile_upper_check(ps: ProfileSolution, c0: float | None = None, p: float = 1.0) -> bool:
    """Normalized-profile growth: max|v| <= 2 exp(c r lam^(1/2p)) (1 + 1e-6).

    Follows from the two-sided bound: the center value is at least
    exp(-c sqrt(lam) r) while u stays below 2.
    """
    c = ps.c if c0 is None else c0
    bound = 2.0 * math.exp(c * ps.r * ps.lam ** (1.0 / (2.0 * p))) * (1.0 + 1e-6)
    return bool(np.abs(ps.v).max() <= bound)
