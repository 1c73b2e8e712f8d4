"""Averaged positivity and the stopping-time scan for degenerate weights.

Three graded views of how fast a nonnegative weight a(y) may vanish at the
origin:

* ``check_averaged_positivity`` -- every dyadic subinterval of
  [-delta0, delta0] carries positive mass (the coarsest requirement);
* ``mp_check`` -- the quantitative scan S(delta) = sup over intervals with
  tiny mass a_3I < delta of |I|^(1/p) |log a_3I|, decided by whether the
  curve drains to zero;
* ``fedii_rate`` -- the pointwise rate |y|^(1/p) log a(y) -> 0, meaningful
  for monotone-type weights.

For the model family a(y) = exp(-|y|^(-alpha)) all three agree with the
classical threshold alpha < 1/p away from the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coeff import CoeffFn, Interval, _ev, interval_integral, interval_integral_log

__all__ = [
    "PositivityResult",
    "MpVerdict",
    "RateResult",
    "dyadic_family",
    "check_averaged_positivity",
    "scan_intervals",
    "mp_check",
    "fedii_rate",
    "decisive_curve",
]

HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class PositivityResult:
    ok: bool
    witness: Interval | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class MpVerdict:
    p: float
    delta0: float
    s_curve: tuple[tuple[float, float], ...]  # (delta, S(delta)), delta decreasing
    verdict: str
    witness: Interval | None
    theta_hold: float
    theta_fail: float

    def as_record(self) -> dict:
        return {
            "p": self.p,
            "delta0": self.delta0,
            "verdict": self.verdict,
            "theta_hold": self.theta_hold,
            "theta_fail": self.theta_fail,
            "s_curve": [[d, s] for d, s in self.s_curve],
            "witness": None if self.witness is None else
                       {"center": self.witness.center, "half_width": self.witness.half_width},
        }


@dataclass(frozen=True)
class RateResult:
    verdict: str  # holds | fails
    limit: float
    samples: tuple[tuple[float, float], ...]  # (y, r(y))


def dyadic_family(delta0: float, grid: int = 16, levels: int | None = None) -> list[Interval]:
    """Dyadic subintervals of [-delta0, delta0].

    Centers k*delta0/grid, half-widths delta0 * 2^-l.  With ``levels`` unset
    the depth is ceil(log2 grid), the family the positivity check walks.
    Off-center intervals narrower than float resolution at their center are
    dropped; they are numerically indistinguishable from points.
    """
    if not delta0 > 0:
        raise ValueError("delta0 must be positive")
    if grid < 16:
        raise ValueError("grid must be at least 16")
    if levels is None:
        levels = math.ceil(math.log2(grid))
    out = []
    for k in range(-grid, grid + 1):
        c = k * delta0 / grid
        for l in range(levels + 1):
            w = delta0 * 2.0 ** (-l)
            if abs(c) + w > delta0 * (1 + 1e-12):
                continue
            if c != 0.0 and w < abs(c) * 2.0 ** -48:
                continue
            out.append(Interval(c, w))
    return out


def check_averaged_positivity(a: CoeffFn, delta0: float, grid: int = 16) -> PositivityResult:
    """True iff a_I > 0 for every interval of the dyadic family."""
    lo, hi = a.domain
    if -delta0 < lo or delta0 > hi:
        raise ValueError(f"[-{delta0}, {delta0}] is not inside the domain {a.domain}")
    for I in dyadic_family(delta0, grid):
        if a.log_form is not None:
            positive = interval_integral_log(a, I) > -math.inf
        else:
            positive = interval_integral(a, I) > 0.0
        if not positive:
            return PositivityResult(False, I)
    return PositivityResult(True)


def _log_mass_tripled(a: CoeffFn, I: Interval, log_cap: float, tol: float) -> float | None:
    """log a_3I, or a sampled upper bound once |log| exceeds log_cap.

    The bound log|3I| + max log-integrand only overstates log a_3I, so
    qualification against delta stays sound and S entries only shrink.
    Returns None when 3I leaves the coefficient's domain.
    """
    J = I.tripled()
    lo, hi = a.domain
    if J.lo < lo or J.hi > hi:
        return None
    if a.log_form is not None:
        ys = np.linspace(J.lo, J.hi, 33)
        gmax = float(np.max(_ev(a.log_form, ys)))
        ub = math.log(J.length) + gmax
        if ub < -log_cap:
            return ub
    return interval_integral_log(a, J, tol)


def scan_intervals(
    a: CoeffFn,
    delta0: float,
    *,
    grid: int = 16,
    levels: int = 60,
    log_cap: float = 1e6,
    quad_tol: float = 1e-7,
) -> tuple[tuple[Interval, float], ...]:
    """(interval, log a_3I) over the deep dyadic family; p-independent, so
    one scan serves every order."""
    entries = []
    for I in dyadic_family(delta0, grid, levels):
        la = _log_mass_tripled(a, I, log_cap, quad_tol)
        if la is not None and la > -math.inf:
            entries.append((I, la))
    return tuple(entries)


def mp_check(
    a: CoeffFn,
    p: float,
    delta0: float,
    *,
    grid: int = 16,
    levels: int = 60,
    n_deltas: int = 120,
    theta_hold: float = 0.05,
    theta_fail: float = 0.5,
    log_cap: float = 1e6,
    quad_tol: float = 1e-7,
    intervals: tuple[tuple[Interval, float], ...] | None = None,
) -> MpVerdict:
    """Scan S(delta) = sup{ |I|^(1/p) |log a_3I| : a_3I < delta } downward.

    delta runs over delta0 * 2^-k, k = 0..n_deltas, the sup over the dyadic
    interval family (sup of an empty candidate set is 0, so strictly
    positive weights hold for every p).  Verdict: holds when the final S
    drains below ``theta_hold`` with a nonincreasing tail, fails when S
    stays at or above ``theta_fail`` over the last decade of delta,
    inconclusive otherwise.  ``intervals`` accepts a precomputed
    :func:`scan_intervals` result.
    """
    if not p > 0:
        raise ValueError("p must be positive")
    pos = check_averaged_positivity(a, delta0, grid)
    if not pos:
        raise ValueError(f"averaged positivity fails on {pos.witness}; the scan needs a_I > 0")

    entries = intervals if intervals is not None else scan_intervals(
        a, delta0, grid=grid, levels=levels, log_cap=log_cap, quad_tol=quad_tol)

    curve: list[tuple[float, float]] = []
    witness: Interval | None = None
    final_sup: Interval | None = None
    for k in range(n_deltas + 1):
        log_delta = math.log(delta0) - k * math.log(2.0)
        best = 0.0
        best_I = None
        for I, la in entries:
            if la < log_delta:
                val = I.length ** (1.0 / p) * abs(la)
                if val > best:
                    best = val
                    best_I = I
        curve.append((math.exp(log_delta), best))
        final_sup = best_I
    witness = final_sup

    s_vals = [s for _, s in curve]
    tail_ok = all(s_vals[i] >= s_vals[i + 1] - 1e-12 for i in range(len(s_vals) - 5, len(s_vals) - 1))
    holds = s_vals[-1] < theta_hold and tail_ok
    last_decade = s_vals[-4:]  # delta within one factor-10 of the final delta
    fails = (not holds) and all(s >= theta_fail for s in last_decade)
    verdict = HOLDS if holds else (FAILS if fails else INCONCLUSIVE)
    return MpVerdict(p=p, delta0=delta0, s_curve=tuple(curve), verdict=verdict,
                     witness=witness, theta_hold=theta_hold, theta_fail=theta_fail)


def fedii_rate(
    a: CoeffFn,
    p: float,
    *,
    k_lo: int = 4,
    k_hi: int = 40,
    tol_limit: float = 1e-3,
) -> RateResult:
    """Pointwise vanishing rate r(y) = |y|^(1/p) log a(y) on y = 2^-k.

    Holds when |r| drains below ``tol_limit`` or keeps a consistent
    geometric decrease (extrapolated limit 0); fails otherwise with the
    flat-trend mean or a diverging limit.  Weights hitting exact zero at a
    sample need the stopping-time scan instead.
    """
    if not p > 0:
        raise ValueError("p must be positive")
    samples = []
    for k in range(k_lo, k_hi + 1):
        y = 2.0 ** (-k)
        if a.log_form is None and a.eval_at(y) == 0.0:
            raise ValueError("pointwise rate undefined; use mp_check")
        r = y ** (1.0 / p) * a.log_eval(y)
        samples.append((y, r))
    rs = np.array([r for _, r in samples])
    tail = rs[-8:]
    abst = np.abs(tail)
    if abst.max() < tol_limit:
        return RateResult(HOLDS, float(tail[-1]), tuple(samples))
    if (abst == 0.0).any():
        return RateResult(HOLDS, 0.0, tuple(samples))
    q = abst[1:] / abst[:-1]
    if (q <= 0.995).all():
        return RateResult(HOLDS, 0.0, tuple(samples))
    if (q >= 1.005).all():
        return RateResult(FAILS, math.copysign(math.inf, float(tail[-1])), tuple(samples))
    return RateResult(FAILS, float(tail.mean()), tuple(samples))


def decisive_curve(a: CoeffFn, p: float, hs, quad_tol: float = 1e-9):
    """(h, log a_3I, |I|^(1/p)|log a_3I|) along the centered intervals [0, h].

    The parametric curve of scan terms against their own interval mass; on
    the model family its log-log slope against delta carries the sign of
    1/p - alpha.
    """
    out = []
    for h in hs:
        I = Interval(h / 2.0, h / 2.0)
        la = interval_integral_log(a, I.tripled(), quad_tol)
        out.append((h, la, I.length ** (1.0 / p) * abs(la)))
    return out
