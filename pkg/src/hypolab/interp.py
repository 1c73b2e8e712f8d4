"""Explicit constants of the two-range interpolation step, checked pointwise.

A frequency xi is split at the band index R(xi) defined by
e^R = (s2 log<xi> / 2 eps)^(2p); below R the band exponentials are traded
against <xi>^(-s2) (each term at most the boundary value), above R the
band weights log^(2p)<xi> e^(-j) sum to a geometric tail with ratio 1/e,
giving the fully explicit constant 3 (2 eps / s2)^(2p).  Everything here
is scalar arithmetic in xi; the checks run the exact inequalities the
two-range argument uses, term by term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SplitPoint",
    "SequenceBoundsReport",
    "high_band_constant",
    "split_point",
    "low_band_term_bound",
    "low_band_sum_bound",
    "geometric_tail",
    "lemma_bounds_on_sequence",
]

GEOMETRIC_RATIO = 1.0 / (1.0 - 1.0 / math.e)  # 1.58198...


def high_band_constant(p: float, s2: float) -> float:
    """The explicit high-band constant 3 (2/s2)^(2p)."""
    return 3.0 * (2.0 / s2) ** (2.0 * p)


@dataclass(frozen=True)
class SplitPoint:
    xi: float
    eps: float
    p: float
    s2: float
    R: float

    @property
    def log_jap(self) -> float:
        return 0.5 * math.log(math.e**2 + self.xi**2)


def split_point(xi: float, eps: float, p: float, s2: float) -> SplitPoint:
    """Band split R(xi) with both defining identities verified to 1e-12.

    R = 2p (log log<xi> + log s2 - log 2eps) when s2 log<xi> > 2 eps,
    else 0 (the low range is empty near the bottom of the frequency scale).
    """
    if eps <= 0 or p <= 0 or s2 <= 0:
        raise ValueError("eps, p, s2 must be positive")
    log_jap = 0.5 * math.log(math.e**2 + xi**2)
    arg = s2 * log_jap / (2.0 * eps)
    R = 2.0 * p * math.log(arg) if arg > 1.0 else 0.0
    if R > 0.0:
        # identity pair, compared in logs so huge xi cannot overflow:
        # e^R = arg^(2p)  and  <xi>^(s2) = exp(2 eps e^(R/2p))
        lhs1, rhs1 = R, 2.0 * p * math.log(arg)
        lhs2, rhs2 = s2 * log_jap, 2.0 * eps * math.exp(R / (2.0 * p))
        for lhs, rhs in ((lhs1, rhs1), (lhs2, rhs2)):
            if abs(lhs - rhs) > 1e-12 * max(1.0, abs(rhs)):
                raise RuntimeError(f"split identity failed: {lhs} vs {rhs}")
    return SplitPoint(xi=float(xi), eps=float(eps), p=float(p), s2=float(s2), R=R)


def low_band_term_bound(sp: SplitPoint, j: int) -> bool:
    """Each low-range term log^(2p)<xi> <xi>^(-2 s2) e^(2 eps e^(j/2p)) is at
    most the j = R value log^(2p)<xi> <xi>^(-s2); terms increase in j."""
    if not 0 <= j <= sp.R:
        raise ValueError(f"j must lie in [0, R] = [0, {sp.R}]")
    lg = sp.log_jap
    # compare in logs: the term over the claimed bound must be <= 1
    log_ratio = -sp.s2 * lg + 2.0 * sp.eps * math.exp(j / (2.0 * sp.p))
    return log_ratio <= 1e-12


def low_band_sum_bound(sp: SplitPoint) -> tuple[float, float, bool]:
    """(sum of low-range terms, (floor(R)+1) * boundary term, sum <= bound)."""
    lg = sp.log_jap
    jtop = math.floor(sp.R)
    log_each = 2.0 * sp.p * math.log(lg) - 2.0 * sp.s2 * lg
    total = sum(math.exp(log_each + 2.0 * sp.eps * math.exp(j / (2.0 * sp.p)))
                for j in range(jtop + 1))
    bound = (jtop + 1) * math.exp(2.0 * sp.p * math.log(lg) - sp.s2 * lg)
    return total, bound, total <= bound * (1.0 + 1e-12)


def geometric_tail(sp: SplitPoint, check_terms: int = 400) -> tuple[float, float]:
    """(exact tail sum over integer j >= ceil(R), the bound 3 (2 eps/s2)^(2p)).

    The tail sum_{j >= ceil(R)} log^(2p)<xi> e^(-j) has the closed form
    log^(2p)<xi> e^(-ceil(R)) / (1 - 1/e); the closed form is cross-checked
    against direct summation and the explicit bound is asserted.
    """
    lg = sp.log_jap
    j0 = math.ceil(sp.R)
    weight = lg ** (2.0 * sp.p)
    exact = weight * math.exp(-float(j0)) * GEOMETRIC_RATIO
    direct = weight * sum(math.exp(-float(j)) for j in range(j0, j0 + check_terms))
    if abs(exact - direct) > 1e-12 * max(abs(exact), 1e-300):
        raise RuntimeError(f"geometric tail closed form mismatch: {exact} vs {direct}")
    bound = 3.0 * (2.0 * sp.eps / sp.s2) ** (2.0 * sp.p)
    if exact > bound * (1.0 + 1e-12):
        raise RuntimeError(f"geometric tail bound violated: {exact} > {bound}")
    return exact, bound


@dataclass(frozen=True)
class SequenceBoundsReport:
    ok: bool
    high_ok: bool
    low_ok: bool
    worst_high_margin: float
    worst_low_margin: float

    def as_record(self) -> dict:
        return {"ok": self.ok, "high_ok": self.high_ok, "low_ok": self.low_ok,
                "worst_high_margin": self.worst_high_margin,
                "worst_low_margin": self.worst_low_margin}


def lemma_bounds_on_sequence(alphas, sps) -> SequenceBoundsReport:
    """Both interpolation ranges evaluated on a sequence of norm pairs.

    ``alphas`` is a list of (L2, H^s2) norm pairs of band components; only
    finitely many may be nonzero.  Per split point the high range is
    asserted with its explicit constant,

        (sum_{j >= R} log^p<xi> m_j)^2 <= 3 (2/s2)^(2p) eps^(2p) sum_j e^j m_j^2,

    while the low range, whose final constant stays implicit, is asserted
    through the proof's own chain: the Cauchy-Schwarz split against the
    pure-mode harmonic masses <xi>^(s2) m_j plus the term bound of
    :func:`low_band_sum_bound`.  Margins are reported as (rhs - lhs)/rhs.
    """
    pairs = [(float(a), float(b)) for a, b in alphas]
    if any(a < 0 or b < 0 for a, b in pairs):
        raise ValueError("norms must be nonnegative")
    m = np.array([a for a, _ in pairs])
    high_ok = True
    low_ok = True
    worst_high = math.inf
    worst_low = math.inf
    for sp in sps:
        lg = sp.log_jap
        c_high = high_band_constant(sp.p, sp.s2) * sp.eps ** (2.0 * sp.p)
        j0 = math.ceil(sp.R)
        lhs_high = (lg ** sp.p * m[j0:].sum()) ** 2
        rhs_high = c_high * float(np.sum(np.exp(np.arange(len(m))) * m**2))
        if lhs_high > rhs_high * (1.0 + 1e-12):
            high_ok = False
        if rhs_high > 0:
            worst_high = min(worst_high, (rhs_high - lhs_high) / rhs_high)

        jtop = math.floor(sp.R)
        js = np.arange(jtop + 1)
        mlow = m[: jtop + 1] if len(m) > jtop else np.concatenate([m, np.zeros(jtop + 1 - len(m))])
        lhs_low = (lg ** sp.p * mlow.sum()) ** 2
        terms_sum, terms_bound, terms_ok = low_band_sum_bound(sp)
        harmonic = np.exp(-2.0 * sp.eps * np.exp(js / (2.0 * sp.p))
                          + 2.0 * sp.s2 * lg) * mlow**2
        rhs_low = terms_sum * float(harmonic.sum())
        rhs_low_bounded = terms_bound * float(harmonic.sum())
        if not terms_ok or lhs_low > rhs_low * (1.0 + 1e-9) or rhs_low > rhs_low_bounded * (1.0 + 1e-12):
            low_ok = False
        if rhs_low > 0:
            worst_low = min(worst_low, (rhs_low - lhs_low) / rhs_low)
    ok = high_ok and low_ok
    return SequenceBoundsReport(ok=ok, high_ok=high_ok, low_ok=low_ok,
                                worst_high_margin=worst_high, worst_low_margin=worst_low)
