"""Ground-state growth probe for the reduced Schrodinger family.

Separating the degenerate model operator over the Fourier mode zeta in its
flat direction leaves H_zeta = -d^2/dy^2 + a(y) zeta^2; the growth of its
ground state Lambda(zeta) against (log<zeta>)^(2p), with
<zeta> = sqrt(e^2 + zeta^2), decides whether the logarithmic gain of order
p can hold.  Probing with the separated mode family gives the divergence
of that ratio as a necessary criterion; as a sufficiency indicator it is
heuristic, and the verdict is a calibrated finite-data decision rule.

On the model family a(y) = exp(-|y|^(-alpha)) the ground state follows the
potential/kinetic balance Lambda ~ (2 log zeta)^(2/alpha) with corrections
that decay only like log log zeta / log zeta, so the growth exponent is
estimated against the self-corrected abscissa u = 2 log<zeta> - log Lambda
(the depth of the classical well at the turning point) rather than
log log<zeta> directly; the raw abscissa overstates the exponent by ~0.4
at desk scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coeff import CoeffFn
from .spectral import build_schrodinger, smallest_eigenvalues

__all__ = [
    "ProbeReport",
    "BestConstantPoint",
    "jap",
    "lambda_curve",
    "fitted_exponent",
    "lambda_growth",
    "best_constant_curve",
    "eps_from_target",
]

HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"

#: ratio growth deciding the verdict; calibrated on the model family at the
#: default grid (k = 4..20, n = 8193, R_y = 1), where subcritical cases
#: grow by >= 3.4 and supercritical/critical ones by <= 2.5.
GROWTH_HOLD = 2.9
GROWTH_FAIL = 2.9


def jap(x) -> np.ndarray:
    """Regularized modulus sqrt(e^2 + x^2); its log is always >= 1."""
    return np.sqrt(math.e**2 + np.square(np.asarray(x, float)))


@dataclass(frozen=True)
class ProbeReport:
    p: float
    zeta_grid: np.ndarray
    lambda_min: np.ndarray
    ratios: np.ndarray
    fitted_exponent: float
    verdict: str
    growth_factor: float
    n: int
    R_y: float
    under_resolved: bool = False
    monotone: bool = True
    best_constant_curve: tuple = field(default_factory=tuple)

    def as_record(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "R_y": self.R_y,
            "verdict": self.verdict,
            "fitted_exponent": self.fitted_exponent,
            "growth_factor": self.growth_factor,
            "under_resolved": self.under_resolved,
            "monotone": self.monotone,
            "zeta": self.zeta_grid.tolist(),
            "lambda_min": self.lambda_min.tolist(),
            "ratio": self.ratios.tolist(),
            "best_constant_curve": [list(t) for t in self.best_constant_curve],
        }


def lambda_curve(a: CoeffFn, zetas, R_y: float, n: int) -> np.ndarray:
    """Ground-state eigenvalue of H_zeta for each zeta."""
    return np.array([
        float(smallest_eigenvalues(build_schrodinger(a, float(z), R_y, n), 1)[0])
        for z in zetas
    ])


def fitted_exponent(zetas, lams) -> float:
    """Least-squares growth exponent on the top half of the grid.

    Slope of log Lambda against log(2 log<zeta> - log Lambda); the abscissa
    is the computable well depth, which absorbs the slowly decaying
    correction of the balance asymptotics.
    """
    zetas = np.asarray(zetas, float)
    lams = np.asarray(lams, float)
    u = 2.0 * np.log(jap(zetas)) - np.log(lams)
    if (u <= 0).any():
        u = np.maximum(u, 1e-12)
    half = len(zetas) // 2
    x = np.log(u[half:])
    y = np.log(lams[half:])
    return float(np.polyfit(x, y, 1)[0])


def lambda_growth(
    a: CoeffFn,
    p: float,
    R_y: float = 1.0,
    n: int = 8193,
    k_range: tuple[int, int] = (4, 20),
    *,
    growth_hold: float = GROWTH_HOLD,
    growth_fail: float = GROWTH_FAIL,
    stability_check: bool = True,
) -> ProbeReport:
    """Probe Lambda(zeta) on zeta = e^(k/2) and decide the order-p verdict.

    holds: the ratio Lambda/(log<zeta>)^(2p) grows by ``growth_hold`` or
    more across the grid and is still increasing on the top half;
    fails: the ratio grows by at most ``growth_fail``; otherwise
    inconclusive.  ``stability_check`` re-solves on a doubled grid and
    marks the report under-resolved when Lambda moves by more than 1e-3
    relatively for zeta <= e^10.
    """
    if not p > 0:
        raise ValueError("p must be positive")
    k_lo, k_hi = k_range
    if not (2 <= k_lo < k_hi <= 24):
        raise ValueError("k_range must satisfy 2 <= lo < hi <= 24")
    ks = np.arange(k_lo, k_hi + 1)
    zetas = np.exp(ks / 2.0)
    lams = lambda_curve(a, zetas, R_y, n)
    ratios = lams / np.log(jap(zetas)) ** (2.0 * p)

    under = False
    if stability_check:
        sel = zetas <= math.e**10
        fine = lambda_curve(a, zetas[sel], R_y, 2 * n - 1)
        under = bool((np.abs(fine - lams[sel]) > 1e-3 * np.abs(fine)).any())

    monotone = bool((np.diff(lams) >= -1e-9 * np.abs(lams[1:])).all())
    growth = float(ratios[-1] / ratios[0])
    half = len(ratios) // 2
    increasing_tail = ratios[-1] > ratios[half]
    if growth >= growth_hold and increasing_tail:
        verdict = HOLDS
    elif growth <= growth_fail:
        verdict = FAILS
    else:
        verdict = INCONCLUSIVE

    return ProbeReport(p=p, zeta_grid=zetas, lambda_min=lams, ratios=ratios,
                       fitted_exponent=fitted_exponent(zetas, lams),
                       verdict=verdict, growth_factor=growth, n=n, R_y=R_y,
                       under_resolved=under, monotone=monotone)


@dataclass(frozen=True)
class BestConstantPoint:
    eps_prime: float
    constant: float
    constant_extended: float
    diverging: bool


def best_constant_curve(
    a: CoeffFn,
    p: float,
    eps_list,
    R_y: float = 1.0,
    n: int = 8193,
    k_range: tuple[int, int] = (4, 20),
    extend_by: int = 4,
    divergence_factor: float = 1.25,
) -> list[BestConstantPoint]:
    """Best-constant estimates C(eps') = max over the probe family of
    (log<zeta>)^(2p) - eps' Lambda(zeta), clamped below at zero.

    Each point carries the value on the base grid and on a grid extended by
    ``extend_by`` half-steps of log zeta; growth of the extended value by
    ``divergence_factor`` or more flags the constant as diverging.
    """
    eps_list = [float(e) for e in eps_list]
    if not eps_list or any(e <= 0 for e in eps_list):
        raise ValueError("eps_list must be positive")
    if any(b > a_ for a_, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_list must be decreasing")
    k_lo, k_hi = k_range
    ks_ext = np.arange(k_lo, min(k_hi + extend_by, 24) + 1)
    zetas_ext = np.exp(ks_ext / 2.0)
    lams_ext = lambda_curve(a, zetas_ext, R_y, n)
    base = len(np.arange(k_lo, k_hi + 1))
    logs = np.log(jap(zetas_ext))
    out = []
    for eps in eps_list:
        gaps = logs ** (2.0 * p) - eps * lams_ext
        c_base = max(0.0, float(gaps[:base].max()))
        c_ext = max(0.0, float(gaps.max()))
        diverging = c_ext >= divergence_factor * c_base and c_ext > 0.0
        out.append(BestConstantPoint(eps, c_base, c_ext, diverging))
    return out


def eps_from_target(eps_prime: float, p: float, s2: float) -> float:
    """Invert the budget split: eps = (eps' / (3 (2/s2)^(2p) e))^(1/(2p)).

    3 (2/s2)^(2p) is the explicit high-band constant of the interpolation
    step, and the extra factor e is the band-energy overhead.
    """
    if eps_prime <= 0 or p <= 0 or s2 <= 0:
        raise ValueError("all arguments must be positive")
    c = 3.0 * (2.0 / s2) ** (2.0 * p)
    return (eps_prime / (c * math.e)) ** (1.0 / (2.0 * p))
