"""
Harmonic sums against their Mellin asymptotes.

    U-form: sum_{k=1}^{r} (n/2^k)^m e^{-m n/2^k}
            ~ m! / (m^(m+1) ln 2) + (1/(m 2^m)) U_m(log2 n)

    V-form: sum_{k=1}^{r} 4^-m (n^2/4^k)^m e^{-m n/2^k}
            ~ (2m-1)! / (4^m m^(2m) ln 2) + (1/m) V_m(log2 n)

U_m and V_m are mean-zero periodic fluctuations bounded by
``fourier_amplitude``. The V-form constant carried as ``literal_asymptote``
has m^(2m+1) in the denominator; it matches the residue only at m = 1.
"""

import logging
import math
from typing import List

import numpy as np

from ..core.errors import DomainError
from ..schemas.analytic_schema import MellinReport, MellinVariant
from .special import DEFAULT_FOURIER_TERMS, LN2, fourier_amplitude

logger = logging.getLogger(__name__)


def _direct_sum(variant: MellinVariant, m: int, n: float, r: int) -> float:
    log_x = math.log(n) - np.arange(1, r + 1) * LN2
    x = np.exp(log_x)
    if variant == "U":
        log_terms = m * log_x - m * x
    else:
        log_terms = -m * math.log(4.0) + 2 * m * log_x - m * x
    return math.fsum(np.exp(log_terms).tolist())


def mellin_asymptote(variant: MellinVariant, m: int, literal: bool = False) -> float:
    if variant == "U":
        return math.exp(math.lgamma(m + 1) - (m + 1) * math.log(m)) / LN2
    power = 2 * m + 1 if literal else 2 * m
    return math.exp(math.lgamma(2 * m) - m * math.log(4.0) - power * math.log(m)) / LN2


def mellin_check(
    variant: MellinVariant,
    m: int,
    n: float,
    r: int,
    terms: int = DEFAULT_FOURIER_TERMS,
) -> MellinReport:
    """
    Compare the truncated direct sum with its asymptote.

    The residual |direct_sum - asymptote| is expected to stay within the
    fluctuation bound plus 2^m/n^m + n^m/2^(rm).
    """
    if variant not in ("U", "V"):
        raise DomainError(f"variant must be 'U' or 'V', got {variant!r}")
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m}")
    if r < 1:
        raise DomainError(f"r must be >= 1, got {r}")
    if n <= 0:
        raise DomainError(f"n must be positive, got {n}")

    direct = _direct_sum(variant, m, n, r)
    asymptote = mellin_asymptote(variant, m)
    amplitude = fourier_amplitude(variant, m, terms)
    fluctuation = amplitude / (m * 2**m) if variant == "U" else amplitude / m

    log_n = math.log(n)
    error_terms = math.exp(m * (LN2 - log_n)) + math.exp(min(m * (log_n - r * LN2), 700.0))

    report = MellinReport(
        variant=variant,
        m=m,
        n=n,
        r=r,
        direct_sum=direct,
        asymptote=asymptote,
        literal_asymptote=mellin_asymptote(variant, m, literal=True),
        amplitude_bound=amplitude,
        fluctuation_bound=fluctuation,
        error_terms=error_terms,
        residual=abs(direct - asymptote),
    )
    logger.debug(
        "Mellin check",
        extra={"variant": variant, "m": m, "n": n, "r": r, "residual": report.residual, "within_bound": report.within_bound},
    )
    return report


def mellin_sweep(
    variant: MellinVariant,
    m: int,
    r: int = 64,
    low_exponent: float = 10.0,
    high_exponent: float = 30.0,
    points: int = 32,
    terms: int = DEFAULT_FOURIER_TERMS,
) -> List[MellinReport]:
    """``mellin_check`` at ``points`` values of n log-uniform in [2^low, 2^high]."""
    if points < 1:
        raise DomainError(f"points must be >= 1, got {points}")
    exponents = np.linspace(low_exponent, high_exponent, points)
    return [mellin_check(variant, m, float(2.0**e), r, terms) for e in exponents]


def fluctuation_mean(variant: MellinVariant, m: int, base_exponent: float = 20.0, points: int = 256, r: int = 64) -> float:
    """Mean of direct_sum - asymptote over one period of log2 n."""
    offsets = np.arange(points) / points
    deviations = [
        _direct_sum(variant, m, float(2.0 ** (base_exponent + t)), r) - mellin_asymptote(variant, m) for t in offsets
    ]
    return float(np.mean(deviations))
