"""
|Gamma(m + iy)| for integer m and the Fourier amplitudes of the periodic
fluctuations in the harmonic sums.

Only arguments with integer real part occur, so the modulus follows from

    |Gamma(1 + iy)|^2 = pi y / sinh(pi y)
    |Gamma(m + iy)|   = |Gamma(1 + iy)| * prod_{t=1}^{m-1} sqrt(t^2 + y^2)

evaluated in log space (pi y / sinh(pi y) = 2 pi y e^{-pi y} / (1 - e^{-2 pi y})).
"""

import math
from typing import Tuple

from ..core.errors import DomainError
from ..schemas.analytic_schema import MellinVariant

LN2 = math.log(2.0)
DEFAULT_FOURIER_TERMS = 16


def chi(ell: int) -> float:
    """Imaginary part of the ell-th pole 2 i ell pi / ln 2."""
    return 2.0 * math.pi * ell / LN2


def log_gamma_abs(m: int, y: float) -> float:
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m}")
    y = abs(y)
    if y == 0.0:
        return math.lgamma(m)
    py = math.pi * y
    base = 0.5 * (math.log(2.0 * py) - py - math.log1p(-math.exp(-2.0 * py)))
    return base + 0.5 * math.fsum(math.log(t * t + y * y) for t in range(1, m))


def gamma_abs(m: int, y: float) -> float:
    """|Gamma(m + iy)|; Gamma(m) when y == 0."""
    return math.exp(log_gamma_abs(m, y))


def _log_amplitude_term(variant: MellinVariant, m: int, ell: int) -> float:
    y = chi(ell)
    if variant == "U":
        return m * LN2 + log_gamma_abs(m, y) - (m - 1) * math.log(m) - math.log(LN2)
    return log_gamma_abs(2 * m, y) - m * math.log(4.0) - (2 * m - 1) * math.log(m) - math.log(LN2)


def fourier_amplitude(variant: MellinVariant, m: int, terms: int = DEFAULT_FOURIER_TERMS) -> float:
    """
    Sum over 0 < |ell| <= terms of the fluctuation coefficients' moduli.

    U: 2^m |Gamma(m + chi_ell)| / (m^(m-1) ln 2)
    V: |Gamma(2m + chi_ell)| / (4^m m^(2m-1) ln 2)
    """
    if variant not in ("U", "V"):
        raise DomainError(f"variant must be 'U' or 'V', got {variant!r}")
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m}")
    if terms < 1:
        raise DomainError(f"need at least one Fourier term, got {terms}")
    # Coefficients for +ell and -ell have the same modulus.
    return 2.0 * math.fsum(math.exp(_log_amplitude_term(variant, m, ell)) for ell in range(1, terms + 1))


def max_fourier_amplitude(
    variant: MellinVariant,
    m_range: range = range(1, 61),
    terms: int = DEFAULT_FOURIER_TERMS,
) -> Tuple[int, float]:
    """(argmax m, max amplitude) over ``m_range``."""
    return max(((m, fourier_amplitude(variant, m, terms)) for m in m_range), key=lambda item: item[1])
