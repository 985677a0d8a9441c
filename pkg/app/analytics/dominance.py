"""Stochastic dominance of the rounds-used distribution over j* + Geometric(p*)."""

import logging
import math
from typing import Sequence, Tuple

import numpy as np

from ..core.errors import DomainError, InsufficientSampleError
from ..schemas.analytic_schema import DominanceResult

logger = logging.getLogger(__name__)

MIN_SAMPLES = 1000
DEFAULT_CONFIDENCE = 0.99


def dkw_band(samples: int, confidence: float = DEFAULT_CONFIDENCE) -> float:
    """Dvoretzky-Kiefer-Wolfowitz half-width sqrt(ln(2/delta) / 2n), delta = 1 - confidence."""
    if samples < 1:
        raise InsufficientSampleError("the DKW band needs at least one sample")
    if not 0.0 < confidence < 1.0:
        raise DomainError(f"confidence must lie in (0, 1), got {confidence}")
    return math.sqrt(math.log(2.0 / (1.0 - confidence)) / (2.0 * samples))


def reference_cdf(k: np.ndarray, j_star: int, p_star: float) -> np.ndarray:
    """P(j* + G <= k) for G geometric on {1, 2, ...} with success probability p*."""
    excess = np.maximum(np.asarray(k) - j_star, 0)
    return -np.expm1(excess * math.log1p(-p_star))


def _step_cdf(points: Sequence[Tuple[int, float]], ks: np.ndarray) -> np.ndarray:
    """Right-continuous step function through ``points``; 0 before the first point."""
    if not points:
        return np.zeros(len(ks))
    xs = np.array([k for k, _ in points])
    ys = np.array([value for _, value in points])
    index = np.searchsorted(xs, ks, side="right") - 1
    return np.where(index >= 0, ys[np.clip(index, 0, None)], 0.0)


def dominance_check(
    empirical_rounds_cdf: Sequence[Tuple[int, float]],
    j_star: int,
    p_star: float,
    trials: int,
    confidence: float = DEFAULT_CONFIDENCE,
) -> DominanceResult:
    """
    Check F_emp(k) >= F_ref(k) - band at every k.

    ``empirical_rounds_cdf`` is a list of (k, P(rounds_used <= k)) pairs with
    increasing k, as produced by the engine summary.

    Raises:
        InsufficientSampleError: fewer than 1000 trials behind the CDF.
    """
    if trials < MIN_SAMPLES:
        raise InsufficientSampleError(f"dominance needs >= {MIN_SAMPLES} runs, got {trials}")
    if not 0.0 < p_star < 1.0:
        raise DomainError(f"p_star must lie in (0, 1), got {p_star}")

    points = sorted(empirical_rounds_cdf)
    band = dkw_band(trials, confidence)

    # Far enough right that the reference is within 1e-9 of 1.
    horizon = j_star + math.ceil(math.log(1e-9) / math.log1p(-p_star))
    last_k = points[-1][0] if points else 1
    ks = np.arange(1, max(horizon, last_k) + 1)

    gaps = _step_cdf(points, ks) - reference_cdf(ks, j_star, p_star) + band
    worst = int(np.argmin(gaps))
    margin = float(gaps[worst])

    result = DominanceResult(
        passed=margin >= 0.0,
        margin=margin,
        band=band,
        worst_k=int(ks[worst]),
        samples=trials,
        confidence=confidence,
    )
    logger.info(
        "Dominance check",
        extra={"j_star": j_star, "p_star": p_star, "passed": result.passed, "margin": margin, "worst_k": result.worst_k},
    )
    return result
