"""
Expected-cost bounds: j*, the time constant C(p*, alpha), its minimizer in
alpha, and the truncated double sum bounding the expected number of slots.
"""

import logging
import math
from typing import Optional

import numpy as np
from scipy import optimize

from ..core.errors import BoundaryError, DomainError
from ..core.protocols import guarded_ceil
from ..schemas.analytic_schema import OptimalAlpha, TheoryBounds
from ..schemas.protocol_schema import ElectionParams, ProtocolKind

logger = logging.getLogger(__name__)

DEFAULT_TAIL_TOLERANCE = 1e-12
DEFAULT_ALPHA_TOLERANCE = 1e-9
UNIMODALITY_SAMPLES = 257
MAX_TIME_TERMS = 10**7

# Awake slots per station per round: inner slots contribute about 1 in
# expectation plus one deterministic slot.
ALG1_AWAKE_COEFF = 2.0


def _check_probability(p: float, name: str = "p_star") -> None:
    if not 0.0 < p < 1.0:
        raise DomainError(f"{name} must lie in (0, 1), got {p}")


def alpha_sup(p_star: float) -> float:
    """1 / (1 - p*), the supremum of alpha for which the time sum converges."""
    _check_probability(p_star)
    return 1.0 / (1.0 - p_star)


def j_star(n: int, alpha: float) -> int:
    """ceil(log_alpha log2 n), with the same ceil guard as the round length."""
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n}")
    if alpha <= 1.0:
        raise DomainError(f"alpha must be > 1, got {alpha}")
    return max(0, guarded_ceil(math.log(math.log2(n)) / math.log(alpha)))


def cost_C(x: float, y: float) -> float:
    """C(x, y) = x y^3 / ((y - 1)(1 - y(1 - x)))."""
    _check_probability(x, "x")
    if y <= 1.0:
        raise BoundaryError(f"growth factor must be > 1, got {y}")
    if y * (1.0 - x) >= 1.0:
        raise BoundaryError(f"y(1 - x) = {y * (1.0 - x)} >= 1: the time sum diverges")
    return x * y**3 / ((y - 1.0) * (1.0 - y * (1.0 - x)))


def _is_unimodal(values: np.ndarray) -> bool:
    """Non-increasing then non-decreasing."""
    steps = np.sign(np.diff(values))
    turn = int(np.argmax(steps > 0)) if np.any(steps > 0) else len(steps)
    return bool(np.all(steps[:turn] <= 0) and np.all(steps[turn:] >= 0))


def optimal_alpha(p_star: float, tol: float = DEFAULT_ALPHA_TOLERANCE) -> OptimalAlpha:
    """
    Minimize C(p*, alpha) over 1 < alpha < 1/(1 - p*).

    The interval is sampled first; the bracket handed to the bounded scalar
    minimizer is the pair of grid points around the sampled minimum.
    """
    sup = alpha_sup(p_star)
    grid = np.linspace(1.0, sup, UNIMODALITY_SAMPLES)[1:-1]
    values = np.array([cost_C(p_star, alpha) for alpha in grid])
    if not _is_unimodal(values):
        logger.warning("Sampled cost is not unimodal; bracketing the grid minimum", extra={"p_star": p_star})

    best = int(np.argmin(values))
    low = grid[best - 1] if best > 0 else 1.0 + (grid[0] - 1.0) / 2
    high = grid[best + 1] if best + 1 < len(grid) else (grid[-1] + sup) / 2

    result = optimize.minimize_scalar(
        lambda alpha: cost_C(p_star, alpha),
        bounds=(low, high),
        method="bounded",
        options={"xatol": tol},
    )
    if not result.success:
        raise BoundaryError(f"minimization of C({p_star}, .) failed: {result.message}")

    alpha_tilde = float(result.x)
    logger.debug("Optimal alpha", extra={"p_star": p_star, "alpha_tilde": alpha_tilde, "c_min": float(result.fun)})
    return OptimalAlpha(
        p_star=p_star,
        alpha_tilde=alpha_tilde,
        c_min=float(result.fun),
        alpha_sup=sup,
        tolerance=tol,
    )


def expected_time_sum(j_star_value: int, alpha: float, p_star: float, tolerance: float = DEFAULT_TAIL_TOLERANCE):
    """
    sum_{k>=1} sum_{j=1}^{j*+k} (1 + alpha^j) p (1-p)^(k-1).

    The inner sum has the closed form J + alpha (alpha^J - 1) / (alpha - 1).
    Returns (value, outer terms kept).
    """
    if alpha * (1.0 - p_star) >= 1.0:
        raise BoundaryError(f"alpha (1 - p*) = {alpha * (1.0 - p_star)} >= 1: the time sum diverges")
    terms = []
    for k in range(1, MAX_TIME_TERMS + 1):
        span = j_star_value + k
        inner = span + alpha * math.expm1(span * math.log(alpha)) / (alpha - 1.0)
        term = inner * p_star * (1.0 - p_star) ** (k - 1)
        # Terms rise, peak, then shrink geometrically with ratio about alpha (1 - p).
        shrinking = bool(terms) and term < terms[-1]
        terms.append(term)
        if shrinking and term < tolerance:
            return math.fsum(terms), k
    raise BoundaryError(f"time sum did not converge within {MAX_TIME_TERMS} terms")


def theory_bounds(
    params: ElectionParams,
    protocol: ProtocolKind,
    p_star: float,
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
) -> TheoryBounds:
    """
    Bounds on expected rounds, slots and awake slots for one configuration.

    Raises:
        BoundaryError: alpha outside (1, 1/(1 - p*)).
    """
    sup = alpha_sup(p_star)
    if not 1.0 < params.alpha < sup:
        raise BoundaryError(f"alpha={params.alpha} outside the admissible range (1, {sup:.6f})")

    js = j_star(params.n, params.alpha)
    rounds_bound = js + 1.0 / p_star
    time_bound, time_terms = expected_time_sum(js, params.alpha, p_star, tail_tolerance)

    awake_coeff: Optional[float] = ALG1_AWAKE_COEFF if protocol is ProtocolKind.ALG1_STRONG else None
    return TheoryBounds(
        n=params.n,
        alpha=params.alpha,
        p_star=p_star,
        j_star=js,
        alpha_sup=sup,
        c_value=cost_C(p_star, params.alpha),
        expected_rounds_bound=rounds_bound,
        expected_time_bound=time_bound,
        time_bound_terms=time_terms,
        awake_bound_coeff=awake_coeff,
        awake_bound=None if awake_coeff is None else awake_coeff * rounds_bound,
    )
