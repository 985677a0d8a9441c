"""
Closed-form per-round success probabilities.

rho(i, n)    : exactly one of n stations wakes at slot i (Alg1 candidate).
q_pair(k, n) : exactly two stations wake at slot k, one transmits, one listens
               (Alg2 initiator/witness pair).

Both use (1 - 2^-k)^(n-1) = exp((n-1) * log1p(-2^-k)) so large n and large k
stay accurate.
"""

import logging
import math

import numpy as np

from ..core.errors import DomainError, EnumerationCapError
from ..core.protocols import inner_len
from ..schemas.analytic_schema import AnalyticReport
from ..schemas.protocol_schema import ElectionParams, ProtocolKind

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_CAP = 10**6


def _check_slot(k: int, n: int) -> None:
    if int(k) != k or k < 1:
        raise DomainError(f"slot index must be an integer >= 1, got {k}")
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n}")


def rho(i: int, n: int) -> float:
    """(n / 2^i) (1 - 2^-i)^(n-1)."""
    _check_slot(i, n)
    return math.ldexp(n, -i) * math.exp((n - 1) * math.log1p(-math.ldexp(1.0, -i)))


def q_pair(k: int, n: int) -> float:
    """(1/2) C(n, 2) 4^-k (1 - 2^-k)^(n-2)."""
    _check_slot(k, n)
    pairs = n * (n - 1) / 2
    return 0.5 * pairs * math.ldexp(1.0, -2 * k) * math.exp((n - 2) * math.log1p(-math.ldexp(1.0, -k)))


def _product_form(values: np.ndarray):
    """(s, t, p) with s = prod(1 - v), t = sum v / (1 - v), p = t * s."""
    s = float(np.exp(np.sum(np.log1p(-values))))
    t = float(np.sum(values / (1.0 - values)))
    return s, t, t * s


def exact_round_success(
    params: ElectionParams,
    protocol: ProtocolKind,
    j: int,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> AnalyticReport:
    """
    Formula success probabilities of round j for both protocols.

    p_j  = sum_k rho_k prod_{i != k} (1 - rho_i)
    p'_j = sum_k q_k   prod_{i != k} (1 - q_i)

    over k = k0 .. k0 + L_j - 1, evaluated as (sum v/(1-v)) * prod(1-v).
    ``protocol`` selects what ``AnalyticReport.success`` returns.

    Raises:
        EnumerationCapError: L_j exceeds ``enumeration_cap``.
    """
    length = inner_len(j, params.alpha)
    if length > enumeration_cap:
        raise EnumerationCapError(f"round {j} has {length} inner slots, above the cap of {enumeration_cap}")

    ks = range(params.k0, params.k0 + length)
    rho_values = np.array([rho(k, params.n) for k in ks])
    q_values = np.array([q_pair(k, params.n) for k in ks])
    s_j, t_j, p_j = _product_form(rho_values)
    s_prime, t_prime, p_prime = _product_form(q_values)

    logger.debug(
        "Exact round success",
        extra={"n": params.n, "alpha": params.alpha, "k0": params.k0, "round": j, "p_j": p_j, "p_prime_j": p_prime},
    )
    return AnalyticReport(
        n=params.n,
        round_index=j,
        inner_length=length,
        k_start=params.k0,
        protocol=protocol,
        rho_values=rho_values.tolist(),
        q_values=q_values.tolist(),
        s_j=s_j,
        t_j=t_j,
        p_j=p_j,
        s_prime_j=s_prime,
        t_prime_j=t_prime,
        p_prime_j=p_prime,
    )
