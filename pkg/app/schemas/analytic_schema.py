"""
Analytic data schemas

Exact per-round probabilities, theory bounds and the Mellin-sum checks.
"""

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from .protocol_schema import ProtocolKind

MellinVariant = Literal["U", "V"]


class AnalyticReport(BaseModel):
    """Per-round probabilities for both protocols at (n, j, k0)."""

    n: int
    round_index: int
    inner_length: int
    k_start: int
    protocol: ProtocolKind = Field(..., description="Protocol whose probability `success` returns.")
    rho_values: List[float] = Field(..., description="rho(k, n) for each inner slot k.")
    q_values: List[float] = Field(..., description="q_pair(k, n) for each inner slot k.")
    s_j: float = Field(..., description="Probability of no slot with a unique transmitter.")
    t_j: float
    p_j: float = Field(..., description="Alg1 formula success probability, p_j = t_j * s_j.")
    s_prime_j: float
    t_prime_j: float
    p_prime_j: float = Field(..., description="Alg2 formula success probability, p'_j = t'_j * s'_j.")

    @model_validator(mode="after")
    def check_probabilities(self):
        for name in ("s_j", "p_j", "s_prime_j", "p_prime_j"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name}={value} is not a probability")
        return self

    @property
    def success(self) -> float:
        return self.p_j if self.protocol is ProtocolKind.ALG1_STRONG else self.p_prime_j


class TheoryBounds(BaseModel):
    """Upper bounds on rounds, time and awake slots for one (n, alpha, p*)."""

    n: int
    alpha: float
    p_star: float
    j_star: int
    alpha_sup: float = Field(..., description="1 / (1 - p*), the supremum of admissible alpha.")
    c_value: float = Field(..., description="C(p*, alpha).")
    expected_rounds_bound: float = Field(..., description="j* + 1/p*.")
    expected_time_bound: float = Field(..., description="Truncated double sum over (k, j).")
    time_bound_terms: int = Field(..., description="Outer terms kept before the geometric tail fell below tolerance.")
    awake_bound_coeff: Optional[float] = Field(
        default=None,
        description="Per-round awake coefficient: 2 for Alg1; None for Alg2 (measured, not assumed).",
    )
    awake_bound: Optional[float] = Field(default=None, description="awake_bound_coeff * (j* + 1/p*).")


class OptimalAlpha(BaseModel):
    p_star: float
    alpha_tilde: float
    c_min: float
    alpha_sup: float
    tolerance: float


class MellinReport(BaseModel):
    """Direct harmonic sum against its Mellin asymptote for one (m, n, r)."""

    variant: MellinVariant
    m: int
    n: float
    r: int
    direct_sum: float
    asymptote: float = Field(..., description="Residue at s=0 of the Mellin transform.")
    literal_asymptote: float = Field(..., description="Constant exactly as displayed in the source formula.")
    amplitude_bound: float = Field(..., ge=0.0, description="Fourier amplitude bound for this m.")
    fluctuation_bound: float = Field(..., ge=0.0, description="Bound on |direct_sum - asymptote| from the fluctuation.")
    error_terms: float = Field(..., ge=0.0, description="2^m/n^m + n^m/2^(rm).")
    residual: float = Field(..., ge=0.0)

    @property
    def within_bound(self) -> bool:
        return self.residual <= self.fluctuation_bound + self.error_terms


class SeriesValue(BaseModel):
    value: float
    terms: int = Field(..., description="Index of the last term kept (truncation index).")


class ConstantsReport(BaseModel):
    """Recomputed lower-bound pipeline for one protocol."""

    protocol: ProtocolKind
    values: Dict[str, float]
    truncation: Dict[str, int]
    published: Dict[str, float]
    deviations: Dict[str, float] = Field(..., description="Relative deviation from the published value.")
    notes: List[str] = Field(default_factory=list)


class DominanceResult(BaseModel):
    """Empirical CDF of rounds against j* + Geometric(p*) within a DKW band."""

    passed: bool
    margin: float = Field(..., description="min over k of F_emp(k) - F_ref(k) + band; >= 0 means pass.")
    band: float
    worst_k: int
    samples: int
    confidence: float
