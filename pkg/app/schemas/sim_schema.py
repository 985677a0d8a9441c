"""
Simulation data schemas

Experiment configuration and the measurements produced by the engine.
"""

from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .protocol_schema import ElectionParams, ProtocolKind

SamplerKind = Literal["sparse", "dense"]


class SimConfig(BaseModel):
    """Parameters of a batch of independent elections."""

    model_config = ConfigDict(frozen=True)

    params: ElectionParams
    protocol: ProtocolKind
    trials: int = Field(..., ge=1, description="Number of independent runs.")
    seed: int = Field(..., ge=0, lt=2**64, description="Unsigned 64-bit master seed.")
    max_rounds: int = Field(default=1000, ge=1, description="Round cap; runs hitting it are non-terminated.")
    sampler: SamplerKind = Field(
        default="sparse",
        description="'dense' draws one uniform per (slot, station); 'sparse' draws awake sets directly.",
    )


class RunMetrics(BaseModel):
    """Measurements of one election run."""

    trial_index: int = Field(..., ge=0)
    rounds_used: int = Field(..., ge=0, description="Rounds executed (N).")
    total_slots: int = Field(..., ge=0, description="Inner + deterministic slots executed (T).")
    awake_slots: List[int] = Field(
        default_factory=list,
        description="Per-station awake counts; empty when the caller asked for a compact row.",
    )
    max_awake: int = Field(..., ge=0)
    mean_awake: float = Field(..., ge=0.0)
    leader: Optional[int] = None
    terminated: bool
    leaders_claimed: int = Field(default=0, ge=0, description="Stations with is_leader set at run end.")
    informed: int = Field(default=0, ge=0, description="Stations with leader_known set at run end.")

    @model_validator(mode="after")
    def check_accounting(self):
        if self.max_awake > self.total_slots:
            raise ValueError("max_awake cannot exceed total_slots")
        if self.terminated and self.leader is None:
            raise ValueError("a terminated run must name its leader")
        return self


class MetricStats(BaseModel):
    """Distribution summary of one scalar metric over terminated runs."""

    mean: float
    variance: float
    minimum: float
    maximum: float
    quantiles: Dict[str, float] = Field(default_factory=dict, description="q05, q25, q50, q75, q95.")


class MetricsSummary(BaseModel):
    """Aggregate of ``run_once`` over trial indices 0..trials-1."""

    config: SimConfig
    runs: int
    terminated: int
    nonterminated: int
    dual_leader_runs: int = Field(..., description="Runs ending with more than one is_leader station.")
    uninformed_runs: int = Field(..., description="Terminated runs where some station missed the result.")
    rounds: MetricStats
    total_slots: MetricStats
    max_awake: MetricStats
    mean_awake: MetricStats
    rounds_cdf: List[Tuple[int, float]] = Field(
        default_factory=list,
        description="(k, P(rounds_used <= k)) over all runs; non-terminated mass is excluded.",
    )
    awake_per_round: float = Field(..., description="Measured mean awake slots per station per round.")
    awake_per_round_predicted: float = Field(
        ..., description="Deterministic slots per round plus eps = 1 / 2**(k0 - 1), the expected inner-slot wake-ups."
    )
    awake_per_round_published: float = Field(
        ..., description="Published figure: (1 + eps) for Alg1, (1.5 + eps) for Alg2."
    )


class RoundEstimate(BaseModel):
    """Monte-Carlo estimate of the probability that a standalone round j elects."""

    protocol: ProtocolKind
    params: ElectionParams
    round_index: int
    trials: int
    successes: int
    frequency: float
    sigma: float = Field(..., description="Binomial standard error sqrt(f(1-f)/trials).")
    ci_low: float
    ci_high: float
    confidence: float
