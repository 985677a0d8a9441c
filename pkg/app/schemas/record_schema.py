"""
Result record schemas

Persisted shape of experiments (newline-delimited JSON, one record per
experiment) and of the fixed-order CSV summary row.
"""

import math
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator

SUMMARY_COLUMNS = [
    "n",
    "alpha",
    "k0",
    "algo",
    "trials",
    "seed",
    "mean_rounds",
    "mean_slots",
    "mean_max_awake",
    "p_star_used",
    "j_star",
    "rounds_bound",
    "time_bound",
    "nonterminated",
]


class SummaryRow(BaseModel):
    """One CSV row; field order is the column order."""

    n: int
    alpha: float
    k0: int
    algo: int
    trials: int
    seed: int
    mean_rounds: float
    mean_slots: float
    mean_max_awake: float
    p_star_used: float
    j_star: int
    rounds_bound: float
    time_bound: Optional[float] = Field(default=None, description="Empty when alpha (1 - p*) >= 1 and the time sum diverges.")
    nonterminated: int

    @field_validator("mean_rounds", "mean_slots", "mean_max_awake", "p_star_used", "rounds_bound", "time_bound")
    @classmethod
    def finite(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and not math.isfinite(value):
            raise ValueError("CSV fields must be finite")
        return value


class ConfigEcho(BaseModel):
    n: int
    alpha: float
    k0: int
    protocol: str
    seed: int
    trials: int
    max_rounds: int
    sampler: str


class ExperimentRecord(BaseModel):
    """Everything needed to reproduce and compare one experiment."""

    config: ConfigEcho
    summary: dict = Field(..., description="MetricsSummary without the config echo.")
    theory: dict = Field(..., description="TheoryBounds for the configured p*.")
    timestamp: str = Field(..., description="ISO-8601 UTC; '1970-01-01T00:00:00+00:00' under --deterministic-output.")
    tool_version: str


class VerificationCheck(BaseModel):
    name: str
    group: str
    passed: bool
    observed: Optional[float] = None
    expected: Optional[float] = None
    detail: str = ""


class VerificationReport(BaseModel):
    checks: List[VerificationCheck] = Field(default_factory=list)

    @property
    def failures(self) -> List[VerificationCheck]:
        return [check for check in self.checks if not check.passed]

    @property
    def passed(self) -> bool:
        return not self.failures
