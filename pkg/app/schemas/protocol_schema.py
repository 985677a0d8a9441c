"""
Protocol data schemas

Election parameters, per-station protocol memory and round bookkeeping for the
strong-model (Algorithm 1) and weak-model (Algorithm 2) election protocols.
"""

from enum import Enum
from typing import FrozenSet, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .channel_schema import ModelKind


class ProtocolKind(str, Enum):
    """Which election protocol a station runs."""

    ALG1_STRONG = "alg1"
    ALG2_WEAK = "alg2"

    @classmethod
    def from_algo(cls, algo: int) -> "ProtocolKind":
        """Map the CLI's ``--algo {1|2}`` onto a protocol."""
        try:
            return {1: cls.ALG1_STRONG, 2: cls.ALG2_WEAK}[int(algo)]
        except (KeyError, ValueError):
            raise ValueError(f"--algo must be 1 or 2, got {algo!r}") from None

    @property
    def algo(self) -> int:
        return 1 if self is ProtocolKind.ALG1_STRONG else 2

    @property
    def model(self) -> ModelKind:
        return ModelKind.STRONG if self is ProtocolKind.ALG1_STRONG else ModelKind.WEAK

    @property
    def deterministic_slots(self) -> int:
        """Fixed slots at the end of each round in which every station is awake."""
        return 1 if self is ProtocolKind.ALG1_STRONG else 2

    @property
    def draws_per_slot(self) -> int:
        """Uniform variates one station consumes per inner slot (wake, role)."""
        return 1 if self is ProtocolKind.ALG1_STRONG else 2

    @property
    def published_awake_base(self) -> float:
        """Published awake slots per round, less eps = 1 / 2**(k0 - 1)."""
        return 1.0 if self is ProtocolKind.ALG1_STRONG else 1.5


class ElectionParams(BaseModel):
    """
    Parameters shared by every station.

    ``k0`` shifts the inner loop to start at slot k0 instead of 1; the awake
    time per round then drops to roughly (1 + eps) resp. (1.5 + eps) with
    ``eps = 1 / 2**(k0 - 1)``.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=2, description="Number of stations (n >= 2).")
    alpha: float = Field(..., gt=1.0, description="Round-length growth parameter (alpha > 1).")
    k0: int = Field(default=1, ge=1, description="First inner-slot index of every round.")

    @property
    def epsilon(self) -> float:
        return 1.0 / 2 ** (self.k0 - 1)


class StationState(BaseModel):
    """Protocol memory of one station. Never holds the station's own index."""

    model_config = ConfigDict(frozen=True)

    candidate: bool = Field(default=False, description="Alg1: unique transmitter in some inner slot this round.")
    transmitted_slots: FrozenSet[int] = Field(
        default_factory=frozenset, description="Alg2: inner slots k at which this station transmitted <k>."
    )
    witness_record: Optional[int] = Field(
        default=None, description="Alg2: most recent <k> heard on a SINGLE inner slot."
    )
    pending_leader: bool = Field(
        default=False, description="Alg2: heard its own <k> forwarded in the first deterministic slot."
    )
    leader_known: bool = False
    is_leader: bool = False

    @model_validator(mode="after")
    def leader_is_informed(self):
        if self.is_leader and not self.leader_known:
            raise ValueError("is_leader implies leader_known")
        return self

    def start_round(self) -> "StationState":
        """Round-scoped memory resets; leadership knowledge persists."""
        return StationState(leader_known=self.leader_known, is_leader=self.is_leader)


class Phase(BaseModel):
    """Position inside a round: inner slot k, or deterministic slot 1/2."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["inner", "det"]
    index: int = Field(..., ge=1)

    @classmethod
    def inner(cls, k: int) -> "Phase":
        return cls(kind="inner", index=k)

    @classmethod
    def det(cls, slot_index: int) -> "Phase":
        return cls(kind="det", index=slot_index)

    @property
    def is_inner(self) -> bool:
        return self.kind == "inner"


class RoundSchedule(BaseModel):
    """Slot layout of round j."""

    model_config = ConfigDict(frozen=True)

    round_index: int = Field(..., ge=1)
    inner_length: int = Field(..., ge=1)
    deterministic_slots: int = Field(..., ge=1, le=2)
    k_start: int = Field(default=1, ge=1)

    @property
    def k_values(self) -> range:
        return range(self.k_start, self.k_start + self.inner_length)

    @property
    def total_slots(self) -> int:
        return self.inner_length + self.deterministic_slots


class RoundOutcome(BaseModel):
    """Elected(index) when ``elected`` is set, Continue otherwise."""

    model_config = ConfigDict(frozen=True)

    elected: Optional[int] = None

    @property
    def is_elected(self) -> bool:
        return self.elected is not None
