"""
Channel data schemas

Value types exchanged between the station state machines and the slot
arbiter. All models are frozen: a slot outcome is a pure function of the
action vector, so equal inputs must compare (and hash) equal.
"""

from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ModelKind(str, Enum):
    """No-CD channel variant."""

    STRONG = "strong"
    WEAK = "weak"


class ActionKind(str, Enum):
    SLEEP = "sleep"
    LISTEN = "listen"
    TRANSMIT = "transmit"
    TRANSMIT_LISTEN = "transmit_listen"


class SlotAction(BaseModel):
    """What one station does during one time slot."""

    model_config = ConfigDict(frozen=True)

    kind: ActionKind = Field(..., description="Sleep, listen, transmit, or transmit-and-listen.")
    payload: Optional[int] = Field(
        default=None,
        description="Small integer message (slot index <k> or a confirmation token).",
    )

    @model_validator(mode="after")
    def check_payload(self):
        if self.transmits and self.payload is None:
            raise ValueError(f"{self.kind.value} requires a payload")
        if not self.transmits and self.payload is not None:
            raise ValueError(f"{self.kind.value} carries no payload")
        return self

    @classmethod
    def sleep(cls) -> "SlotAction":
        return _SLEEP

    @classmethod
    def listen(cls) -> "SlotAction":
        return _LISTEN

    @classmethod
    def transmit(cls, payload: int) -> "SlotAction":
        return cls(kind=ActionKind.TRANSMIT, payload=payload)

    @classmethod
    def transmit_listen(cls, payload: int) -> "SlotAction":
        return cls(kind=ActionKind.TRANSMIT_LISTEN, payload=payload)

    @property
    def transmits(self) -> bool:
        return self.kind in (ActionKind.TRANSMIT, ActionKind.TRANSMIT_LISTEN)

    @property
    def listens(self) -> bool:
        return self.kind in (ActionKind.LISTEN, ActionKind.TRANSMIT_LISTEN)

    @property
    def awake(self) -> bool:
        return self.kind is not ActionKind.SLEEP


_SLEEP = SlotAction(kind=ActionKind.SLEEP)
_LISTEN = SlotAction(kind=ActionKind.LISTEN)


class ChannelStatus(BaseModel):
    """SINGLE(payload) when exactly one station transmitted, NULL otherwise."""

    model_config = ConfigDict(frozen=True)

    payload: Optional[int] = Field(default=None, description="Payload of the unique transmitter, if any.")

    @classmethod
    def single(cls, payload: int) -> "ChannelStatus":
        return cls(payload=payload)

    @classmethod
    def null(cls) -> "ChannelStatus":
        return _NULL

    @property
    def is_single(self) -> bool:
        return self.payload is not None


_NULL = ChannelStatus()


class ObservationKind(str, Enum):
    HEARD = "heard"
    NOISE = "noise"
    NOTHING = "nothing"


class Observation(BaseModel):
    """What one station perceives at the end of a slot."""

    model_config = ConfigDict(frozen=True)

    kind: ObservationKind
    payload: Optional[int] = None

    @classmethod
    def heard(cls, payload: int) -> "Observation":
        return cls(kind=ObservationKind.HEARD, payload=payload)

    @classmethod
    def noise(cls) -> "Observation":
        return _NOISE

    @classmethod
    def nothing(cls) -> "Observation":
        return _NOTHING


_NOISE = Observation(kind=ObservationKind.NOISE)
_NOTHING = Observation(kind=ObservationKind.NOTHING)


class SlotOutcome(BaseModel):
    """Arbitrated result of one slot: the channel status plus one observation per station."""

    model_config = ConfigDict(frozen=True)

    status: ChannelStatus
    observations: Tuple[Observation, ...] = Field(
        ..., description="Observation of station i at position i (positional identity only)."
    )
