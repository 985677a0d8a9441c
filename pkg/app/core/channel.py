"""Single-channel no-CD slot arbitration."""

from typing import Sequence

from ..schemas.channel_schema import (
    ActionKind,
    ChannelStatus,
    ModelKind,
    Observation,
    SlotAction,
    SlotOutcome,
)
from .errors import ModelViolationError


def resolve_slot(model: ModelKind, actions: Sequence[SlotAction]) -> SlotOutcome:
    """
    Arbitrate one synchronous slot.

    The status is SINGLE(m) iff exactly one station transmits m, NULL
    otherwise. Listeners hear the payload on SINGLE and noise on NULL;
    sleepers observe nothing. Under the weak model a transmitter gets no
    feedback at all.

    Raises:
        ModelViolationError: TransmitListen under the weak model.
    """
    if model is ModelKind.WEAK:
        for index, action in enumerate(actions):
            if action.kind is ActionKind.TRANSMIT_LISTEN:
                raise ModelViolationError(
                    f"station {index}: transmit-and-listen is not available under the weak model"
                )

    transmitters = [action for action in actions if action.transmits]
    if len(transmitters) == 1:
        status = ChannelStatus.single(transmitters[0].payload)
        on_listen = Observation.heard(status.payload)
    else:
        status = ChannelStatus.null()
        on_listen = Observation.noise()

    observations = tuple(on_listen if action.listens else Observation.nothing() for action in actions)
    return SlotOutcome(status=status, observations=observations)
