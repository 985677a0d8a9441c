"""
Per-station state machines for the two election protocols.

Both protocols run rounds j = 1, 2, ...; round j has ceil(alpha^j) inner slots
k = k0 .. k0 + L_j - 1 in which a station wakes with probability 2^-k,
followed by a deterministic phase in which every station is awake.

Transitions are pure functions of (protocol, state, phase, draws / own action,
observation). A station's index is never an input, so stations stay anonymous.
"""

import math
from typing import Optional, Sequence

from ..schemas.channel_schema import ActionKind, Observation, ObservationKind, SlotAction
from ..schemas.protocol_schema import (
    ElectionParams,
    Phase,
    ProtocolKind,
    RoundOutcome,
    RoundSchedule,
    StationState,
)
from .errors import DomainError, IntegrityError

CEIL_GUARD = 2.0 ** -40

# Payload broadcast by Alg1 candidates and by the Alg2 confirmation; inner
# payloads are slot indices k >= 1, so 0 never collides with them.
CANDIDATE_TOKEN = 0
CONFIRM_TOKEN = 0


def guarded_ceil(value: float) -> int:
    """ceil(value - 2^-40): keeps values a rounding error above an integer from rounding up."""
    return math.ceil(value - CEIL_GUARD)


def inner_len(j: int, alpha: float) -> int:
    """Number of inner slots of round j, ceil(alpha^j)."""
    if alpha <= 1.0:
        raise DomainError(f"alpha must be > 1, got {alpha}")
    if j < 1:
        raise DomainError(f"round index must be >= 1, got {j}")
    try:
        power = math.pow(alpha, j)
    except OverflowError:
        raise DomainError(f"alpha^j overflows for alpha={alpha}, j={j}") from None
    return max(1, guarded_ceil(power))


def wake_probability(k: int) -> float:
    return math.ldexp(1.0, -k)


def round_schedule(params: ElectionParams, protocol: ProtocolKind, j: int) -> RoundSchedule:
    return RoundSchedule(
        round_index=j,
        inner_length=inner_len(j, params.alpha),
        deterministic_slots=protocol.deterministic_slots,
        k_start=params.k0,
    )


def station_act(
    kind: ProtocolKind,
    state: StationState,
    phase: Phase,
    draws: Optional[Sequence[float]] = None,
) -> SlotAction:
    """
    Choose this station's action for one slot.

    ``draws`` holds the uniform variates for an inner slot: ``draws[0]``
    decides waking, ``draws[1]`` (Alg2 only) decides transmit vs listen.
    Deterministic slots consume no draws.
    """
    if phase.is_inner:
        k = phase.index
        if draws is None or len(draws) < kind.draws_per_slot:
            raise DomainError(f"{kind.value} needs {kind.draws_per_slot} draw(s) per inner slot")
        if draws[0] >= wake_probability(k):
            return SlotAction.sleep()
        if kind is ProtocolKind.ALG1_STRONG:
            return SlotAction.transmit_listen(k)
        return SlotAction.transmit(k) if draws[1] < 0.5 else SlotAction.listen()

    if kind is ProtocolKind.ALG1_STRONG:
        return SlotAction.transmit_listen(CANDIDATE_TOKEN) if state.candidate else SlotAction.listen()

    if phase.index == 1:
        if state.witness_record is not None:
            return SlotAction.transmit(state.witness_record)
        return SlotAction.listen()
    return SlotAction.transmit(CONFIRM_TOKEN) if state.pending_leader else SlotAction.listen()


def station_update(
    kind: ProtocolKind,
    state: StationState,
    phase: Phase,
    own_action: SlotAction,
    observation: Observation,
) -> StationState:
    """Fold one slot's observation into the station's memory."""
    heard = observation.kind is ObservationKind.HEARD

    if kind is ProtocolKind.ALG1_STRONG:
        if phase.is_inner:
            if own_action.transmits and heard and observation.payload == own_action.payload:
                return state.model_copy(update={"candidate": True})
            return state
        if heard:
            return state.model_copy(update={"leader_known": True, "is_leader": state.candidate})
        return state

    if phase.is_inner:
        k = phase.index
        if own_action.kind is ActionKind.TRANSMIT:
            return state.model_copy(update={"transmitted_slots": state.transmitted_slots | {k}})
        if own_action.kind is ActionKind.LISTEN and heard:
            return state.model_copy(update={"witness_record": observation.payload})
        return state

    if phase.index == 1:
        if own_action.kind is ActionKind.LISTEN and heard and observation.payload in state.transmitted_slots:
            return state.model_copy(update={"pending_leader": True})
        return state

    # The weak model gives the confirming station no feedback; it commits on sending.
    if own_action.kind is ActionKind.TRANSMIT and state.pending_leader:
        return state.model_copy(update={"leader_known": True, "is_leader": True})
    if heard:
        return state.model_copy(update={"leader_known": True})
    return state


def round_outcome(kind: ProtocolKind, states: Sequence[StationState]) -> RoundOutcome:
    """Elected(i) iff station i holds is_leader after the deterministic phase."""
    leaders = [index for index, state in enumerate(states) if state.is_leader]
    if len(leaders) > 1:
        raise IntegrityError(f"{kind.value}: stations {leaders} all claim leadership")
    return RoundOutcome(elected=leaders[0] if leaders else None)
