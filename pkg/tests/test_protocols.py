import pytest
from pydantic import ValidationError

from app.core.errors import DomainError, IntegrityError
from app.core.protocols import (
    inner_len,
    round_outcome,
    round_schedule,
    station_act,
    station_update,
    wake_probability,
)
from app.schemas.channel_schema import Observation, SlotAction
from app.schemas.protocol_schema import ElectionParams, Phase, ProtocolKind, StationState

ALG1 = ProtocolKind.ALG1_STRONG
ALG2 = ProtocolKind.ALG2_WEAK


@pytest.mark.parametrize(
    "j, alpha, expected",
    [(1, 2.0, 2), (3, 2.0, 8), (2, 1.5, 3), (1, 1.0 + 1e-13, 1), (5, 1.0767, 2), (1, 3.0, 3)],
)
def test_inner_len(j, alpha, expected):
    assert inner_len(j, alpha) == expected


def test_inner_len_rejects_bad_arguments():
    with pytest.raises(DomainError):
        inner_len(1, 1.0)
    with pytest.raises(DomainError):
        inner_len(0, 2.0)
    with pytest.raises(DomainError):
        inner_len(10**6, 10.0)


def test_wake_probability_halves_per_slot():
    assert wake_probability(1) == 0.5
    assert wake_probability(3) == 0.125


def test_round_schedule_starts_at_k0():
    schedule = round_schedule(ElectionParams(n=8, alpha=2.0, k0=3), ALG2, 2)
    assert list(schedule.k_values) == [3, 4, 5, 6]
    assert schedule.total_slots == 6


def test_alg1_station_act():
    phase = Phase.inner(1)
    assert station_act(ALG1, StationState(), phase, [0.4]) == SlotAction.transmit_listen(1)
    assert station_act(ALG1, StationState(), phase, [0.6]) == SlotAction.sleep()
    assert station_act(ALG1, StationState(candidate=True), Phase.det(1)) == SlotAction.transmit_listen(0)
    assert station_act(ALG1, StationState(), Phase.det(1)) == SlotAction.listen()


def test_alg2_station_act_splits_roles():
    phase = Phase.inner(2)
    assert station_act(ALG2, StationState(), phase, [0.1, 0.3]) == SlotAction.transmit(2)
    assert station_act(ALG2, StationState(), phase, [0.1, 0.7]) == SlotAction.listen()
    assert station_act(ALG2, StationState(), phase, [0.3, 0.1]) == SlotAction.sleep()


def test_station_act_needs_draws():
    with pytest.raises(DomainError):
        station_act(ALG2, StationState(), Phase.inner(1), [0.1])


def test_alg1_candidate_becomes_leader():
    phase = Phase.inner(2)
    action = SlotAction.transmit_listen(2)
    state = station_update(ALG1, StationState(), phase, action, Observation.heard(2))
    assert state.candidate

    confirm = SlotAction.transmit_listen(0)
    state = station_update(ALG1, state, Phase.det(1), confirm, Observation.heard(0))
    assert state.is_leader and state.leader_known

    other = station_update(ALG1, StationState(), Phase.det(1), SlotAction.listen(), Observation.heard(0))
    assert other.leader_known and not other.is_leader


def test_alg1_collision_does_not_make_candidate():
    state = station_update(ALG1, StationState(), Phase.inner(1), SlotAction.transmit_listen(1), Observation.noise())
    assert not state.candidate


def test_alg2_initiator_witness_handshake():
    initiator, witness = StationState(), StationState()

    initiator = station_update(ALG2, initiator, Phase.inner(3), SlotAction.transmit(3), Observation.nothing())
    witness = station_update(ALG2, witness, Phase.inner(3), SlotAction.listen(), Observation.heard(3))
    assert initiator.transmitted_slots == frozenset({3})
    assert witness.witness_record == 3

    forward = station_act(ALG2, witness, Phase.det(1))
    assert forward == SlotAction.transmit(3)
    initiator = station_update(ALG2, initiator, Phase.det(1), station_act(ALG2, initiator, Phase.det(1)), Observation.heard(3))
    assert initiator.pending_leader

    confirm = station_act(ALG2, initiator, Phase.det(2))
    initiator = station_update(ALG2, initiator, Phase.det(2), confirm, Observation.nothing())
    witness = station_update(ALG2, witness, Phase.det(2), SlotAction.listen(), Observation.heard(0))
    assert initiator.is_leader
    assert witness.leader_known and not witness.is_leader


def test_alg2_witness_keeps_most_recent_record():
    state = station_update(ALG2, StationState(), Phase.inner(1), SlotAction.listen(), Observation.heard(1))
    state = station_update(ALG2, state, Phase.inner(4), SlotAction.listen(), Observation.heard(4))
    assert state.witness_record == 4


def test_start_round_keeps_leadership_only():
    state = StationState(candidate=True, witness_record=2, leader_known=True)
    fresh = state.start_round()
    assert not fresh.candidate
    assert fresh.witness_record is None
    assert fresh.leader_known


def test_round_outcome():
    leader = StationState(leader_known=True, is_leader=True)
    follower = StationState(leader_known=True)
    assert round_outcome(ALG1, [follower, leader]).elected == 1
    assert not round_outcome(ALG1, [StationState(), StationState()]).is_elected
    with pytest.raises(IntegrityError):
        round_outcome(ALG2, [leader, leader])


def test_leader_must_know_it():
    with pytest.raises(ValidationError):
        StationState(is_leader=True)
