import pytest

from app.schemas.protocol_schema import ElectionParams, ProtocolKind
from app.schemas.record_schema import VerificationCheck, VerificationReport
from app.schemas.sim_schema import RoundEstimate, RunMetrics, SimConfig
from app.services.engine_service import summarize
from app.services.verify_service import (
    GROUPS,
    VerifyOptions,
    audit_state_machines,
    check_correctness,
    max_awake_check,
    render_report,
    round_success_check,
    run_verification,
)


def _failures(report):
    return [(check.name, check.observed, check.expected, check.detail) for check in report.failures]


@pytest.mark.parametrize("group", ["oracle", "constants", "amplitudes", "tuning", "mellin"])
def test_analytic_groups_pass(group):
    report = run_verification([group], VerifyOptions(quick=True))
    assert report.checks
    assert report.passed, _failures(report)


@pytest.mark.slow
@pytest.mark.parametrize("group", ["montecarlo", "correctness", "theorem", "dominance", "determinism"])
def test_simulation_groups_pass(group):
    report = run_verification([group], VerifyOptions(quick=True))
    assert report.passed, _failures(report)


def test_groups_run_in_canonical_order():
    report = run_verification(["tuning", "amplitudes"], VerifyOptions(quick=True))
    groups = [check.group for check in report.checks]
    assert groups.index("amplitudes") < groups.index("tuning")
    assert set(groups) <= set(GROUPS)


def test_unknown_group():
    with pytest.raises(ValueError):
        run_verification(["oracle", "vibes"])


def test_render_report_lists_failures():
    report = VerificationReport(
        checks=[
            VerificationCheck(name="ok", group="tuning", passed=True, observed=1.0, expected=1.0),
            VerificationCheck(name="off", group="mellin", passed=False, observed=2.0, expected=1.0, detail="worst n=1024"),
        ]
    )
    text = render_report(report)
    assert text.startswith("Verification: 2 checks, 1 passed, 1 failed")
    assert "[FAIL] mellin" in text
    assert "  - mellin: off" in text


def _frozen_station_update(kind, state, phase, own_action, observation):
    return state


@pytest.mark.parametrize("kind", list(ProtocolKind), ids=lambda kind: kind.value)
def test_state_machines_replay_the_kernel(kind):
    config = SimConfig(params=ElectionParams(n=16, alpha=1.5), protocol=kind, trials=10, seed=3)
    audit = audit_state_machines(config, 10)
    assert audit.runs == 10
    assert audit.clean, audit


def test_audit_flags_stations_that_never_learn(monkeypatch):
    monkeypatch.setattr("app.core.kernel.station_update", _frozen_station_update)
    config = SimConfig(params=ElectionParams(n=16, alpha=1.5), protocol=ProtocolKind.ALG1_STRONG, trials=4, seed=3)
    audit = audit_state_machines(config, 4)
    assert audit.mismatches == 4
    assert not audit.clean


@pytest.mark.slow
def test_correctness_group_fails_for_stations_that_never_learn(monkeypatch):
    monkeypatch.setattr("app.core.kernel.station_update", _frozen_station_update)
    checks = check_correctness(VerifyOptions(quick=True))
    failed = {check.name for check in checks if not check.passed}
    assert "state machines replay the kernel alg1 n=16" in failed
    assert "state machines replay the kernel alg2 n=256" in failed


def test_max_awake_bound_uses_the_busiest_station(small_config):
    runs = [
        RunMetrics(
            trial_index=index,
            rounds_used=4,
            total_slots=40,
            max_awake=30,
            mean_awake=5.0,
            leader=0,
            terminated=True,
            leaders_claimed=1,
            informed=32,
        )
        for index in range(3)
    ]
    check = max_awake_check(summarize(small_config, runs), awake_bound=20.0, label="busy")
    assert not check.passed
    assert check.observed == 30.0


def test_round_success_needs_the_lower_confidence_limit_above_p_star():
    params = ElectionParams(n=64, alpha=1.5)
    barely = RoundEstimate(
        protocol=ProtocolKind.ALG1_STRONG, params=params, round_index=5, trials=100, successes=16,
        frequency=0.16, sigma=0.0367, ci_low=0.08, ci_high=0.28, confidence=0.99,
    )
    assert not round_success_check(barely, 0.14846, "barely").passed
    clear = barely.model_copy(update={"trials": 10_000, "successes": 3000, "frequency": 0.3})
    assert round_success_check(clear, 0.14846, "clear").passed
