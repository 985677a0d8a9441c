"""
Acceptance suite

Each group returns a list of VerificationCheck; ``run_verification`` runs the
selected groups and collects them into one VerificationReport. ``quick=True``
shrinks trial counts and grids so the suite fits in a unit-test run.
"""
import io
import logging
import math
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

from ..analytics import (
    cost_C,
    dominance_check,
    enumerate_round,
    exact_round_success,
    fourier_amplitude,
    j_star,
    lemma_constants,
    max_fourier_amplitude,
    mellin_sweep,
    optimal_alpha,
)
from ..analytics.bounds import alpha_sup
from ..analytics.dominance import DEFAULT_CONFIDENCE
from ..core.errors import IntegrityError
from ..schemas.protocol_schema import ElectionParams, ProtocolKind
from ..schemas.record_schema import VerificationCheck, VerificationReport
from ..schemas.sim_schema import MetricsSummary, RoundEstimate, SimConfig
from ..utils.template_loader import render_template
from .engine_service import one_sided_lower_bound, run_once, run_trials, simulate_round
from .report_service import DEFAULT_P_STAR, experiment_record, render_csv, summary_row, theory_or_none, write_ndjson
from .runner_service import ProcessRunner, SerialRunner

logger = logging.getLogger(__name__)

GROUPS = [
    "oracle",
    "montecarlo",
    "constants",
    "amplitudes",
    "tuning",
    "mellin",
    "correctness",
    "theorem",
    "dominance",
    "determinism",
]

TUNED_ALPHA = {
    ProtocolKind.ALG1_STRONG: 1.0767,
    ProtocolKind.ALG2_WEAK: 1.0404,
}

# alpha giving inner length L in round 1; length 1 needs alpha within the ceil guard of 1.
ALPHA_FOR_LENGTH = {1: 1.0 + 1e-13, 2: 2.0, 3: 3.0}

# Per-station replays cost O(n) model updates per slot.
STATE_MACHINE_AUDIT_MAX_N = 256


@dataclass
class VerifyOptions:
    seed: int = 20240601
    quick: bool = False
    runner: Optional[object] = None
    workers: int = 2
    sampler: str = "sparse"
    dkw_confidence: float = DEFAULT_CONFIDENCE

    def trials(self, full: int, quick: int) -> int:
        return quick if self.quick else full

    def trial_runner(self):
        return self.runner or SerialRunner()


def _check(name: str, group: str, passed: bool, observed=None, expected=None, detail: str = "") -> VerificationCheck:
    return VerificationCheck(
        name=name,
        group=group,
        passed=bool(passed),
        observed=None if observed is None else float(observed),
        expected=None if expected is None else float(expected),
        detail=detail,
    )


def check_oracle(options: VerifyOptions) -> List[VerificationCheck]:
    checks = []
    for protocol in ProtocolKind:
        for n in (2, 3, 4):
            for length, alpha in ALPHA_FOR_LENGTH.items():
                for k0 in (1, 2):
                    params = ElectionParams(n=n, alpha=alpha, k0=k0)
                    report = exact_round_success(params, protocol, 1)
                    ks = list(range(k0, k0 + length))
                    enumerated = enumerate_round(protocol, n, ks, "formula")
                    election = enumerate_round(protocol, n, ks, "election")
                    label = f"{protocol.value} n={n} L={length} k0={k0}"
                    checks.append(
                        _check(
                            f"formula vs enumeration {label}",
                            "oracle",
                            report.inner_length == length and abs(report.success - enumerated) <= 1e-12,
                            report.success,
                            enumerated,
                            f"election-event probability {election:.12g}",
                        )
                    )
                    if protocol is ProtocolKind.ALG1_STRONG:
                        checks.append(
                            _check(f"election event contains formula event {label}", "oracle", election >= enumerated - 1e-15, election, enumerated)
                        )
    return checks


def check_montecarlo(options: VerifyOptions) -> List[VerificationCheck]:
    trials = options.trials(100_000, 20_000)
    checks = []
    for protocol in ProtocolKind:
        params = ElectionParams(n=100, alpha=1.1, k0=1)
        exact = exact_round_success(params, protocol, 6).success
        estimate = simulate_round(params, protocol, 6, trials, seed=options.seed, sampler=options.sampler)
        sigma = math.sqrt(exact * (1.0 - exact) / trials)
        upper_ok = estimate.frequency <= exact + 3 * sigma + 0.02
        if protocol is ProtocolKind.ALG1_STRONG:
            passed = estimate.frequency >= exact - 3 * sigma and upper_ok
        else:
            # The Alg2 election event neither contains nor is contained in the formula event.
            passed = abs(estimate.frequency - exact) <= 3 * sigma + 0.02
        checks.append(
            _check(
                f"{protocol.value} round 6 frequency n=100 alpha=1.1",
                "montecarlo",
                passed,
                estimate.frequency,
                exact,
                f"trials={trials} sigma={sigma:.3g}",
            )
        )

    params = ElectionParams(n=16, alpha=2.0, k0=1)
    exact = exact_round_success(params, ProtocolKind.ALG1_STRONG, 3).p_j
    estimate = simulate_round(params, ProtocolKind.ALG1_STRONG, 3, trials, seed=options.seed, sampler=options.sampler)
    sigma = math.sqrt(exact * (1.0 - exact) / trials)
    checks.append(
        _check(
            "alg1 round 3 frequency n=16 alpha=2 not below formula",
            "montecarlo",
            estimate.frequency >= exact - 3 * sigma,
            estimate.frequency,
            exact,
            f"trials={trials}",
        )
    )
    return checks


def check_constants(options: VerifyOptions) -> List[VerificationCheck]:
    checks = []
    alg1 = lemma_constants(ProtocolKind.ALG1_STRONG)
    for name in ("s_series", "u_factor", "s_bound", "t_bound", "p_star"):
        observed, expected = alg1.values[name], alg1.published[name]
        checks.append(_check(f"alg1 {name}", "constants", abs(observed - expected) <= 2e-3, observed, expected))

    alg2 = lemma_constants(ProtocolKind.ALG2_WEAK)
    observed, expected = alg2.values["s_prime_bound"], alg2.published["s_prime_bound"]
    checks.append(_check("alg2 s_prime_bound", "constants", abs(observed - expected) <= 2e-3, observed, expected))
    for name in ("t_prime_bound", "t_prime_literal", "p_star", "p_star_literal"):
        deviation = alg2.deviations[name]
        checks.append(
            _check(
                f"alg2 {name}",
                "constants",
                abs(deviation) <= 0.10,
                alg2.values[name],
                alg2.published[name],
                f"relative deviation {deviation:+.4%}",
            )
        )
        logger.info("Alg2 constant deviation", extra={"constant": name, "deviation": deviation})
    return checks


def check_amplitudes(options: VerifyOptions) -> List[VerificationCheck]:
    u_arg, u_max = max_fourier_amplitude("U")
    v_arg, v_max = max_fourier_amplitude("V")
    v_at_2 = fourier_amplitude("V", 2)
    coarse = fourier_amplitude("U", 1, terms=1)
    fine = fourier_amplitude("U", 1, terms=16)
    return [
        _check("U amplitude maximum below 0.024234", "amplitudes", u_max <= 0.024234 + 1e-6, u_max, 0.024234),
        _check("U amplitude argmax", "amplitudes", u_arg == 11, u_arg, 11),
        _check("V amplitude at m=2", "amplitudes", abs(v_at_2 - 9.0054e-5) <= 0.01 * 9.0054e-5, v_at_2, 9.0054e-5),
        _check("V amplitude extremum at m=2 is the maximum", "amplitudes", v_arg == 2, v_arg, 2, f"max {v_max:.6g}"),
        _check("U amplitude converged in Fourier terms", "amplitudes", abs(fine - coarse) < 1e-10, fine - coarse, 0.0),
    ]


def check_tuning(options: VerifyOptions) -> List[VerificationCheck]:
    checks = []
    for p_star, alpha, c_value in ((0.14846, 1.0767, 29.058), (0.07929, 1.0404, 52.516)):
        observed = cost_C(p_star, alpha)
        checks.append(_check(f"C({p_star}, {alpha})", "tuning", abs(observed - c_value) <= 0.05, observed, c_value))
        best = optimal_alpha(p_star)
        checks.append(
            _check(f"optimal alpha for p*={p_star}", "tuning", abs(best.alpha_tilde - alpha) <= 1e-3, best.alpha_tilde, alpha)
        )
    for p_star, sup in ((0.14846, 1.17435), (0.07929, 1.08612)):
        observed = alpha_sup(p_star)
        checks.append(_check(f"alpha supremum for p*={p_star}", "tuning", abs(observed - sup) <= 1e-4, observed, sup))
    return checks


def check_mellin(options: VerifyOptions) -> List[VerificationCheck]:
    checks = []
    points = 8 if options.quick else 32
    for variant in ("U", "V"):
        for m in (1, 2, 3):
            reports = mellin_sweep(variant, m, r=64, points=points)
            worst = max(reports, key=lambda report: report.residual - report.fluctuation_bound - report.error_terms)
            checks.append(
                _check(
                    f"{variant}-form residual within bound m={m}",
                    "mellin",
                    all(report.within_bound for report in reports),
                    worst.residual,
                    worst.fluctuation_bound + worst.error_terms,
                    f"worst n={worst.n:.6g}",
                )
            )
    return checks


@dataclass
class StateMachineAudit:
    runs: int = 0
    mismatches: int = 0
    dual_leaders: int = 0
    uninformed: int = 0

    @property
    def clean(self) -> bool:
        return self.mismatches == 0 and self.dual_leaders == 0 and self.uninformed == 0


def audit_state_machines(config: SimConfig, trials: int) -> StateMachineAudit:
    """
    Replay the first ``trials`` elections of ``config`` through the per-station
    state machines on dense draws and compare each with the vectorized kernel.

    A replay stops at the round the kernel finished in, so a state machine that
    never elects costs no more than a correct one.
    """
    dense = config.model_copy(update={"sampler": "dense"})
    audit = StateMachineAudit()
    for trial in range(trials):
        fast = run_once(dense, trial, keep_station_counts=False)
        replay = dense.model_copy(update={"max_rounds": fast.rounds_used})
        audit.runs += 1
        try:
            slow = run_once(replay, trial, keep_station_counts=False, reference=True)
        except IntegrityError:
            audit.dual_leaders += 1
            audit.mismatches += 1
            continue
        audit.mismatches += slow != fast
        audit.dual_leaders += slow.leaders_claimed > 1
        audit.uninformed += slow.terminated and slow.informed < config.params.n
    return audit


def check_correctness(options: VerifyOptions) -> List[VerificationCheck]:
    trials = options.trials(10_000, 300)
    audited = options.trials(100, 8)
    sizes = (16, 256) if options.quick else (16, 256, 4096)
    checks = []
    for protocol in ProtocolKind:
        for n in sizes:
            config = SimConfig(
                params=ElectionParams(n=n, alpha=TUNED_ALPHA[protocol]),
                protocol=protocol,
                trials=trials,
                seed=options.seed,
                sampler=options.sampler,
            )
            summary = run_trials(config, options.trial_runner())
            label = f"{protocol.value} n={n}"
            checks.append(_check(f"no dual leaders {label}", "correctness", summary.dual_leader_runs == 0, summary.dual_leader_runs, 0))
            checks.append(_check(f"unanimity {label}", "correctness", summary.uninformed_runs == 0, summary.uninformed_runs, 0))
            fraction = summary.nonterminated / summary.runs
            checks.append(_check(f"non-terminated fraction {label}", "correctness", fraction < 1e-3, fraction, 1e-3))
            if n <= STATE_MACHINE_AUDIT_MAX_N:
                audit = audit_state_machines(config, audited)
                checks.append(
                    _check(
                        f"state machines replay the kernel {label}",
                        "correctness",
                        audit.clean,
                        audit.mismatches,
                        0,
                        f"runs={audit.runs} dual={audit.dual_leaders} uninformed={audit.uninformed}",
                    )
                )
    return checks


def check_theorem(options: VerifyOptions) -> List[VerificationCheck]:
    trials = options.trials(2000, 200)
    exponents = (6, 8) if options.quick else (6, 8, 10, 12, 14)
    checks = []
    for protocol in ProtocolKind:
        alpha = TUNED_ALPHA[protocol]
        p_star = DEFAULT_P_STAR[protocol]
        awake_coeff = 2.0 if protocol is ProtocolKind.ALG1_STRONG else 3.0
        for exponent in exponents:
            n = 2**exponent
            params = ElectionParams(n=n, alpha=alpha)
            config = SimConfig(params=params, protocol=protocol, trials=trials, seed=options.seed, sampler=options.sampler)
            summary = run_trials(config, options.trial_runner())
            js = j_star(n, alpha)
            rounds_bound = js + 1.0 / p_star
            log_log = math.log(math.log2(n)) / math.log(alpha)
            label = f"{protocol.value} n=2^{exponent}"

            slots_bound = cost_C(p_star, alpha) * math.log2(n) + 3 * log_log
            checks.append(_check(f"mean slots {label}", "theorem", summary.total_slots.mean <= slots_bound, summary.total_slots.mean, slots_bound))
            checks.append(
                _check(f"mean rounds {label}", "theorem", summary.rounds.mean <= rounds_bound + 0.5, summary.rounds.mean, rounds_bound + 0.5)
            )
            awake_bound = awake_coeff * rounds_bound + 2
            checks.append(max_awake_check(summary, awake_bound, label))
            estimate = simulate_round(params, protocol, js + 2, trials, seed=options.seed, sampler=options.sampler)
            checks.append(round_success_check(estimate, p_star, label))
    return checks


def max_awake_check(summary: MetricsSummary, awake_bound: float, label: str) -> VerificationCheck:
    """The bound is on the busiest station's awake slots, averaged over runs."""
    return _check(
        f"mean max-awake {label}",
        "theorem",
        summary.max_awake.mean <= awake_bound,
        summary.max_awake.mean,
        awake_bound,
        f"mean awake {summary.mean_awake.mean:.3f}, per-round awake {summary.awake_per_round:.3f}"
        f" (predicted {summary.awake_per_round_predicted:.3f}, published {summary.awake_per_round_published:.3f})",
    )


def round_success_check(estimate: RoundEstimate, p_star: float, label: str) -> VerificationCheck:
    """Passes when the one-sided 99% lower confidence limit clears p*."""
    lower = one_sided_lower_bound(estimate)
    return _check(
        f"round j*+2 success {label}",
        "theorem",
        lower >= p_star,
        estimate.frequency,
        p_star,
        f"one-sided 99% lower limit {lower:.4f}",
    )


def check_dominance(options: VerifyOptions) -> List[VerificationCheck]:
    trials = options.trials(10_000, 1000)
    n = 10_000 if not options.quick else 1024
    alpha, p_star = TUNED_ALPHA[ProtocolKind.ALG1_STRONG], DEFAULT_P_STAR[ProtocolKind.ALG1_STRONG]
    config = SimConfig(
        params=ElectionParams(n=n, alpha=alpha),
        protocol=ProtocolKind.ALG1_STRONG,
        trials=trials,
        seed=options.seed,
        sampler=options.sampler,
    )
    summary = run_trials(config, options.trial_runner())
    result = dominance_check(
        summary.rounds_cdf, j_star(n, alpha), p_star, summary.runs, confidence=options.dkw_confidence
    )
    return [
        _check(
            f"rounds CDF dominates j* + Geometric(p*) n={n}",
            "dominance",
            result.passed,
            result.margin,
            0.0,
            f"band {result.band:.4f} at {options.dkw_confidence:.0%}, worst k={result.worst_k}",
        )
    ]


def _simulate_output(config: SimConfig, runner) -> str:
    p_star = DEFAULT_P_STAR[config.protocol]
    summary = run_trials(config, runner)
    theory = theory_or_none(config.params, config.protocol, p_star)
    buffer = io.StringIO()
    buffer.write(render_csv([summary_row(summary, p_star, theory)]))
    write_ndjson([experiment_record(summary, p_star, theory, deterministic=True)], buffer)
    return buffer.getvalue()


def check_determinism(options: VerifyOptions) -> List[VerificationCheck]:
    config = SimConfig(
        params=ElectionParams(n=256, alpha=TUNED_ALPHA[ProtocolKind.ALG1_STRONG]),
        protocol=ProtocolKind.ALG1_STRONG,
        trials=options.trials(500, 60),
        seed=options.seed,
        sampler=options.sampler,
    )
    first = _simulate_output(config, SerialRunner())
    second = _simulate_output(config, SerialRunner(chunk_size=7))
    parallel = _simulate_output(config, ProcessRunner(workers=options.workers))
    return [
        _check("re-run is byte-identical", "determinism", first == second),
        _check("parallel run is byte-identical", "determinism", first == parallel),
    ]


CHECKS: Dict[str, Callable[[VerifyOptions], List[VerificationCheck]]] = {
    "oracle": check_oracle,
    "montecarlo": check_montecarlo,
    "constants": check_constants,
    "amplitudes": check_amplitudes,
    "tuning": check_tuning,
    "mellin": check_mellin,
    "correctness": check_correctness,
    "theorem": check_theorem,
    "dominance": check_dominance,
    "determinism": check_determinism,
}


def run_verification(groups: Optional[Sequence[str]] = None, options: Optional[VerifyOptions] = None) -> VerificationReport:
    """Run the selected groups (all by default) in their canonical order."""
    options = options or VerifyOptions()
    selected = list(groups) if groups else GROUPS
    unknown = [group for group in selected if group not in CHECKS]
    if unknown:
        raise ValueError(f"Unknown verification group(s): {', '.join(unknown)}; choose from {', '.join(GROUPS)}")

    report = VerificationReport()
    for group in GROUPS:
        if group not in selected:
            continue
        started = time.perf_counter()
        checks = CHECKS[group](options)
        report.checks.extend(checks)
        logger.info(
            "Verification group finished",
            extra={
                "group": group,
                "checks": len(checks),
                "failed": sum(not check.passed for check in checks),
                "elapsed_ms": round((time.perf_counter() - started) * 1000, 1),
            },
        )
    return report


def render_report(report: VerificationReport) -> str:
    lines = []
    for check in report.checks:
        observed = "" if check.observed is None else f" observed={check.observed:.6g}"
        expected = "" if check.expected is None else f" expected={check.expected:.6g}"
        detail = f" ({check.detail})" if check.detail else ""
        lines.append(f"[{'PASS' if check.passed else 'FAIL'}] {check.group:<12} {check.name}{observed}{expected}{detail}")
    failures = "\n".join(f"  - {check.group}: {check.name}" for check in report.failures) or "  none"
    return render_template(
        "verify_report",
        total=len(report.checks),
        passed=len(report.checks) - len(report.failures),
        failed=len(report.failures),
        checks="\n".join(lines),
        failures=failures,
    )
