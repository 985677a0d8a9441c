"""Election simulation: single runs, standalone rounds and trial aggregation"""
import logging
import math
import time
from typing import Iterable, List

import numpy as np
from scipy import stats

from ..core.errors import EmptyTrialSetError
from ..core.kernel import (
    ELECTION_STREAM,
    STANDALONE_ROUND_STREAM,
    dense_uniforms,
    draw_round,
    play_round,
    play_round_reference,
    round_generator,
)
from ..core.protocols import round_schedule
from ..schemas.protocol_schema import ElectionParams, ProtocolKind, StationState
from ..schemas.sim_schema import MetricStats, MetricsSummary, RoundEstimate, RunMetrics, SamplerKind, SimConfig

logger = logging.getLogger(__name__)

QUANTILES = {"q05": 0.05, "q25": 0.25, "q50": 0.50, "q75": 0.75, "q95": 0.95}


def run_once(
    config: SimConfig,
    trial_index: int,
    keep_station_counts: bool = True,
    reference: bool = False,
) -> RunMetrics:
    """
    Simulate one election until a leader is elected or max_rounds is hit.

    With ``reference=True`` every round goes through the per-station state
    machines on dense draws; otherwise the vectorized kernel runs with the
    configured sampler.
    """
    params, protocol = config.params, config.protocol
    awake = np.zeros(params.n, dtype=np.int64)
    states = [StationState() for _ in range(params.n)] if reference else None

    total_slots = 0
    rounds_used = 0
    result = None
    for j in range(1, config.max_rounds + 1):
        schedule = round_schedule(params, protocol, j)
        rng = round_generator(config.seed, trial_index, j, ELECTION_STREAM)
        if reference:
            result, states = play_round_reference(protocol, schedule, dense_uniforms(protocol, params.n, schedule, rng), states)
        else:
            result = play_round(protocol, params.n, schedule, draw_round(config.sampler, protocol, params.n, schedule, rng))
        awake += result.awake
        total_slots += schedule.total_slots
        rounds_used = j
        if result.elected is not None:
            break

    elected = result.elected if result is not None else None
    return RunMetrics(
        trial_index=trial_index,
        rounds_used=rounds_used,
        total_slots=total_slots,
        awake_slots=awake.tolist() if keep_station_counts else [],
        max_awake=int(awake.max()),
        mean_awake=float(awake.mean()),
        leader=elected,
        terminated=elected is not None,
        leaders_claimed=result.leaders_claimed if result is not None else 0,
        informed=result.informed if result is not None else 0,
    )


def run_trial_batch(config: SimConfig, trial_indices: Iterable[int]) -> List[RunMetrics]:
    """Compact RunMetrics (no per-station counts) for a contiguous chunk of trials."""
    return [run_once(config, index, keep_station_counts=False) for index in trial_indices]


def _metric_stats(values: np.ndarray) -> MetricStats:
    if values.size == 0:
        return MetricStats(mean=0.0, variance=0.0, minimum=0.0, maximum=0.0, quantiles={name: 0.0 for name in QUANTILES})
    quantiles = np.quantile(values, list(QUANTILES.values()))
    return MetricStats(
        mean=float(values.mean()),
        variance=float(values.var(ddof=1)) if values.size > 1 else 0.0,
        minimum=float(values.min()),
        maximum=float(values.max()),
        quantiles={name: float(q) for name, q in zip(QUANTILES, quantiles)},
    )


def summarize(config: SimConfig, runs: List[RunMetrics]) -> MetricsSummary:
    """Aggregate runs ordered by trial index; non-terminated runs are counted, not averaged."""
    runs = sorted(runs, key=lambda run: run.trial_index)
    finished = [run for run in runs if run.terminated]

    rounds = np.array([run.rounds_used for run in finished], dtype=float)
    counts = np.bincount(rounds.astype(np.int64)) if finished else np.zeros(1, dtype=np.int64)
    cumulative = np.cumsum(counts) / len(runs)
    rounds_cdf = [(k, float(cumulative[k])) for k in range(1, len(cumulative))]

    mean_awake = np.array([run.mean_awake for run in finished], dtype=float)
    awake_per_round = float(mean_awake.mean() / rounds.mean()) if finished else 0.0

    summary = MetricsSummary(
        config=config,
        runs=len(runs),
        terminated=len(finished),
        nonterminated=len(runs) - len(finished),
        dual_leader_runs=sum(run.leaders_claimed > 1 for run in runs),
        uninformed_runs=sum(run.informed < config.params.n for run in finished),
        rounds=_metric_stats(rounds),
        total_slots=_metric_stats(np.array([run.total_slots for run in finished], dtype=float)),
        max_awake=_metric_stats(np.array([run.max_awake for run in finished], dtype=float)),
        mean_awake=_metric_stats(mean_awake),
        rounds_cdf=rounds_cdf,
        awake_per_round=awake_per_round,
        awake_per_round_predicted=config.protocol.deterministic_slots + config.params.epsilon,
        awake_per_round_published=config.protocol.published_awake_base + config.params.epsilon,
    )
    if summary.nonterminated:
        logger.warning(
            "Runs hit the round cap",
            extra={"nonterminated": summary.nonterminated, "max_rounds": config.max_rounds},
        )
    return summary


def execute_trials(config: SimConfig, runner=None) -> List[RunMetrics]:
    """
    RunMetrics for trial indices 0..trials-1, ordered by trial index.

    ``runner`` is any object with ``run(config) -> List[RunMetrics]``; the
    default is the backend configured in settings.
    """
    if runner is None:
        from ..config.dependencies import get_trial_runner
        runner = get_trial_runner()
    return runner.run(config)


def run_trials(config: SimConfig, runner=None) -> MetricsSummary:
    """Run trial indices 0..trials-1 and aggregate them."""
    if runner is None:
        from ..config.dependencies import get_trial_runner
        runner = get_trial_runner()

    started = time.perf_counter()
    summary = summarize(config, execute_trials(config, runner))
    logger.info(
        "Trials finished",
        extra={
            "n": config.params.n,
            "alpha": config.params.alpha,
            "protocol": config.protocol.value,
            "trials": config.trials,
            "runner": type(runner).__name__,
            "mean_rounds": summary.rounds.mean,
            "elapsed_ms": round((time.perf_counter() - started) * 1000, 1),
        },
    )
    return summary


def simulate_round(
    params: ElectionParams,
    protocol: ProtocolKind,
    j: int,
    trials: int,
    seed: int = 0,
    sampler: SamplerKind = "sparse",
    confidence: float = 0.99,
) -> RoundEstimate:
    """
    Frequency with which a standalone round j (fresh stations) elects a leader.

    Raises:
        EmptyTrialSetError: trials < 1.
    """
    if trials < 1:
        raise EmptyTrialSetError("simulate_round needs at least one trial")

    schedule = round_schedule(params, protocol, j)
    successes = 0
    for trial in range(trials):
        rng = round_generator(seed, trial, j, STANDALONE_ROUND_STREAM)
        result = play_round(protocol, params.n, schedule, draw_round(sampler, protocol, params.n, schedule, rng))
        successes += result.elected is not None

    frequency = successes / trials
    interval = stats.binomtest(successes, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return RoundEstimate(
        protocol=protocol,
        params=params,
        round_index=j,
        trials=trials,
        successes=successes,
        frequency=frequency,
        sigma=math.sqrt(frequency * (1.0 - frequency) / trials),
        ci_low=float(interval.low),
        ci_high=float(interval.high),
        confidence=confidence,
    )


def one_sided_lower_bound(estimate: RoundEstimate, confidence: float = 0.99) -> float:
    """Lower end of a one-sided Wilson interval for the success probability."""
    interval = stats.binomtest(estimate.successes, estimate.trials, alternative="greater").proportion_ci(
        confidence_level=confidence, method="wilson"
    )
    return float(interval.low)
