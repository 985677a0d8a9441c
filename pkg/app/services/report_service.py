"""Result persistence: fixed-order CSV summaries, per-run rows and NDJSON experiment records"""
import csv
import io
import logging
from datetime import datetime, timezone
from typing import Dict, Iterable, List, Optional, TextIO, Tuple

from .. import __version__
from ..analytics.bounds import j_star, theory_bounds
from ..core.errors import BoundaryError
from ..schemas.analytic_schema import TheoryBounds
from ..schemas.protocol_schema import ElectionParams, ProtocolKind
from ..schemas.record_schema import SUMMARY_COLUMNS, ConfigEcho, ExperimentRecord, SummaryRow
from ..schemas.sim_schema import MetricsSummary, RunMetrics, SimConfig

logger = logging.getLogger(__name__)

ZERO_TIMESTAMP = "1970-01-01T00:00:00+00:00"

# Published per-round success lower bounds.
DEFAULT_P_STAR = {
    ProtocolKind.ALG1_STRONG: 0.14846,
    ProtocolKind.ALG2_WEAK: 0.07929,
}

RUN_COLUMNS = [
    "n",
    "alpha",
    "k0",
    "algo",
    "seed",
    "trial_index",
    "rounds_used",
    "total_slots",
    "max_awake",
    "mean_awake",
    "leader",
    "terminated",
]


def default_p_star(protocol: ProtocolKind) -> float:
    return DEFAULT_P_STAR[protocol]


def theory_or_none(params: ElectionParams, protocol: ProtocolKind, p_star: float, tail_tolerance: float = 1e-12) -> Optional[TheoryBounds]:
    """Theory bounds, or None when alpha lies outside (1, 1/(1 - p*))."""
    try:
        return theory_bounds(params, protocol, p_star, tail_tolerance)
    except BoundaryError as error:
        logger.warning("Theory bounds unavailable", extra={"alpha": params.alpha, "p_star": p_star, "reason": str(error)})
        return None


def summary_row(summary: MetricsSummary, p_star: float, theory: Optional[TheoryBounds]) -> SummaryRow:
    config = summary.config
    params = config.params
    js = theory.j_star if theory else j_star(params.n, params.alpha)
    return SummaryRow(
        n=params.n,
        alpha=params.alpha,
        k0=params.k0,
        algo=config.protocol.algo,
        trials=config.trials,
        seed=config.seed,
        mean_rounds=summary.rounds.mean,
        mean_slots=summary.total_slots.mean,
        mean_max_awake=summary.max_awake.mean,
        p_star_used=p_star,
        j_star=js,
        rounds_bound=js + 1.0 / p_star,
        time_bound=theory.expected_time_bound if theory else None,
        nonterminated=summary.nonterminated,
    )


def experiment_record(
    summary: MetricsSummary,
    p_star: float,
    theory: Optional[TheoryBounds],
    deterministic: bool = False,
) -> ExperimentRecord:
    config = summary.config
    if theory is not None:
        theory_payload: Dict = {**theory.model_dump(mode="json"), "admissible": True}
    else:
        js = j_star(config.params.n, config.params.alpha)
        theory_payload = {"p_star": p_star, "j_star": js, "expected_rounds_bound": js + 1.0 / p_star, "admissible": False}

    return ExperimentRecord(
        config=ConfigEcho(
            n=config.params.n,
            alpha=config.params.alpha,
            k0=config.params.k0,
            protocol=config.protocol.value,
            seed=config.seed,
            trials=config.trials,
            max_rounds=config.max_rounds,
            sampler=config.sampler,
        ),
        summary=summary.model_dump(mode="json", exclude={"config"}),
        theory=theory_payload,
        timestamp=ZERO_TIMESTAMP if deterministic else datetime.now(timezone.utc).isoformat(timespec="seconds"),
        tool_version=__version__,
    )


def write_csv(rows: Iterable[SummaryRow], out: TextIO) -> None:
    writer = csv.DictWriter(out, fieldnames=SUMMARY_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.model_dump())


def write_run_rows(batches: Iterable[Tuple[SimConfig, Iterable[RunMetrics]]], out: TextIO) -> None:
    """A single CSV table over all (config, runs) batches; the config columns tell batches apart."""
    writer = csv.DictWriter(out, fieldnames=RUN_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for config, runs in batches:
        echo = {
            "n": config.params.n,
            "alpha": config.params.alpha,
            "k0": config.params.k0,
            "algo": config.protocol.algo,
            "seed": config.seed,
        }
        for run in runs:
            writer.writerow({**echo, **run.model_dump(include=set(RUN_COLUMNS))})


def write_ndjson(records: Iterable[ExperimentRecord], out: TextIO) -> None:
    for record in records:
        out.write(record.model_dump_json())
        out.write("\n")


def read_ndjson(text: str) -> List[ExperimentRecord]:
    return [ExperimentRecord.model_validate_json(line) for line in text.splitlines() if line.strip()]


def render_csv(rows: Iterable[SummaryRow]) -> str:
    buffer = io.StringIO()
    write_csv(rows, buffer)
    return buffer.getvalue()
