import csv
import io
import logging

import pytest

from app.schemas.protocol_schema import ElectionParams, ProtocolKind
from app.schemas.record_schema import SUMMARY_COLUMNS, SummaryRow
from app.schemas.sim_schema import SimConfig
from app.services.engine_service import run_trials
from app.services.report_service import (
    ZERO_TIMESTAMP,
    default_p_star,
    experiment_record,
    read_ndjson,
    render_csv,
    summary_row,
    theory_or_none,
    write_ndjson,
    write_run_rows,
)


@pytest.fixture
def summary(serial_runner):
    config = SimConfig(params=ElectionParams(n=64, alpha=1.0767), protocol=ProtocolKind.ALG1_STRONG, trials=30, seed=5)
    return run_trials(config, serial_runner)


def test_csv_has_fixed_columns(summary):
    p_star = default_p_star(ProtocolKind.ALG1_STRONG)
    theory = theory_or_none(summary.config.params, ProtocolKind.ALG1_STRONG, p_star)
    text = render_csv([summary_row(summary, p_star, theory)])
    header, row = text.splitlines()

    assert header == ",".join(SUMMARY_COLUMNS)
    values = dict(zip(SUMMARY_COLUMNS, row.split(",")))
    assert values["n"] == "64"
    assert values["algo"] == "1"
    assert float(values["rounds_bound"]) == pytest.approx(theory.j_star + 1 / p_star)
    assert float(values["time_bound"]) == pytest.approx(theory.expected_time_bound)


def test_time_bound_empty_outside_admissible_range(summary, caplog):
    params = ElectionParams(n=64, alpha=1.3)
    with caplog.at_level(logging.WARNING):
        theory = theory_or_none(params, ProtocolKind.ALG1_STRONG, 0.14846)
    assert theory is None
    assert "Theory bounds unavailable" in caplog.text

    row = summary_row(summary, 0.14846, None)
    assert row.time_bound is None
    assert render_csv([row]).splitlines()[1].split(",")[SUMMARY_COLUMNS.index("time_bound")] == ""

    record = experiment_record(summary, 0.14846, None, deterministic=True)
    assert record.theory["admissible"] is False


def test_summary_row_rejects_non_finite(summary):
    row = summary_row(summary, 0.14846, None)
    with pytest.raises(ValueError):
        SummaryRow(**{**row.model_dump(), "mean_rounds": float("inf")})


def test_deterministic_record_is_reproducible(summary):
    p_star = default_p_star(ProtocolKind.ALG1_STRONG)
    theory = theory_or_none(summary.config.params, ProtocolKind.ALG1_STRONG, p_star)
    first, second = io.StringIO(), io.StringIO()
    write_ndjson([experiment_record(summary, p_star, theory, deterministic=True)], first)
    write_ndjson([experiment_record(summary, p_star, theory, deterministic=True)], second)

    assert first.getvalue() == second.getvalue()
    (record,) = read_ndjson(first.getvalue())
    assert record.timestamp == ZERO_TIMESTAMP
    assert record.config.n == 64
    assert record.config.protocol == "alg1"
    assert "config" not in record.summary


def test_run_rows_share_one_header(serial_runner):
    first = SimConfig(params=ElectionParams(n=16, alpha=2.0), protocol=ProtocolKind.ALG2_WEAK, trials=5, seed=1)
    second = SimConfig(params=ElectionParams(n=32, alpha=1.5, k0=2), protocol=ProtocolKind.ALG1_STRONG, trials=3, seed=1)
    buffer = io.StringIO()
    write_run_rows([(first, serial_runner.run(first)), (second, serial_runner.run(second))], buffer)

    lines = buffer.getvalue().splitlines()
    assert lines[0] == "n,alpha,k0,algo,seed,trial_index,rounds_used,total_slots,max_awake,mean_awake,leader,terminated"
    rows = list(csv.DictReader(io.StringIO(buffer.getvalue())))
    assert len(rows) == 8
    assert [row["trial_index"] for row in rows] == ["0", "1", "2", "3", "4", "0", "1", "2"]
    assert rows[-1]["n"] == "32" and rows[-1]["k0"] == "2" and rows[-1]["algo"] == "1"
