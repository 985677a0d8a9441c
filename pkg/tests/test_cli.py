import csv
import io
import json

import pytest

from app.analytics import exact_round_success
from app.cli import EXIT_OK, EXIT_USAGE, main
from app.schemas.protocol_schema import ElectionParams, ProtocolKind
from app.schemas.record_schema import SUMMARY_COLUMNS


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_simulate_writes_summary_csv(tmp_path):
    out = tmp_path / "summary.csv"
    code = main(["simulate", "--algo", "1", "--n", "64", "--alpha", "1.0767", "--trials", "20", "--seed", "3", "--out", str(out)])
    assert code == EXIT_OK

    text = out.read_text(encoding="utf-8")
    assert text.splitlines()[0] == ",".join(SUMMARY_COLUMNS)
    (row,) = _rows(text)
    assert row["n"] == "64"
    assert row["trials"] == "20"
    assert row["nonterminated"] == "0"


def test_simulate_grid_and_run_rows(tmp_path):
    runs = tmp_path / "runs.csv"
    code = main(["simulate", "--algo", "2", "--n", "16,32", "--alpha", "1.0404,1.06", "--trials", "5", "--runs-out", str(runs), "--out", str(tmp_path / "s.csv")])
    assert code == EXIT_OK
    assert len(_rows((tmp_path / "s.csv").read_text(encoding="utf-8"))) == 4
    rows = _rows(runs.read_text(encoding="utf-8"))
    assert len(rows) == 4 * 5
    assert {(row["n"], row["alpha"]) for row in rows} == {("16", "1.0404"), ("16", "1.06"), ("32", "1.0404"), ("32", "1.06")}
    assert all(row["algo"] == "2" and row["trial_index"].isdigit() for row in rows)


def test_sweep_crosses_protocols(capsys):
    code = main(["sweep", "--algo", "1,2", "--n", "16,32", "--alpha", "1.5", "--trials", "5"])
    assert code == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert [(row["algo"], row["n"]) for row in rows] == [("1", "16"), ("1", "32"), ("2", "16"), ("2", "32")]


def test_deterministic_json_output_is_byte_identical(capsys):
    argv = ["simulate", "--n", "32", "--alpha", "1.0767", "--trials", "10", "--seed", "7", "--format", "json", "--deterministic-output"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    second = capsys.readouterr().out

    assert first == second
    record = json.loads(first)
    assert record["timestamp"] == "1970-01-01T00:00:00+00:00"
    assert record["config"]["seed"] == 7


def test_backend_flag_selects_process_pool(capsys):
    argv = ["simulate", "--n", "32", "--alpha", "1.5", "--trials", "12", "--seed", "4", "--deterministic-output"]
    main(argv + ["--backend", "serial"])
    serial = capsys.readouterr().out
    main(argv + ["--backend", "process", "--workers", "2"])
    assert capsys.readouterr().out == serial


@pytest.mark.parametrize(
    "argv, message",
    [
        (["simulate", "--n", "1"], "greater than or equal to 2"),
        (["simulate", "--alpha", "1.0"], "greater than 1"),
        (["simulate", "--algo", "3"], "--algo must be 1 or 2"),
        (["simulate", "--n", "16,,32"], "comma-separated"),
        (["simulate", "--trials", "0"], "trials"),
        (["verify", "--only", "bogus"], "Unknown verification group"),
    ],
)
def test_invalid_input_exits_with_one(argv, message, capsys):
    assert main(argv) == EXIT_USAGE
    assert message in capsys.readouterr().err


def test_unknown_flag_is_a_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["simulate", "--fast"])
    assert excinfo.value.code == EXIT_USAGE


def test_round_prob_reports_all_three_estimates(capsys):
    code = main(["round-prob", "--algo", "1", "--n", "3", "--alpha", "2.0", "--round", "1", "--trials", "400", "--format", "json"])
    assert code == EXIT_OK
    row = json.loads(capsys.readouterr().out)

    exact = exact_round_success(ElectionParams(n=3, alpha=2.0), ProtocolKind.ALG1_STRONG, 1)
    assert row["formula_probability"] == pytest.approx(exact.p_j)
    assert row["election_probability"] >= row["formula_probability"] - 1e-15
    assert row["ci_low"] <= row["frequency"] <= row["ci_high"]


def test_round_prob_skips_enumeration_above_cap(capsys):
    code = main(["round-prob", "--algo", "2", "--n", "1000", "--alpha", "1.5", "--round", "4", "--trials", "50"])
    assert code == EXIT_OK
    (row,) = _rows(capsys.readouterr().out)
    assert row["election_probability"] == ""


def test_theory_optimal(capsys):
    assert main(["theory", "--algo", "1", "--optimal", "--format", "json"]) == EXIT_OK
    row = json.loads(capsys.readouterr().out)
    assert row["alpha_tilde"] == pytest.approx(1.0767, abs=1e-3)


def test_theory_bounds_row(capsys):
    assert main(["theory", "--algo", "2", "--n", "4096", "--alpha", "1.0404"]) == EXIT_OK
    (row,) = _rows(capsys.readouterr().out)
    assert row["awake_bound"] == ""
    assert float(row["expected_rounds_bound"]) == pytest.approx(int(row["j_star"]) + 1 / 0.07929)


def test_theory_outside_admissible_alpha_still_reports_j_star(capsys):
    assert main(["theory", "--algo", "1", "--n", "65536", "--alpha", "2.0", "--format", "json"]) == EXIT_OK
    row = json.loads(capsys.readouterr().out)
    assert row["j_star"] == 4
    assert row["admissible"] is False
    assert row["c_value"] == ""
    assert row["expected_time_bound"] == ""


def test_mellin_and_constants(capsys):
    assert main(["mellin", "--variant", "V", "--m", "1,2", "--n", "1048576"]) == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert [row["within_bound"] for row in rows] == ["True", "True"]

    assert main(["constants", "--algo", "1,2", "--format", "json"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    names = {json.loads(line)["constant"] for line in lines}
    assert {"p_star", "s_bound", "t_prime_literal"} <= names


def test_verify_subset(capsys):
    assert main(["verify", "--only", "tuning,amplitudes"]) == EXIT_OK
    assert "0 failed" in capsys.readouterr().out


def test_verify_reads_dkw_confidence_from_settings(monkeypatch, capsys):
    import app.cli as cli
    from app.schemas.record_schema import VerificationReport

    seen = {}

    def fake_run_verification(groups, options):
        seen["confidence"] = options.dkw_confidence
        return VerificationReport(checks=[])

    monkeypatch.setenv("DKW_CONFIDENCE", "0.9")
    monkeypatch.setattr(cli, "run_verification", fake_run_verification)
    assert main(["verify", "--only", "dominance"]) == EXIT_OK
    assert seen["confidence"] == 0.9
