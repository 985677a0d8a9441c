"""
Command-line driver

Subcommands: simulate, sweep, round-prob, theory, mellin, constants, verify.
Exit codes: 0 success, 1 usage/config error, 2 verification failure.
"""
import argparse
import csv
import itertools
import json
import logging
import sys
from contextlib import contextmanager
from typing import Iterator, List, Optional, Sequence, TextIO

from pydantic import ValidationError

from .analytics import (
    alpha_sup,
    enumerate_round,
    exact_round_success,
    j_star,
    lemma_constants,
    mellin_check,
    optimal_alpha,
)
from .config.dependencies import get_trial_runner
from .config.settings import Settings, get_settings
from .core.errors import DomainError, EnumerationCapError
from .core.protocols import round_schedule
from .schemas.analytic_schema import TheoryBounds
from .schemas.protocol_schema import ElectionParams, ProtocolKind
from .schemas.sim_schema import SimConfig
from .services.engine_service import execute_trials, simulate_round, summarize
from .services.report_service import (
    default_p_star,
    experiment_record,
    summary_row,
    theory_or_none,
    write_csv,
    write_ndjson,
    write_run_rows,
)
from .services.verify_service import GROUPS, VerifyOptions, render_report, run_verification
from .utils.logger import setup_logging
from .utils.parsing import parse_float_list, parse_int_list

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2


class UsageError(Exception):
    """Bad flag value detected after parsing."""


class CliParser(argparse.ArgumentParser):
    """argparse reports usage errors with exit code 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(parser: argparse.ArgumentParser, settings: Settings, lists: bool = False) -> None:
    parser.add_argument("--algo", default="1", help="Protocol: 1 (strong model) or 2 (weak model)" + (", or a list" if lists else ""))
    parser.add_argument("--n", default="1024", help="Number of stations (int or comma list)")
    parser.add_argument("--alpha", default="1.0767", help="Round-length growth factor > 1 (real or comma list)")
    parser.add_argument("--k0", type=int, default=1, help="First inner-slot index of each round")
    parser.add_argument("--trials", type=int, default=settings.default_trials)
    parser.add_argument("--seed", type=int, default=0, help="Unsigned 64-bit master seed")
    parser.add_argument("--max-rounds", type=int, default=settings.default_max_rounds)
    parser.add_argument("--out", default=None, help="Output path (stdout when omitted)")
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    parser.add_argument("--deterministic-output", action="store_true", help="Zero the record timestamp")
    parser.add_argument("--backend", choices=["serial", "process", "celery"], default=None, help="Trial backend (settings when omitted)")
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--sampler", choices=["sparse", "dense"], default=settings.draw_sampler)
    parser.add_argument("--p-star", type=float, default=None, help="Per-round success bound used for theory columns")


def build_parser(settings: Settings) -> CliParser:
    parser = CliParser(prog="cli_sim.py", description="Energy-efficient leader election simulator for single-hop radio networks")
    parser.add_argument("--log-level", default=settings.log_level)
    commands = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    simulate = commands.add_parser("simulate", help="Run elections and write one summary row per (n, alpha)")
    _add_common(simulate, settings)
    simulate.add_argument("--runs-out", default=None, help="Also write per-run rows (CSV) to this path")

    sweep = commands.add_parser("sweep", help="Cross-product grid over algo x n x alpha")
    _add_common(sweep, settings, lists=True)

    round_prob = commands.add_parser("round-prob", help="Exact, enumerated and simulated success of one round")
    _add_common(round_prob, settings)
    round_prob.add_argument("--round", type=int, required=True, dest="round_index")

    theory = commands.add_parser("theory", help="j*, C(p*, alpha) and the expected-cost bounds")
    _add_common(theory, settings)
    theory.add_argument("--optimal", action="store_true", help="Minimize C(p*, alpha) over alpha")

    mellin = commands.add_parser("mellin", help="Harmonic sums against their Mellin asymptotes")
    mellin.add_argument("--variant", choices=["U", "V"], default="U")
    mellin.add_argument("--m", default="1,2,3")
    mellin.add_argument("--n", default="1048576")
    mellin.add_argument("--r", type=int, default=64)
    mellin.add_argument("--fourier-terms", type=int, default=settings.fourier_terms)
    mellin.add_argument("--out", default=None)
    mellin.add_argument("--format", choices=["csv", "json"], default="csv")

    constants = commands.add_parser("constants", help="Recompute the per-round success lower bounds")
    constants.add_argument("--algo", default="1")
    constants.add_argument("--out", default=None)
    constants.add_argument("--format", choices=["csv", "json"], default="csv")

    verify = commands.add_parser("verify", help="Run the acceptance suite")
    verify.add_argument("--only", default=None, help=f"Comma list of groups: {','.join(GROUPS)}")
    verify.add_argument("--quick", action="store_true", help="Smaller trial counts and grids")
    verify.add_argument("--seed", type=int, default=20240601)
    verify.add_argument("--backend", choices=["serial", "process", "celery"], default=None)
    verify.add_argument("--workers", type=int, default=None)
    verify.add_argument("--sampler", choices=["sparse", "dense"], default=settings.draw_sampler)
    verify.add_argument("--out", default=None)
    return parser


@contextmanager
def _output(path: Optional[str]) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        yield handle


def _protocols(raw: str) -> List[ProtocolKind]:
    try:
        return [ProtocolKind.from_algo(item) for item in parse_int_list(raw)]
    except ValueError as error:
        raise UsageError(str(error)) from None


def _single(values: Sequence, flag: str):
    if len(values) != 1:
        raise UsageError(f"{flag} takes a single value for this command")
    return values[0]


def _grid(args) -> List[SimConfig]:
    try:
        sizes = parse_int_list(args.n)
        alphas = parse_float_list(args.alpha)
    except ValueError as error:
        raise UsageError(str(error)) from None
    return [
        SimConfig(
            params=ElectionParams(n=n, alpha=alpha, k0=args.k0),
            protocol=protocol,
            trials=args.trials,
            seed=args.seed,
            max_rounds=args.max_rounds,
            sampler=args.sampler,
        )
        for protocol, n, alpha in itertools.product(_protocols(args.algo), sizes, alphas)
    ]


def _write_rows(rows: List[dict], columns: List[str], fmt: str, out: TextIO) -> None:
    if fmt == "json":
        for row in rows:
            out.write(json.dumps(row))
            out.write("\n")
        return
    writer = csv.DictWriter(out, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


def command_simulate(args, settings: Settings) -> int:
    # Every grid point is validated before any trials run.
    configs = _grid(args)
    runner = get_trial_runner(settings, backend=args.backend, workers=args.workers)

    rows, records = [], []
    run_batches = [] if getattr(args, "runs_out", None) else None
    for config in configs:
        p_star = args.p_star or default_p_star(config.protocol)
        runs = execute_trials(config, runner)
        summary = summarize(config, runs)
        theory = theory_or_none(config.params, config.protocol, p_star, settings.geometric_tail_tolerance)
        rows.append(summary_row(summary, p_star, theory))
        records.append(experiment_record(summary, p_star, theory, deterministic=args.deterministic_output))
        if run_batches is not None:
            run_batches.append((config, runs))
        logger.info(
            "Experiment finished",
            extra={
                "n": config.params.n,
                "alpha": config.params.alpha,
                "protocol": config.protocol.value,
                "mean_rounds": summary.rounds.mean,
                "rounds_bound": rows[-1].rounds_bound,
                "awake_per_round": summary.awake_per_round,
            },
        )

    with _output(args.out) as out:
        if args.format == "json":
            write_ndjson(records, out)
        else:
            write_csv(rows, out)
    if run_batches is not None:
        with _output(args.runs_out) as out:
            write_run_rows(run_batches, out)
    return EXIT_OK


def command_round_prob(args, settings: Settings) -> int:
    protocol = _single(_protocols(args.algo), "--algo")
    n = _single(parse_int_list(args.n), "--n")
    alpha = _single(parse_float_list(args.alpha), "--alpha")
    params = ElectionParams(n=n, alpha=alpha, k0=args.k0)

    report = exact_round_success(params, protocol, args.round_index, settings.enumeration_cap)
    schedule = round_schedule(params, protocol, args.round_index)
    try:
        election = enumerate_round(protocol, n, list(schedule.k_values), "election")
    except EnumerationCapError:
        election = None
    estimate = simulate_round(params, protocol, args.round_index, args.trials, seed=args.seed, sampler=args.sampler)

    row = {
        "n": n,
        "alpha": alpha,
        "k0": args.k0,
        "algo": protocol.algo,
        "round": args.round_index,
        "inner_length": report.inner_length,
        "formula_probability": report.success,
        "election_probability": "" if election is None else election,
        "trials": estimate.trials,
        "frequency": estimate.frequency,
        "ci_low": estimate.ci_low,
        "ci_high": estimate.ci_high,
    }
    with _output(args.out) as out:
        _write_rows([row], list(row), args.format, out)
    return EXIT_OK


def command_theory(args, settings: Settings) -> int:
    protocol = _single(_protocols(args.algo), "--algo")
    p_star = args.p_star or default_p_star(protocol)

    if args.optimal:
        best = optimal_alpha(p_star)
        row = {"algo": protocol.algo, **best.model_dump()}
    else:
        n = _single(parse_int_list(args.n), "--n")
        alpha = _single(parse_float_list(args.alpha), "--alpha")
        params = ElectionParams(n=n, alpha=alpha, k0=args.k0)
        theory = theory_or_none(params, protocol, p_star, settings.geometric_tail_tolerance)
        if theory is None:
            # Outside (1, 1/(1 - p*)) only j* and the rounds bound are defined.
            js = j_star(n, alpha)
            row = {
                "algo": protocol.algo,
                **dict.fromkeys(TheoryBounds.model_fields),
                "n": n,
                "alpha": alpha,
                "p_star": p_star,
                "j_star": js,
                "alpha_sup": alpha_sup(p_star),
                "expected_rounds_bound": js + 1.0 / p_star,
                "admissible": False,
            }
        else:
            row = {"algo": protocol.algo, **theory.model_dump(), "admissible": True}
        row = {key: "" if value is None else value for key, value in row.items()}

    with _output(args.out) as out:
        _write_rows([row], list(row), args.format, out)
    return EXIT_OK


def command_mellin(args, settings: Settings) -> int:
    rows = []
    for m, n in itertools.product(parse_int_list(args.m), parse_float_list(args.n)):
        report = mellin_check(args.variant, m, n, args.r, args.fourier_terms)
        rows.append({**report.model_dump(), "within_bound": report.within_bound})
    with _output(args.out) as out:
        _write_rows(rows, list(rows[0]), args.format, out)
    return EXIT_OK


def command_constants(args, settings: Settings) -> int:
    rows = []
    for protocol in _protocols(args.algo):
        report = lemma_constants(protocol, settings.series_tolerance, settings.fourier_terms)
        for name, value in report.values.items():
            rows.append(
                {
                    "algo": protocol.algo,
                    "constant": name,
                    "value": value,
                    "published": report.published.get(name, ""),
                    "relative_deviation": report.deviations.get(name, ""),
                }
            )
    with _output(args.out) as out:
        _write_rows(rows, list(rows[0]), args.format, out)
    return EXIT_OK


def command_verify(args, settings: Settings) -> int:
    groups = [group.strip() for group in args.only.split(",")] if args.only else None
    options = VerifyOptions(
        seed=args.seed,
        quick=args.quick,
        runner=get_trial_runner(settings, backend=args.backend, workers=args.workers),
        workers=args.workers or 2,
        sampler=args.sampler,
        dkw_confidence=settings.dkw_confidence,
    )
    try:
        report = run_verification(groups, options)
    except ValueError as error:
        raise UsageError(str(error)) from None

    with _output(args.out) as out:
        out.write(render_report(report))
        out.write("\n")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


COMMANDS = {
    "simulate": command_simulate,
    "sweep": command_simulate,
    "round-prob": command_round_prob,
    "theory": command_theory,
    "mellin": command_mellin,
    "constants": command_constants,
    "verify": command_verify,
}


def _describe(error: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(part) for part in item['loc']) or 'value'}: {item['msg']}" for item in error.errors()
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        settings = get_settings()
    except ValidationError as error:
        print(f"error: invalid settings: {_describe(error)}", file=sys.stderr)
        return EXIT_USAGE

    parser = build_parser(settings)
    args = parser.parse_args(argv)
    setup_logging(args.log_level)

    try:
        return COMMANDS[args.command](args, settings)
    except ValidationError as error:
        print(f"error: invalid configuration: {_describe(error)}", file=sys.stderr)
    except (DomainError, UsageError, ValueError) as error:
        print(f"error: {error}", file=sys.stderr)
    return EXIT_USAGE
