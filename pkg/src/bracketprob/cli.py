"""Command-line interface.

Subcommands: compute, simulate, compare, bench, calibrate, bracket, serve.
All of them resolve a tournament config (bundled name or file path) and print
either a fixed-width table or machine-readable JSON lines.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .bracket import compute_tournament, most_likely_bracket
from .calibrate import calibrate_sigma
from .data_io import (
    TournamentConfig,
    combos_dict,
    load_odds_csv,
    odds_probabilities,
    render_json_lines,
    render_table,
    resolve_config,
)
from .errors import (
    EXIT_CAPACITY_ERROR,
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    EXIT_SCHEDULE_ERROR,
    BracketProbError,
    CapacityError,
    DataError,
    InvalidParameterError,
    ScheduleError,
)
from .simulate import benchmark, convergence_experiment, estimate

FORMAT_TABLE = "table"
FORMAT_JSON_LINES = "json-lines"


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config",
        required=True,
        help="bundled config name (men-2022, women-2023) or path to a config file",
    )
    parser.add_argument("--sigma", type=float, help="replace the config's rating scale")
    parser.add_argument(
        "--schedule", help="replace the config's schedule (built-in name or file)"
    )
    parser.add_argument(
        "--overrides", help="file of fixed outcomes, replacing the config's own"
    )
    parser.add_argument(
        "--format",
        choices=(FORMAT_TABLE, FORMAT_JSON_LINES),
        default=FORMAT_TABLE,
        dest="fmt",
        help="output format (default: table)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bracketprob",
        description="Exact tournament winning probabilities and simulation baselines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="exact per-team round and title probabilities")
    _add_common(p)

    p = sub.add_parser("simulate", help="Monte Carlo frequencies for comparison")
    _add_common(p)
    p.add_argument("--runs", type=int, default=100_000, help="tournaments to sample")
    p.add_argument("--seed", type=int, default=0, help="random seed")

    p = sub.add_parser(
        "compare", help="simulation error vs run count, against the exact values"
    )
    _add_common(p)
    p.add_argument(
        "--grid",
        default="100,1000,10000,100000",
        help="comma-separated run counts",
    )
    p.add_argument("--trials", type=int, default=100, help="estimates per grid point")
    p.add_argument("--seed", type=int, default=0, help="random seed")

    p = sub.add_parser("bench", help="exact computation wall time vs simulation cost")
    _add_common(p)
    p.add_argument(
        "--runs", type=int, default=200, help="simulated tournaments to time against"
    )
    p.add_argument("--seed", type=int, default=0, help="random seed")

    p = sub.add_parser("calibrate", help="fit sigma to betting-odds win probabilities")
    _add_common(p)
    p.add_argument("odds", help="CSV of team,decimal_odds covering every team")
    p.add_argument(
        "--grid",
        default="120,180,240,300,360,420,480,540,600",
        help="comma-separated sigma values to try",
    )

    p = sub.add_parser("bracket", help="jointly most likely tournament outcome")
    _add_common(p)

    p = sub.add_parser("serve", help="local HTTP API for interactive what-if clients")
    _add_common(p)
    p.add_argument("--port", type=int, default=8000, help="TCP port (default: 8000)")

    return parser


def _load_config(args: argparse.Namespace) -> TournamentConfig:
    return resolve_config(
        args.config,
        sigma=args.sigma,
        schedule=args.schedule,
        overrides_path=args.overrides,
    )


def _parse_grid(text: str, cast) -> list:
    try:
        values = [cast(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InvalidParameterError(f"--grid must be comma-separated numbers, got {text!r}")
    if not values:
        raise InvalidParameterError("--grid is empty")
    return values


def _combos_text(combos) -> str:
    lines = ["combinations (full range / support):"]
    for r in combos.rounds:
        lines.append(f"  {r.label:<8}{r.full_range:>10,}{r.support:>10,}")
    lines.append(
        f"  {'total':<8}{combos.total_full_range:>10,}{combos.total_support:>10,}"
    )
    return "\n".join(lines) + "\n"


def cmd_compute(args: argparse.Namespace) -> int:
    config = _load_config(args)
    result = compute_tournament(config.build_matrices(), config.schedule)
    labels, values = result.reach.labels, result.reach.values
    if args.fmt == FORMAT_JSON_LINES:
        meta = {"combos": combos_dict(result.combos)}
        if config.overrides:
            meta["overrides"] = len(config.overrides)
        sys.stdout.write(render_json_lines(config, labels, values, meta=meta))
    else:
        sys.stdout.write(render_table(config, labels, values, title=config.name))
        sys.stdout.write(_combos_text(result.combos))
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    config = _load_config(args)
    sim = estimate(config.build_matrices(), config.schedule, args.runs, seed=args.seed)
    if args.fmt == FORMAT_JSON_LINES:
        meta = {"runs": sim.runs, "seed": sim.seed}
        sys.stdout.write(render_json_lines(config, sim.labels, sim.reach_freq, meta=meta))
    else:
        title = f"{config.name} — {sim.runs:,} simulated tournaments (seed {sim.seed})"
        sys.stdout.write(render_table(config, sim.labels, sim.reach_freq, title=title))
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    config = _load_config(args)
    grid = _parse_grid(args.grid, int)
    summary = convergence_experiment(
        config.build_matrices(),
        config.schedule,
        grid=grid,
        trials=args.trials,
        seed=args.seed,
    )
    if args.fmt == FORMAT_JSON_LINES:
        head = {
            "type": "meta",
            "config": config.name,
            "trials": summary.trials,
            "seed": summary.seed,
            "exact_seconds": summary.exact_seconds,
            "per_run_seconds": summary.per_run_seconds,
            "equivalent_runs": summary.equivalent_runs,
        }
        lines = [json.dumps(head, sort_keys=True)]
        for point in summary.points:
            lines.append(
                json.dumps(
                    {"type": "point", "runs": point.runs, "stats": point.stats},
                    sort_keys=True,
                )
            )
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        lines = [
            f"simulation error vs exact ({summary.trials} trials per point, seed {summary.seed})",
            f"{'runs':>10}  {'measure':<10}{'q1':>12}{'median':>12}{'q3':>12}",
        ]
        for point in summary.points:
            for measure, (q1, med, q3) in point.stats.items():
                lines.append(
                    f"{point.runs:>10,}  {measure:<10}{q1:>12.6f}{med:>12.6f}{q3:>12.6f}"
                )
        lines.append(
            f"exact computation: {summary.exact_seconds:.4f} s "
            f"≈ {summary.equivalent_runs:,.0f} simulated tournaments"
        )
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    config = _load_config(args)
    report = benchmark(
        config.build_matrices(), config.schedule, sim_runs=args.runs, seed=args.seed
    )
    if args.fmt == FORMAT_JSON_LINES:
        sys.stdout.write(
            json.dumps(
                {
                    "type": "benchmark",
                    "config": config.name,
                    "schedule": report.schedule,
                    "exact_seconds": report.exact_seconds,
                    "per_run_seconds": report.per_run_seconds,
                    "equivalent_runs": report.equivalent_runs,
                    "repeats": report.repeats,
                    "sim_runs": report.sim_runs,
                },
                sort_keys=True,
            )
            + "\n"
        )
    else:
        sys.stdout.write(
            f"schedule {report.schedule}: exact {report.exact_seconds * 1e3:.2f} ms, "
            f"one simulated tournament {report.per_run_seconds * 1e6:.1f} µs, "
            f"exact ≈ {report.equivalent_runs:,.0f} runs\n"
        )
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace) -> int:
    config = _load_config(args)
    odds = load_odds_csv(args.odds)
    target = odds_probabilities(odds, config.team_names)
    result = calibrate_sigma(config, target, _parse_grid(args.grid, float))
    if args.fmt == FORMAT_JSON_LINES:
        doc = {"type": "calibration", "config": config.name}
        doc.update(result.as_dict())
        sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        lines = [f"{'sigma':>10}{'sse':>16}"]
        for sigma, sse in result.objective:
            mark = "  <- best" if sigma == result.best_sigma else ""
            lines.append(f"{sigma:>10.1f}{sse:>16.8f}{mark}")
        lines.append(f"best sigma: {result.best_sigma:g}")
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_bracket(args: argparse.Namespace) -> int:
    config = _load_config(args)
    best = most_likely_bracket(config.build_matrices(), config.schedule)
    names = config.team_names
    if args.fmt == FORMAT_JSON_LINES:
        doc = {
            "type": "bracket",
            "config": config.name,
            "probability": best.probability,
            "champion": names[best.champion],
            "group_pairs": {
                config.schedule.bracket_group_order[g]: [names[a], names[b]]
                for g, (a, b) in enumerate(best.group_pairs)
            },
            "matches": [
                {
                    "stage": m.stage,
                    "team_a": names[m.team_a],
                    "team_b": names[m.team_b],
                    "winner": names[m.winner],
                }
                for m in best.matches
            ],
        }
        sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        lines = [f"most likely bracket  p = {best.probability:.6e}", "groups:"]
        for g, (a, b) in enumerate(best.group_pairs):
            label = config.schedule.bracket_group_order[g]
            lines.append(f"  {label}: {names[a]}, {names[b]}")
        stage = None
        for m in best.matches:
            if m.stage != stage:
                stage = m.stage
                lines.append(f"{stage}:")
            loser = m.team_b if m.winner == m.team_a else m.team_a
            lines.append(f"  {names[m.winner]} over {names[loser]}")
        lines.append(f"champion: {names[best.champion]}")
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    config = _load_config(args)
    app = create_app(config)
    uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="info")
    return EXIT_OK


_COMMANDS = {
    "compute": cmd_compute,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "bench": cmd_bench,
    "calibrate": cmd_calibrate,
    "bracket": cmd_bracket,
    "serve": cmd_serve,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ScheduleError as exc:
        print(f"schedule error: {exc}", file=sys.stderr)
        return EXIT_SCHEDULE_ERROR
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY_ERROR
    except (DataError, InvalidParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except BracketProbError as exc:  # pragma: no cover - safety net
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
