"""Monte Carlo baseline: sample whole tournaments and tally frequencies.

``simulate_once`` is the reference per-tournament sampler (one uniform draw
per match).  ``estimate`` vectorizes the same process across runs for the
error/convergence experiments; both are deterministic given a seed.
Per-trial streams are derived by seeding the generator with the integer list
``[master_seed, ...context]`` so trials stay independent of scheduling order.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .bracket import TournamentResult, compute_tournament, schedule_groups
from .errors import InvalidParameterError
from .group_stage import digit_pairs
from .match_model import MatchMatrices
from .schedule import COLLAPSE, CROSS, MERGE, ScheduleDescriptor, check_schedule


@dataclass(frozen=True)
class SimulatedRun:
    """One sampled tournament: survivors per stage and every match played."""

    champion: int
    survivors: dict[str, tuple[int, ...]]
    matches: tuple[tuple[str, int, int, int], ...]  # (stage, team_a, team_b, winner)


@dataclass(frozen=True)
class SimulationResult:
    runs: int
    seed: int | None
    labels: tuple[str, ...]
    champion_freq: np.ndarray  # shape (n,)
    reach_freq: np.ndarray  # shape (n, len(labels))


@dataclass(frozen=True)
class ErrorReport:
    max_abs: float
    mean_abs: float
    rmse: float


def error_report(freqs: np.ndarray, exact: np.ndarray) -> ErrorReport:
    """Error of estimated champion frequencies against exact probabilities."""
    diff = np.abs(np.asarray(freqs) - np.asarray(exact))
    return ErrorReport(
        max_abs=float(diff.max()),
        mean_abs=float(diff.mean()),
        rmse=float(np.sqrt((diff**2).mean())),
    )


def _as_rng(rng: np.random.Generator | int | Sequence[int] | None) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def simulate_once(
    matrices: MatchMatrices,
    desc: ScheduleDescriptor,
    rng: np.random.Generator | int | None = None,
) -> SimulatedRun:
    """Sample one whole tournament; one uniform draw per match.

    Group ties are broken by shuffling each tied cluster uniformly.  For the
    32-team schedules this consumes exactly 63 match samples (48 group
    matches plus 15 knockout matches).
    """
    check_schedule(desc)
    gen = _as_rng(rng)
    k = desc.group_size
    groups = schedule_groups(desc)
    pairs = digit_pairs(k)
    labels = desc.round_labels()
    matches: list[tuple[str, int, int, int]] = []

    blocks: list[tuple[int, ...]] = []
    for group in groups:
        points = [0] * k
        for i, j in pairs:
            p_loss, p_draw, _ = matrices.group[group[i], group[j]]
            u = gen.random()
            if u < p_loss:
                outcome = 0
            elif u < p_loss + p_draw:
                outcome = 1
            else:
                outcome = 2
            winner = group[i] if outcome == 2 else (group[j] if outcome == 0 else -1)
            matches.append(("groups", group[i], group[j], winner))
            if outcome == 2:
                points[i] += 3
            elif outcome == 1:
                points[i] += 1
                points[j] += 1
            else:
                points[j] += 3
        ranking: list[int] = []
        for value in sorted(set(points), reverse=True):
            tied = [t for t in range(k) if points[t] == value]
            perm = gen.permutation(len(tied))
            ranking.extend(tied[p] for p in perm)
        blocks.append((group[ranking[0]], group[ranking[1]]))

    survivors = {labels[0]: tuple(t for b in blocks for t in b)}

    def play(stage: str, t1: int, t2: int) -> int:
        w = t1 if gen.random() < matrices.knockout[t1, t2] else t2
        matches.append((stage, t1, t2, w))
        return w

    for r, ops in enumerate(desc.rounds):
        stage = labels[r]
        outputs: list[tuple[int, ...]] = []
        for op in ops:
            if op.kind == MERGE:
                a, b = (blocks[i] for i in op.blocks)
                if op.pairing == CROSS:
                    w1, w2 = play(stage, a[0], b[1]), play(stage, a[1], b[0])
                else:
                    w1, w2 = play(stage, a[0], b[0]), play(stage, a[1], b[1])
                outputs.append((w1, w2))
            elif op.kind == COLLAPSE:
                a = blocks[op.blocks[0]]
                outputs.append((play(stage, a[0], a[1]),))
            else:
                a, b = (blocks[i] for i in op.blocks)
                outputs.append((play(stage, a[0], b[0]),))
        blocks = outputs
        survivors[labels[r + 1]] = tuple(t for blk in blocks for t in blk)

    return SimulatedRun(
        champion=blocks[0][0], survivors=survivors, matches=tuple(matches)
    )


def estimate(
    matrices: MatchMatrices,
    desc: ScheduleDescriptor,
    runs: int,
    seed: int | Sequence[int] | None = 0,
) -> SimulationResult:
    """Relative frequencies over ``runs`` independent sampled tournaments.

    Vectorized across runs; distributionally identical to repeating
    ``simulate_once`` and bit-reproducible for a fixed seed.
    """
    check_schedule(desc)
    if runs < 1:
        raise InvalidParameterError(f"runs must be >= 1, got {runs}")
    gen = _as_rng(seed)
    k = desc.group_size
    n = desc.num_teams
    groups = schedule_groups(desc)
    pairs = digit_pairs(k)
    labels = desc.round_labels()
    knockout = matrices.knockout

    reach = np.zeros((n, len(labels)))
    blocks: list[tuple[np.ndarray, ...]] = []
    for group in groups:
        pts = np.zeros((runs, k))
        for i, j in pairs:
            p_loss, p_draw, _ = matrices.group[group[i], group[j]]
            u = gen.random(runs)
            out = (u >= p_loss).astype(np.int8) + (u >= p_loss + p_draw)
            pts[:, i] += 3.0 * (out == 2) + (out == 1)
            pts[:, j] += 3.0 * (out == 0) + (out == 1)
        # Points are integers, so adding U(0,1) never reorders distinct totals
        # but shuffles equal ones uniformly.
        key = pts + gen.random((runs, k))
        order = np.argsort(-key, axis=1)
        base = group[0]
        blocks.append((base + order[:, 0], base + order[:, 1]))

    for slot in (s for b in blocks for s in b):
        reach[:, 0] += np.bincount(slot, minlength=n)

    def play(t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
        p = knockout[t1, t2]
        return np.where(gen.random(runs) < p, t1, t2)

    for r, ops in enumerate(desc.rounds):
        outputs: list[tuple[np.ndarray, ...]] = []
        for op in ops:
            if op.kind == MERGE:
                a, b = (blocks[i] for i in op.blocks)
                if op.pairing == CROSS:
                    outputs.append((play(a[0], b[1]), play(a[1], b[0])))
                else:
                    outputs.append((play(a[0], b[0]), play(a[1], b[1])))
            elif op.kind == COLLAPSE:
                a = blocks[op.blocks[0]]
                outputs.append((play(a[0], a[1]),))
            else:
                a, b = (blocks[i] for i in op.blocks)
                outputs.append((play(a[0], b[0]),))
        blocks = outputs
        for slot in (s for b in blocks for s in b):
            reach[:, r + 1] += np.bincount(slot, minlength=n)

    reach /= runs
    reach.setflags(write=False)
    champion = reach[:, -1].copy()
    champion.setflags(write=False)
    return SimulationResult(
        runs=runs,
        seed=seed if isinstance(seed, int) else None,
        labels=labels,
        champion_freq=champion,
        reach_freq=reach,
    )


# ---------------------------------------------------------------------------
# Benchmark and convergence experiment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BenchmarkReport:
    schedule: str
    exact_seconds: float
    per_run_seconds: float
    equivalent_runs: float
    repeats: int
    sim_runs: int


def benchmark(
    matrices: MatchMatrices,
    desc: ScheduleDescriptor,
    repeats: int = 5,
    sim_runs: int = 200,
    seed: int = 0,
) -> BenchmarkReport:
    """Median wall time of the exact computation vs per-run simulation cost.

    Both sides run single-threaded; simulation cost is measured on the
    per-tournament reference sampler.  ``equivalent_runs`` is how many
    simulated tournaments fit into one exact computation.
    """
    if repeats < 1:
        raise InvalidParameterError("repeats must be >= 1")
    exact_times = []
    reference: TournamentResult | None = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = compute_tournament(matrices, desc)
        exact_times.append(time.perf_counter() - t0)
        if reference is None:
            reference = result
        elif not np.array_equal(reference.win, result.win):
            raise AssertionError("exact computation was not deterministic")
    sim_times = []
    for rep in range(repeats):
        gen = np.random.default_rng([seed, rep])
        t0 = time.perf_counter()
        for _ in range(sim_runs):
            simulate_once(matrices, desc, gen)
        sim_times.append((time.perf_counter() - t0) / sim_runs)
    exact_med = float(np.median(exact_times))
    per_run = float(np.median(sim_times))
    return BenchmarkReport(
        schedule=desc.name,
        exact_seconds=exact_med,
        per_run_seconds=per_run,
        equivalent_runs=exact_med / per_run,
        repeats=repeats,
        sim_runs=sim_runs,
    )


@dataclass(frozen=True)
class ConvergencePoint:
    runs: int
    stats: dict[str, tuple[float, float, float]]  # measure -> (q1, median, q3)


@dataclass(frozen=True)
class ConvergenceSummary:
    points: tuple[ConvergencePoint, ...]
    trials: int
    seed: int
    exact_seconds: float
    per_run_seconds: float
    equivalent_runs: float

    def to_csv(self) -> str:
        lines = ["runs,trial_stat,measure,value"]
        for point in self.points:
            for measure, (q1, med, q3) in point.stats.items():
                lines.append(f"{point.runs},q1,{measure},{q1!r}")
                lines.append(f"{point.runs},median,{measure},{med!r}")
                lines.append(f"{point.runs},q3,{measure},{q3!r}")
        lines.append(f",exact,seconds,{self.exact_seconds!r}")
        lines.append(f",per_run,seconds,{self.per_run_seconds!r}")
        lines.append(f",equivalent,runs,{self.equivalent_runs!r}")
        return "\n".join(lines) + "\n"


_MEASURES = ("max_abs", "mean_abs", "rmse")


def _trial_errors(
    args: tuple[MatchMatrices, ScheduleDescriptor, int, int, int, np.ndarray],
) -> tuple[float, float, float]:
    matrices, desc, runs, seed, trial, exact = args
    sim = estimate(matrices, desc, runs, seed=[seed, runs, trial])
    report = error_report(sim.champion_freq, exact)
    return report.max_abs, report.mean_abs, report.rmse


def convergence_experiment(
    matrices: MatchMatrices,
    desc: ScheduleDescriptor,
    grid: Iterable[int] = (100, 1000, 10_000, 100_000),
    trials: int = 100,
    seed: int = 0,
    workers: int = 1,
) -> ConvergenceSummary:
    """Simulation error versus run count, with the exact computation's cost
    expressed as an equivalent number of simulation runs.

    For each grid point, ``trials`` independent estimates are scored against
    the exact probabilities; the summary keeps the median and middle
    quartiles of each error measure.
    """
    grid = sorted(set(int(g) for g in grid))
    if not grid or grid[0] < 1:
        raise InvalidParameterError("grid must contain positive run counts")
    if trials < 1:
        raise InvalidParameterError("trials must be >= 1")
    exact = compute_tournament(matrices, desc).win
    bench = benchmark(matrices, desc, repeats=5, sim_runs=100, seed=seed)

    points = []
    for runs in grid:
        tasks = [(matrices, desc, runs, seed, trial, exact) for trial in range(trials)]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(_trial_errors, tasks))
        else:
            rows = [_trial_errors(t) for t in tasks]
        arr = np.asarray(rows)  # (trials, 3)
        stats = {}
        for col, measure in enumerate(_MEASURES):
            q1, med, q3 = np.percentile(arr[:, col], [25.0, 50.0, 75.0])
            stats[measure] = (float(q1), float(med), float(q3))
        points.append(ConvergencePoint(runs=runs, stats=stats))
    return ConvergenceSummary(
        points=tuple(points),
        trials=trials,
        seed=seed,
        exact_seconds=bench.exact_seconds,
        per_run_seconds=bench.per_run_seconds,
        equivalent_runs=bench.equivalent_runs,
    )
