"""Exact group-stage advancement probabilities.

A group of k teams plays round-robin; every match has three outcomes, so a
whole group outcome is one base-3 sequence of C(k, 2) digits.  Enumerating all
3**C(k,2) sequences once and resolving ties uniformly gives, for each ordered
pair (winner, runner-up), the exact probability that this pair advances.

The tie resolution is precomputed per group size as a ranking table: for every
sequence, a list of (first, second) entries built from the points-tie group
that covers the runner-up slot, each entry carrying weight 1 / len(list).
Aggregated per distinct pair, the weights equal the probability of that pair
under a uniformly random ordering of tied teams.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import CapacityError, InvalidParameterError
from .match_model import MatchMatrices

# Largest group size enumerated without an explicit opt-in: 3**C(6,2) is
# already 14M sequences, so anything above 5 must be requested deliberately.
MAX_GROUP_SIZE_DEFAULT = 5

POINTS_WIN = 3
POINTS_DRAW = 1


def num_matches(k: int) -> int:
    """Round-robin match count C(k, 2)."""
    return k * (k - 1) // 2


def num_sequences(k: int) -> int:
    """Number of distinct group outcomes: 3 ** C(k, 2)."""
    return 3 ** num_matches(k)


def digit_pairs(k: int) -> tuple[tuple[int, int], ...]:
    """Local team pairs (i, j), i < j, ordered by their digit index.

    The match between i < j sits at digit C(j, 2) + i, which is exactly the
    order produced by iterating j ascending, then i ascending.
    """
    return tuple((i, j) for j in range(1, k) for i in range(j))


def decode_sequence(s: int, k: int) -> tuple[int, ...]:
    """Base-3 digits of sequence s, least significant digit first.

    Digit values are read from the lower-indexed team's side:
    2 = i wins, 1 = draw, 0 = j wins.
    """
    count = num_matches(k)
    if not (0 <= s < 3**count):
        raise InvalidParameterError(f"sequence {s} out of range for group size {k}")
    digits = []
    for _ in range(count):
        digits.append(s % 3)
        s //= 3
    return tuple(digits)


def points_table(digits: Sequence[int], k: int) -> tuple[int, ...]:
    """Points per local team for one outcome sequence (3 win / 1 draw / 0 loss)."""
    points = [0] * k
    for (i, j), value in zip(digit_pairs(k), digits):
        if value == 2:
            points[i] += POINTS_WIN
        elif value == 1:
            points[i] += POINTS_DRAW
            points[j] += POINTS_DRAW
        else:
            points[j] += POINTS_WIN
    return tuple(points)


def ranking_entries(points: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """(first, second) entries for one standings table, one per tie-break.

    Let T be the points-tie group that covers the runner-up slot.  Every
    ordered pair of T yields one entry: the pair itself when T also covers the
    top slot, else (leader, pair[0]).  A singleton T gives the single
    (leader, runner-up) entry.  Weighting each entry by 1 / len(result) and
    summing per distinct pair reproduces the uniform random ordering of tied
    teams exactly; the entries listing a unique leader ahead of a tie of three
    or more are deliberately repeated so that this stays true.
    Entries are returned in ascending order for determinism.
    """
    k = len(points)
    best = max(points)
    top = [t for t in range(k) if points[t] == best]
    if len(top) >= 2:
        entries = [(f, s) for f in top for s in top if f != s]
    else:
        first = top[0]
        second_best = max(points[t] for t in range(k) if t != first)
        tied = [t for t in range(k) if points[t] == second_best and t != first]
        if len(tied) == 1:
            entries = [(first, tied[0])]
        else:
            entries = [(first, s) for s in tied for other in tied if other != s]
    return tuple(sorted(entries))


@dataclass(frozen=True)
class RankingTable:
    """Per-sequence advancing pairs for one group size.

    entries[s] lists the (first, second) entries for sequence s; each carries
    uniform weight 1 / len(entries[s]).
    """

    group_size: int
    entries: tuple[tuple[tuple[int, int], ...], ...]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def total_entries(self) -> int:
        return sum(len(p) for p in self.entries)


def _check_group_size(k: int, allow_large: bool) -> None:
    if k < 3:
        raise InvalidParameterError(f"group size must be >= 3, got {k}")
    if k > MAX_GROUP_SIZE_DEFAULT and not allow_large:
        raise CapacityError(
            f"group size {k} means 3**{num_matches(k)} = {num_sequences(k)} "
            "outcome sequences; pass allow_large=True to enumerate anyway"
        )


@lru_cache(maxsize=None)
def _ranking_table_cached(k: int) -> RankingTable:
    entries = []
    for s in range(num_sequences(k)):
        entries.append(ranking_entries(points_table(decode_sequence(s, k), k)))
    return RankingTable(group_size=k, entries=tuple(entries))


def build_ranking_table(k: int = 4, allow_large: bool = False) -> RankingTable:
    """Build (or fetch the cached) ranking table for groups of k teams."""
    _check_group_size(k, allow_large)
    return _ranking_table_cached(k)


@lru_cache(maxsize=None)
def _ranking_accumulator(k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Flattened (sequence index, pair slot, weight) arrays for fast scatter-adds."""
    table = _ranking_table_cached(k)
    counts = np.array([len(p) for p in table.entries], dtype=np.int64)
    seq_idx = np.repeat(np.arange(len(table), dtype=np.int64), counts)
    pair_slot = np.array(
        [f * k + s for row in table.entries for (f, s) in row], dtype=np.int64
    )
    weights = np.repeat(1.0 / counts, counts)
    return seq_idx, pair_slot, weights


def _sequence_probabilities(match_probs: np.ndarray, k: int) -> np.ndarray:
    """Probability of every outcome sequence given per-match outcome probs.

    match_probs has shape (C(k,2), 3) indexed by digit value; the result has
    one entry per sequence, computed digit by digit over all sequences at once.
    """
    total = num_sequences(k)
    probs = np.ones(total)
    seq = np.arange(total, dtype=np.int64)
    for d in range(num_matches(k)):
        digits = (seq // 3**d) % 3
        probs *= match_probs[d, digits]
    return probs


@dataclass(frozen=True)
class AdvancePairMatrix:
    """Exact joint advancement probabilities.

    matrix[i, j] is the probability that i finishes first and j second in
    their (shared) group; entries for teams from different groups are zero.
    """

    matrix: np.ndarray
    groups: tuple[tuple[int, ...], ...]

    @property
    def num_teams(self) -> int:
        return self.matrix.shape[0]


def group_probabilities(
    matrices: MatchMatrices,
    groups: Sequence[Sequence[int]],
    allow_large: bool = False,
) -> AdvancePairMatrix:
    """Exact (first, second) advancement probabilities for every group.

    Enumerates all outcome sequences per group, weights each by the product of
    its match probabilities, and splits ties uniformly via the ranking table.
    """
    if not groups:
        raise InvalidParameterError("need at least one group")
    k = len(groups[0])
    if any(len(g) != k for g in groups):
        raise InvalidParameterError("all groups must have the same size")
    _check_group_size(k, allow_large)
    n = matrices.num_teams
    flat = [t for g in groups for t in g]
    if sorted(flat) != sorted(set(flat)):
        raise InvalidParameterError("a team appears in more than one group")
    if any(not (0 <= t < n) for t in flat):
        raise InvalidParameterError("group references a team index out of range")

    seq_idx, pair_slot, weights = _ranking_accumulator(k)
    pairs = digit_pairs(k)
    result = np.zeros((n, n))
    for group in groups:
        match_probs = np.empty((len(pairs), 3))
        for d, (i, j) in enumerate(pairs):
            # digit 0 = i loses, 1 = draw, 2 = i wins
            p_loss, p_draw, p_win = matrices.group[group[i], group[j]]
            match_probs[d] = (p_loss, p_draw, p_win)
        seq_probs = _sequence_probabilities(match_probs, k)
        local = np.bincount(
            pair_slot, weights=seq_probs[seq_idx] * weights, minlength=k * k
        ).reshape(k, k)
        idx = np.asarray(group, dtype=np.int64)
        result[np.ix_(idx, idx)] += local
    result.setflags(write=False)
    return AdvancePairMatrix(matrix=result, groups=tuple(tuple(g) for g in groups))


def group_exit_probabilities(advance: AdvancePairMatrix) -> np.ndarray:
    """Per-team probability of finishing outside the top two."""
    m = advance.matrix
    return 1.0 - (m.sum(axis=0) + m.sum(axis=1))


def ranking_table_csv(k: int = 4, allow_large: bool = False) -> str:
    """Render the ranking table as CSV.

    Columns: s, count, then one column per possible pair (k*(k-1) of them),
    each pair encoded as k * first + second; unused cells stay blank.
    """
    table = build_ranking_table(k, allow_large=allow_large)
    max_pairs = k * (k - 1)
    buf = io.StringIO()
    header = ["s", "count"] + [f"pair{i + 1}" for i in range(max_pairs)]
    buf.write(",".join(header) + "\n")
    for s, row in enumerate(table.entries):
        cells = [str(s), str(len(row))]
        cells += [str(k * f + sec) for f, sec in row]
        cells += [""] * (max_pairs - len(row))
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()
