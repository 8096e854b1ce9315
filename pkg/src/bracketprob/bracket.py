"""Exact probability propagation through a knockout bracket.

Each block of the bracket carries a sparse joint distribution: a pair block
maps ordered (slot-1 team, slot-2 team) tuples to probabilities, a single
block maps teams to probabilities.  Rounds transform blocks with the three
schedule primitives; every transformation only iterates the current support,
so the whole tournament costs a few tens of thousands of multiply-adds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import InvalidParameterError
from .group_stage import (
    AdvancePairMatrix,
    build_ranking_table,
    group_probabilities,
    num_sequences,
)
from .match_model import MatchMatrices
from .schedule import (
    COLLAPSE,
    CROSS,
    MERGE,
    MERGE_SINGLES,
    RoundOp,
    ScheduleDescriptor,
    check_schedule,
)


@dataclass(frozen=True)
class PairDistribution:
    """Joint distribution over the ordered (slot-1, slot-2) survivors of a block."""

    lo: int  # first bracket position covered
    hi: int  # last bracket position covered
    probs: dict[tuple[int, int], float]

    def total(self) -> float:
        return float(sum(self.probs.values()))

    def marginals(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        for (i, j), p in self.probs.items():
            out[i] += p
            out[j] += p
        return out


@dataclass(frozen=True)
class SingleDistribution:
    """Distribution over the lone survivor of a block."""

    lo: int
    hi: int
    probs: dict[int, float]

    def total(self) -> float:
        return float(sum(self.probs.values()))

    def marginals(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        for i, p in self.probs.items():
            out[i] += p
        return out


Block = Union[PairDistribution, SingleDistribution]


def _pair_arrays(block: PairDistribution) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    keys = list(block.probs)
    s1 = np.fromiter((k[0] for k in keys), dtype=np.int64, count=len(keys))
    s2 = np.fromiter((k[1] for k in keys), dtype=np.int64, count=len(keys))
    p = np.fromiter((block.probs[k] for k in keys), dtype=np.float64, count=len(keys))
    return s1, s2, p


def _collect_pairs(flat: np.ndarray, n: int, lo: int, hi: int) -> PairDistribution:
    idx = np.nonzero(flat)[0]
    probs = {(int(i) // n, int(i) % n): float(flat[i]) for i in idx}
    return PairDistribution(lo=lo, hi=hi, probs=probs)


def merge(
    a: PairDistribution,
    b: PairDistribution,
    pairing: str,
    knockout: np.ndarray,
) -> PairDistribution:
    """Play the two cross-block matches and keep the joint winner distribution.

    ``cross`` pairs a's slot 1 with b's slot 2 (and vice versa); ``straight``
    pairs equal slots.  The output's slot 1 is the winner of the match that
    involved a's slot 1.
    """
    a1, a2, pa = _pair_arrays(a)
    b1, b2, pb = _pair_arrays(b)
    na, nb = len(pa), len(pb)
    A1, A2 = np.repeat(a1, nb), np.repeat(a2, nb)
    B1, B2 = np.tile(b1, na), np.tile(b2, na)
    P = np.repeat(pa, nb) * np.tile(pb, na)
    if pairing == CROSS:
        m1a, m1b = A1, B2
        m2a, m2b = A2, B1
    else:
        m1a, m1b = A1, B1
        m2a, m2b = A2, B2
    p1 = knockout[m1a, m1b]
    p2 = knockout[m2a, m2b]
    n = knockout.shape[0]
    flat = np.zeros(n * n)
    for w1, q1 in ((m1a, p1), (m1b, 1.0 - p1)):
        for w2, q2 in ((m2a, p2), (m2b, 1.0 - p2)):
            flat += np.bincount(w1 * n + w2, weights=P * q1 * q2, minlength=n * n)
    return _collect_pairs(flat, n, a.lo, b.hi)


def collapse(block: PairDistribution, knockout: np.ndarray) -> SingleDistribution:
    """Play the block's two slots against each other; keep the winner."""
    s1, s2, p = _pair_arrays(block)
    n = knockout.shape[0]
    pwin = knockout[s1, s2]
    flat = np.bincount(s1, weights=p * pwin, minlength=n)
    flat += np.bincount(s2, weights=p * (1.0 - pwin), minlength=n)
    idx = np.nonzero(flat)[0]
    return SingleDistribution(
        lo=block.lo, hi=block.hi, probs={int(i): float(flat[i]) for i in idx}
    )


def merge_singles(
    a: SingleDistribution, b: SingleDistribution, knockout: np.ndarray
) -> SingleDistribution:
    """One final match between two independently decided block winners."""
    ia = np.fromiter(a.probs, dtype=np.int64, count=len(a.probs))
    pa = np.fromiter(a.probs.values(), dtype=np.float64, count=len(a.probs))
    ib = np.fromiter(b.probs, dtype=np.int64, count=len(b.probs))
    pb = np.fromiter(b.probs.values(), dtype=np.float64, count=len(b.probs))
    n = knockout.shape[0]
    I = np.repeat(ia, len(ib))
    J = np.tile(ib, len(ia))
    P = np.repeat(pa, len(ib)) * np.tile(pb, len(ia))
    q = knockout[I, J]
    flat = np.bincount(I, weights=P * q, minlength=n)
    flat += np.bincount(J, weights=P * (1.0 - q), minlength=n)
    idx = np.nonzero(flat)[0]
    return SingleDistribution(
        lo=a.lo, hi=b.hi, probs={int(i): float(flat[i]) for i in idx}
    )


@dataclass(frozen=True)
class RoundCount:
    """Loop-iteration accounting for one stage.

    ``full_range`` counts iterations over full index ranges as in a dense
    nested-loop formulation; parallel collapses of equally sized blocks share
    one index range.  ``support`` counts actual sparse iterations performed.
    """

    label: str
    full_range: int
    support: int


@dataclass(frozen=True)
class CombinationCounts:
    rounds: tuple[RoundCount, ...]

    @property
    def total_full_range(self) -> int:
        return sum(r.full_range for r in self.rounds)

    @property
    def total_support(self) -> int:
        return sum(r.support for r in self.rounds)

    def by_label(self) -> dict[str, int]:
        return {r.label: r.full_range for r in self.rounds}


@dataclass(frozen=True)
class RoundReachTable:
    """Per-team probability of reaching each named stage (last column: champion)."""

    labels: tuple[str, ...]
    values: np.ndarray  # shape (num_teams, len(labels))


@dataclass(frozen=True)
class TournamentResult:
    schedule: ScheduleDescriptor
    win: np.ndarray
    reach: RoundReachTable
    combos: CombinationCounts
    advance: AdvancePairMatrix
    rounds: tuple[tuple[Block, ...], ...]  # block outputs after each round


def schedule_groups(desc: ScheduleDescriptor) -> tuple[tuple[int, ...], ...]:
    """Global team indices per bracket position: position g owns k*g .. k*g+k-1."""
    k = desc.group_size
    return tuple(tuple(range(k * g, k * (g + 1))) for g in range(desc.num_groups))


def _block_teams(block: Block, k: int) -> int:
    return (block.hi - block.lo + 1) * k


def _round_counts(
    label: str, ops: Sequence[RoundOp], inputs: list[Block], outputs: list[Block], k: int
) -> RoundCount:
    full = 0
    support = 0
    collapse_sizes: list[int] = []
    for op, out in zip(ops, outputs):
        if op.kind == MERGE:
            a, b = (inputs[i] for i in op.blocks)
            ta, tb = _block_teams(a, k), _block_teams(b, k)
            full += ta * (ta - 1) * tb * (tb - 1)
            support += len(a.probs) * len(b.probs)
        elif op.kind == COLLAPSE:
            a = inputs[op.blocks[0]]
            t = _block_teams(a, k)
            collapse_sizes.append(t * (t - 1))
            support += len(a.probs)
        else:
            a, b = (inputs[i] for i in op.blocks)
            full += _block_teams(a, k) * _block_teams(b, k)
            support += len(a.probs) * len(b.probs)
    if collapse_sizes:
        # Parallel collapses run the same local index range, so the range is
        # accounted once per round, not once per block.
        full += collapse_sizes[0]
    return RoundCount(label=label, full_range=full, support=support)


def compute_tournament(
    matrices: MatchMatrices,
    desc: ScheduleDescriptor,
    allow_large: bool = False,
) -> TournamentResult:
    """Exact per-team win and round-reach probabilities for one tournament."""
    check_schedule(desc)
    k = desc.group_size
    n = desc.num_teams
    if matrices.num_teams != n:
        raise InvalidParameterError(
            f"matrices cover {matrices.num_teams} teams but the schedule needs {n}"
        )
    groups = schedule_groups(desc)
    advance = group_probabilities(matrices, groups, allow_large=allow_large)

    table = build_ranking_table(k, allow_large=allow_large)
    group_steps = desc.num_groups * (num_sequences(k) + table.total_entries)
    counts = [RoundCount(label="groups", full_range=group_steps, support=group_steps)]

    blocks: list[Block] = []
    for g, group in enumerate(groups):
        probs = {}
        for i in group:
            for j in group:
                if i != j and advance.matrix[i, j] > 0.0:
                    probs[(i, j)] = float(advance.matrix[i, j])
        blocks.append(PairDistribution(lo=g, hi=g, probs=probs))

    labels = desc.round_labels()
    reach_cols = [advance.matrix.sum(axis=0) + advance.matrix.sum(axis=1)]
    rounds_out: list[tuple[Block, ...]] = []
    knockout = matrices.knockout
    for r, ops in enumerate(desc.rounds):
        outputs: list[Block] = []
        for op in ops:
            if op.kind == MERGE:
                a, b = (blocks[i] for i in op.blocks)
                outputs.append(merge(a, b, op.pairing, knockout))
            elif op.kind == COLLAPSE:
                outputs.append(collapse(blocks[op.blocks[0]], knockout))
            else:
                a, b = (blocks[i] for i in op.blocks)
                outputs.append(merge_singles(a, b, knockout))
        counts.append(_round_counts(labels[r], ops, blocks, outputs, k))
        reach = np.zeros(n)
        for out in outputs:
            reach += out.marginals(n)
        reach_cols.append(reach)
        rounds_out.append(tuple(outputs))
        blocks = outputs

    final = blocks[0]
    assert isinstance(final, SingleDistribution)
    win = final.marginals(n)
    win.setflags(write=False)
    values = np.column_stack(reach_cols)
    values.setflags(write=False)
    return TournamentResult(
        schedule=desc,
        win=win,
        reach=RoundReachTable(labels=labels, values=values),
        combos=CombinationCounts(rounds=tuple(counts)),
        advance=advance,
        rounds=tuple(rounds_out),
    )


# ---------------------------------------------------------------------------
# Most likely full bracket (max-product with back-pointers)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BracketMatch:
    stage: str
    team_a: int
    team_b: int
    winner: int


@dataclass(frozen=True)
class MostLikelyBracket:
    """The jointly most probable advancement: group pairs, every knockout
    match with its winner, and the champion, with the joint probability."""

    probability: float
    group_pairs: tuple[tuple[int, int], ...]  # by bracket position
    matches: tuple[BracketMatch, ...]
    champion: int


def most_likely_bracket(
    matrices: MatchMatrices,
    desc: ScheduleDescriptor,
    allow_large: bool = False,
) -> MostLikelyBracket:
    """Max-product analogue of compute_tournament.

    Every summation over histories becomes a max with a back-pointer; exact
    value ties are broken toward the lexicographically smallest key tuple by
    scanning candidates in sorted order and replacing only on strict improvement.
    """
    check_schedule(desc)
    k = desc.group_size
    groups = schedule_groups(desc)
    advance = group_probabilities(matrices, groups, allow_large=allow_large)
    knockout = matrices.knockout

    # Per block: {key: (value, op_kind, back)} where back names input keys.
    states: list[dict] = []
    for g, group in enumerate(groups):
        cand = {}
        for i in group:
            for j in group:
                if i != j and advance.matrix[i, j] > 0.0:
                    cand[(i, j)] = (float(advance.matrix[i, j]), "group", None)
        states.append(cand)

    labels = desc.round_labels()
    history: list[list[dict]] = [states]
    ops_by_round: list[Sequence[RoundOp]] = []
    for r, ops in enumerate(desc.rounds):
        next_states: list[dict] = []
        for op in ops:
            if op.kind == MERGE:
                a, b = (states[i] for i in op.blocks)
                best: dict = {}
                for ka in sorted(a):
                    va = a[ka][0]
                    a1, a2 = ka
                    for kb in sorted(b):
                        vb = b[kb][0]
                        b1, b2 = kb
                        if op.pairing == CROSS:
                            m1, m2 = (a1, b2), (a2, b1)
                        else:
                            m1, m2 = (a1, b1), (a2, b2)
                        base = va * vb
                        q1 = float(knockout[m1[0], m1[1]])
                        q2 = float(knockout[m2[0], m2[1]])
                        for w1, p1 in ((m1[0], q1), (m1[1], 1.0 - q1)):
                            for w2, p2 in ((m2[0], q2), (m2[1], 1.0 - q2)):
                                val = base * p1 * p2
                                key = (w1, w2)
                                cur = best.get(key)
                                if cur is None or val > cur[0]:
                                    best[key] = (val, "merge", (ka, kb, op.pairing))
                next_states.append(best)
            elif op.kind == COLLAPSE:
                a = states[op.blocks[0]]
                best = {}
                for ka in sorted(a):
                    va = a[ka][0]
                    i, j = ka
                    q = knockout[i, j]
                    for w, p in ((i, q), (j, 1.0 - q)):
                        val = va * p
                        cur = best.get(w)
                        if cur is None or val > cur[0]:
                            best[w] = (val, "collapse", (ka,))
                next_states.append(best)
            else:
                a, b = (states[i] for i in op.blocks)
                best = {}
                for ia in sorted(a):
                    va = a[ia][0]
                    for ib in sorted(b):
                        vb = b[ib][0]
                        q = knockout[ia, ib]
                        for w, p in ((ia, q), (ib, 1.0 - q)):
                            val = va * vb * p
                            cur = best.get(w)
                            if cur is None or val > cur[0]:
                                best[w] = (val, "merge_singles", (ia, ib))
                next_states.append(best)
        states = next_states
        history.append(states)
        ops_by_round.append(ops)

    final = states[0]
    champion = min(final, key=lambda c: (-final[c][0], c))
    probability = final[champion][0]

    group_pairs: dict[int, tuple[int, int]] = {}
    matches: list[BracketMatch] = []

    def backtrack(round_idx: int, block_idx: int, key) -> None:
        """round_idx = -1 addresses the group blocks."""
        state = history[round_idx + 1][block_idx]
        _, kind, back = state[key]
        if kind == "group":
            group_pairs[block_idx] = key
            return
        # Outputs are appended in op order, so the producing op shares the index.
        op = ops_by_round[round_idx][block_idx]
        stage = labels[round_idx]
        if kind == "merge":
            ka, kb, pairing = back
            a1, a2 = ka
            b1, b2 = kb
            if pairing == CROSS:
                m1, m2 = (a1, b2), (a2, b1)
            else:
                m1, m2 = (a1, b1), (a2, b2)
            w1, w2 = key
            matches.append(BracketMatch(stage, m1[0], m1[1], w1))
            matches.append(BracketMatch(stage, m2[0], m2[1], w2))
            backtrack(round_idx - 1, op.blocks[0], ka)
            backtrack(round_idx - 1, op.blocks[1], kb)
        elif kind == "collapse":
            (ka,) = back
            matches.append(BracketMatch(stage, ka[0], ka[1], key))
            backtrack(round_idx - 1, op.blocks[0], ka)
        else:
            ia, ib = back
            matches.append(BracketMatch(stage, ia, ib, key))
            backtrack(round_idx - 1, op.blocks[0], ia)
            backtrack(round_idx - 1, op.blocks[1], ib)

    backtrack(len(desc.rounds) - 1, 0, champion)
    matches.reverse()
    pairs = tuple(group_pairs[g] for g in sorted(group_pairs))
    return MostLikelyBracket(
        probability=probability,
        group_pairs=pairs,
        matches=tuple(matches),
        champion=champion,
    )
