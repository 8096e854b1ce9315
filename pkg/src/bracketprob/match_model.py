"""Single-match outcome model.

Team strength follows a logistic curve on rating difference (base 10, scale
``sigma``).  Group matches allow draws via a Davidson-style extension whose
draw mass is the geometric mean of the two strengths; knockout matches are
win/loss only, either straight Bradley-Terry or the group model with the draw
mass split evenly between the two sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import InvalidParameterError, OverrideConflictError

KNOCKOUT_RULES = ("bradley_terry", "draw_split")

GROUP_STAGE = "group"
KNOCKOUT_STAGE = "knockout"

RESULT_A_WINS = "a_wins"
RESULT_DRAW = "draw"
RESULT_B_WINS = "b_wins"
RESULTS = (RESULT_A_WINS, RESULT_DRAW, RESULT_B_WINS)


class OutcomeDistribution(NamedTuple):
    """Probabilities of a group match from the first team's perspective."""

    p_loss: float
    p_draw: float
    p_win: float


def team_strength(rho_i: float, rho_j: float, sigma: float) -> float:
    """Probability-scale strength of team i against team j.

    Logistic in the rating difference: 1 / (1 + 10 ** ((rho_j - rho_i) / sigma)).
    Symmetric: strength(i, j) + strength(j, i) == 1.
    """
    for name, value in (("rho_i", rho_i), ("rho_j", rho_j)):
        if not math.isfinite(value):
            raise InvalidParameterError(f"{name} must be finite, got {value!r}")
    if not (math.isfinite(sigma) and sigma > 0):
        raise InvalidParameterError(f"sigma must be finite and > 0, got {sigma!r}")
    return 1.0 / (1.0 + 10.0 ** ((rho_j - rho_i) / sigma))


def group_distribution(theta_i: float, theta_j: float) -> OutcomeDistribution:
    """Win/draw/loss distribution for a group match between strengths theta_i, theta_j.

    The draw weight is the geometric mean of the two strengths, so evenly
    matched sides draw most often and the three probabilities always sum to 1.
    """
    _check_strengths(theta_i, theta_j)
    root = math.sqrt(theta_i * theta_j)
    denom = theta_i + root + theta_j
    return OutcomeDistribution(theta_j / denom, root / denom, theta_i / denom)


def knockout_distribution(theta_i: float, theta_j: float) -> float:
    """Win probability of the first team in a draw-free (knockout) match."""
    _check_strengths(theta_i, theta_j)
    return theta_i / (theta_i + theta_j)


def split_draw(dist: OutcomeDistribution) -> float:
    """Collapse a three-way distribution to a win probability, halving the draw."""
    return dist.p_win + dist.p_draw / 2.0


def _check_strengths(theta_i: float, theta_j: float) -> None:
    # Zero is allowed: huge rating gaps round a strength to exactly 0 or 1,
    # and the distributions below have the obvious limit there.
    for name, value in (("theta_i", theta_i), ("theta_j", theta_j)):
        if not (math.isfinite(value) and value >= 0):
            raise InvalidParameterError(f"{name} must be finite and >= 0, got {value!r}")
    if theta_i + theta_j <= 0:
        raise InvalidParameterError("at least one strength must be positive")


@dataclass(frozen=True)
class OutcomeOverride:
    """A fixed result for one fixture, replacing its model distribution.

    ``stage`` is "group" or "knockout"; ``result`` is read from team_a's side.
    Draws are meaningless in knockout play and are rejected up front.
    """

    stage: str
    team_a: int
    team_b: int
    result: str

    def __post_init__(self) -> None:
        if self.stage not in (GROUP_STAGE, KNOCKOUT_STAGE):
            raise InvalidParameterError(f"unknown stage {self.stage!r}")
        if self.result not in RESULTS:
            raise InvalidParameterError(f"unknown result {self.result!r}")
        if self.team_a == self.team_b:
            raise InvalidParameterError(
                f"override pairs a team with itself (team {self.team_a})"
            )
        if self.stage == KNOCKOUT_STAGE and self.result == RESULT_DRAW:
            raise InvalidParameterError("knockout overrides cannot be draws")

    @property
    def pair(self) -> tuple[int, int]:
        return (min(self.team_a, self.team_b), max(self.team_a, self.team_b))


@dataclass(frozen=True)
class MatchMatrices:
    """Pairwise match distributions for every ordered team pair.

    ``group[i, j]`` holds (p_loss, p_draw, p_win) from i's perspective;
    ``knockout[i, j]`` is i's win probability in a knockout meeting.
    Both arrays are read-only; ``apply_overrides`` returns modified copies.
    """

    group: np.ndarray  # shape (n, n, 3)
    knockout: np.ndarray  # shape (n, n)

    @property
    def num_teams(self) -> int:
        return self.knockout.shape[0]

    def group_outcome(self, i: int, j: int) -> OutcomeDistribution:
        return OutcomeDistribution(*self.group[i, j])


def build_matrices(
    ratings: Sequence[float],
    sigma: float,
    knockout_rule: str = "bradley_terry",
) -> MatchMatrices:
    """Build the full pairwise match tables for a list of team ratings.

    ``ratings[i]`` is the rating of the team with index i.  ``knockout_rule``
    selects how knockout win probabilities are derived: "bradley_terry" plays
    theta_i / (theta_i + theta_j), "draw_split" reuses the group distribution
    with the draw split evenly.
    """
    if knockout_rule not in KNOCKOUT_RULES:
        raise InvalidParameterError(
            f"knockout_rule must be one of {KNOCKOUT_RULES}, got {knockout_rule!r}"
        )
    n = len(ratings)
    if n < 2:
        raise InvalidParameterError("need at least two teams")
    group = np.zeros((n, n, 3))
    knockout = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            theta_i = team_strength(ratings[i], ratings[j], sigma)
            theta_j = 1.0 - theta_i
            dist = group_distribution(theta_i, theta_j)
            group[i, j] = dist
            group[j, i] = (dist.p_win, dist.p_draw, dist.p_loss)
            if knockout_rule == "bradley_terry":
                p = knockout_distribution(theta_i, theta_j)
            else:
                p = split_draw(dist)
            knockout[i, j] = p
            knockout[j, i] = 1.0 - p
    group.setflags(write=False)
    knockout.setflags(write=False)
    return MatchMatrices(group=group, knockout=knockout)


def apply_overrides(
    matrices: MatchMatrices, overrides: Iterable[OutcomeOverride]
) -> MatchMatrices:
    """Return new matrices with the given fixtures pinned to fixed results.

    At most one override may target a given unordered pair per stage; a second
    one raises OverrideConflictError regardless of whether the results agree.
    """
    group = matrices.group.copy()
    knockout = matrices.knockout.copy()
    n = matrices.num_teams
    seen: set[tuple[str, tuple[int, int]]] = set()
    for ov in overrides:
        for team in (ov.team_a, ov.team_b):
            if not (0 <= team < n):
                raise InvalidParameterError(f"team index {team} out of range 0..{n - 1}")
        key = (ov.stage, ov.pair)
        if key in seen:
            raise OverrideConflictError(
                f"conflicting overrides for teams {ov.pair} in stage {ov.stage!r}"
            )
        seen.add(key)
        a, b = ov.team_a, ov.team_b
        if ov.stage == GROUP_STAGE:
            if ov.result == RESULT_A_WINS:
                dist = (0.0, 0.0, 1.0)
            elif ov.result == RESULT_DRAW:
                dist = (0.0, 1.0, 0.0)
            else:
                dist = (1.0, 0.0, 0.0)
            group[a, b] = dist
            group[b, a] = dist[::-1]
        else:
            p = 1.0 if ov.result == RESULT_A_WINS else 0.0
            knockout[a, b] = p
            knockout[b, a] = 1.0 - p
    group.setflags(write=False)
    knockout.setflags(write=False)
    return MatchMatrices(group=group, knockout=knockout)
