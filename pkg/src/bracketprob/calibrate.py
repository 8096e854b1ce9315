"""Fit the rating scale to market odds.

Grid search over sigma: for each candidate, compute exact championship
probabilities and score them against odds-implied probabilities by sum of
squared differences.  The grid keeps the search reproducible and transparent;
the objective is smooth enough that a coarse grid plus a refined pass around
the minimum is standard usage.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bracket import compute_tournament
from .data_io import TournamentConfig
from .errors import InvalidParameterError


@dataclass(frozen=True)
class CalibrationResult:
    best_sigma: float
    objective: tuple[tuple[float, float], ...]  # (sigma, sum of squared errors)

    def as_dict(self) -> dict:
        return {
            "best_sigma": self.best_sigma,
            "objective": [{"sigma": s, "sse": v} for s, v in self.objective],
        }


def calibrate_sigma(
    config: TournamentConfig,
    target_probs: np.ndarray,
    sigma_grid: Sequence[float],
) -> CalibrationResult:
    """Pick the sigma whose exact win probabilities best match the targets.

    ``target_probs`` is indexed like the config's teams and should sum to ~1.
    Ties in the objective resolve to the smaller sigma.
    """
    grid = sorted(set(float(s) for s in sigma_grid))
    if not grid:
        raise InvalidParameterError("sigma grid is empty")
    if any(s <= 0 for s in grid):
        raise InvalidParameterError("sigma grid values must be > 0")
    target = np.asarray(target_probs, dtype=float)
    if target.shape != (len(config.team_names),):
        raise InvalidParameterError(
            f"target probabilities must have shape ({len(config.team_names)},)"
        )
    rows = []
    for sigma in grid:
        candidate = dataclasses.replace(config, sigma=sigma)
        win = compute_tournament(candidate.build_matrices(), config.schedule).win
        rows.append((sigma, float(((win - target) ** 2).sum())))
    best_sigma = min(rows, key=lambda r: (r[1], r[0]))[0]
    return CalibrationResult(best_sigma=best_sigma, objective=tuple(rows))
