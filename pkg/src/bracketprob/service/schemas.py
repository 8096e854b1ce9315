"""Request and response bodies for the HTTP API."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class OverridePayload(BaseModel):
    """One pinned match outcome, teams referenced by name."""

    model_config = ConfigDict(extra="forbid")

    stage: Literal["group", "knockout"]
    team_a: str
    team_b: str
    result: Literal["a_wins", "draw", "b_wins"]


class ComputeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    overrides: list[OverridePayload] = Field(default_factory=list)


class TeamInfo(BaseModel):
    index: int
    team: str
    group: str
    rating: float


class RoundOpInfo(BaseModel):
    """One bracket operation with the group-position spans it connects."""

    kind: Literal["merge", "collapse", "merge_singles"]
    pairing: Optional[Literal["cross", "straight"]] = None
    inputs: list[tuple[int, int]]
    output: tuple[int, int]


class ScheduleInfo(BaseModel):
    name: str
    num_groups: int
    group_size: int
    bracket_group_order: list[str]
    round_labels: list[str]
    rounds: list[list[RoundOpInfo]]


class TournamentInfo(BaseModel):
    name: str
    sigma: float
    knockout_rule: str
    schedule: ScheduleInfo
    groups: dict[str, list[str]]
    teams: list[TeamInfo]
    overrides: list[OverridePayload]


class TeamProbabilities(BaseModel):
    index: int
    team: str
    group: str
    win: float
    reach: dict[str, float]
    delta_win: float
    delta_reach: dict[str, float]


class RoundCombos(BaseModel):
    label: str
    full_range: int
    support: int


class CombosInfo(BaseModel):
    rounds: list[RoundCombos]
    total_full_range: int
    total_support: int


class ComputeResponse(BaseModel):
    overrides: list[OverridePayload]
    labels: list[str]
    teams: list[TeamProbabilities]
    combos: CombosInfo


class HealthResponse(BaseModel):
    status: Literal["ok"]
    config: str
