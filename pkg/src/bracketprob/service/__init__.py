"""HTTP API over the exact tournament computation."""

from .app import create_app
from .schemas import (
    CombosInfo,
    ComputeRequest,
    ComputeResponse,
    HealthResponse,
    OverridePayload,
    ScheduleInfo,
    TeamProbabilities,
    TournamentInfo,
)

__all__ = [
    "CombosInfo",
    "ComputeRequest",
    "ComputeResponse",
    "HealthResponse",
    "OverridePayload",
    "ScheduleInfo",
    "TeamProbabilities",
    "TournamentInfo",
    "create_app",
]
