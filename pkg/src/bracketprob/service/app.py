"""FastAPI application exposing exact tournament computation.

The service is stateless: every response is a pure function of the loaded
config and the request body.  Clients hold their own pin sets and send the
full list on every compute call; a small LRU cache avoids recomputing
identical override sets.
"""

from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, RedirectResponse

from ..bracket import TournamentResult, compute_tournament
from ..data_io import TournamentConfig, merge_overrides
from ..errors import BracketProbError, InvalidParameterError
from ..match_model import (
    RESULT_A_WINS,
    RESULT_B_WINS,
    OutcomeOverride,
    apply_overrides,
    build_matrices,
)
from ..schedule import ScheduleDescriptor
from .schemas import (
    CombosInfo,
    ComputeRequest,
    ComputeResponse,
    HealthResponse,
    OverridePayload,
    RoundCombos,
    RoundOpInfo,
    ScheduleInfo,
    TeamInfo,
    TeamProbabilities,
    TournamentInfo,
)

UI_DIR_ENV = "BRACKETPROB_UI"

_FLIP = {RESULT_A_WINS: RESULT_B_WINS, RESULT_B_WINS: RESULT_A_WINS}


def _schedule_info(desc: ScheduleDescriptor) -> ScheduleInfo:
    """Descriptor with every op annotated by the group-position spans it joins."""
    spans: list[tuple[int, int]] = [(g, g) for g in range(desc.num_groups)]
    rounds: list[list[RoundOpInfo]] = []
    for ops in desc.rounds:
        out_spans: list[tuple[int, int]] = []
        infos: list[RoundOpInfo] = []
        for op in ops:
            inputs = [spans[i] for i in op.blocks]
            output = (min(s[0] for s in inputs), max(s[1] for s in inputs))
            out_spans.append(output)
            infos.append(
                RoundOpInfo(
                    kind=op.kind, pairing=op.pairing, inputs=inputs, output=output
                )
            )
        spans = out_spans
        rounds.append(infos)
    return ScheduleInfo(
        name=desc.name,
        num_groups=desc.num_groups,
        group_size=desc.group_size,
        bracket_group_order=list(desc.bracket_group_order),
        round_labels=list(desc.round_labels()),
        rounds=rounds,
    )


def _override_payload(config: TournamentConfig, ov: OutcomeOverride) -> OverridePayload:
    return OverridePayload(
        stage=ov.stage,
        team_a=config.team_names[ov.team_a],
        team_b=config.team_names[ov.team_b],
        result=ov.result,
    )


def _canonical(ov: OutcomeOverride) -> tuple:
    """Orientation-independent identity of an override, for caching."""
    if ov.team_a <= ov.team_b:
        return (ov.stage, ov.team_a, ov.team_b, ov.result)
    return (ov.stage, ov.team_b, ov.team_a, _FLIP.get(ov.result, ov.result))


def _validation_error(detail) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": detail})


def create_app(config: TournamentConfig, ui_dir: str | Path | None = None) -> FastAPI:
    """Build the API around one loaded tournament config.

    The no-request-overrides baseline is computed eagerly so that delta
    columns and the first interactive response are instant.
    """
    app = FastAPI(title="bracketprob", version="0.1.0")

    labels = list(config.schedule.round_labels())
    baseline = compute_tournament(config.build_matrices(), config.schedule)

    @lru_cache(maxsize=256)
    def compute_for(merged: tuple[OutcomeOverride, ...]) -> TournamentResult:
        # `merged` already folds the config's own overrides in (request wins
        # per match), so start from clean matrices.
        matrices = build_matrices(config.ratings, config.sigma, config.knockout_rule)
        if merged:
            matrices = apply_overrides(matrices, merged)
        return compute_tournament(matrices, config.schedule)

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return _validation_error(exc.errors())

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", config=config.name)

    @app.get("/tournament", response_model=TournamentInfo)
    def tournament() -> TournamentInfo:
        teams = [
            TeamInfo(
                index=i,
                team=name,
                group=config.group_label_of(i),
                rating=float(config.ratings[i]),
            )
            for i, name in enumerate(config.team_names)
        ]
        return TournamentInfo(
            name=config.name,
            sigma=config.sigma,
            knockout_rule=config.knockout_rule,
            schedule=_schedule_info(config.schedule),
            groups={label: list(names) for label, names in config.groups.items()},
            teams=teams,
            overrides=[_override_payload(config, ov) for ov in config.overrides],
        )

    @app.post("/compute", response_model=ComputeResponse)
    def compute(body: ComputeRequest):
        problems: list[str] = []
        request_overrides: list[OutcomeOverride] = []
        for idx, item in enumerate(body.overrides):
            unknown = [
                t for t in (item.team_a, item.team_b) if t not in config.team_index
            ]
            if unknown:
                problems.append(
                    f"overrides[{idx}]: unknown team(s) "
                    + ", ".join(repr(t) for t in unknown)
                )
                continue
            try:
                request_overrides.append(
                    OutcomeOverride(
                        stage=item.stage,
                        team_a=config.team_index[item.team_a],
                        team_b=config.team_index[item.team_b],
                        result=item.result,
                    )
                )
            except InvalidParameterError as exc:
                problems.append(f"overrides[{idx}]: {exc}")
        if problems:
            return _validation_error(problems)

        seen: dict[tuple, int] = {}
        for idx, ov in enumerate(request_overrides):
            key = (ov.stage, ov.pair)
            if key in seen:
                return _validation_error(
                    [
                        f"overrides[{idx}] pins the same {ov.stage} match as "
                        f"overrides[{seen[key]}]"
                    ]
                )
            seen[key] = idx

        merged = merge_overrides(config.overrides, request_overrides)
        merged = tuple(sorted(merged, key=_canonical))
        try:
            result = compute_for(merged)
        except BracketProbError as exc:
            return JSONResponse(status_code=500, content={"detail": str(exc)})

        values = result.reach.values
        base = baseline.reach.values
        teams = [
            TeamProbabilities(
                index=i,
                team=name,
                group=config.group_label_of(i),
                win=float(result.win[i]),
                reach={label: float(values[i, c]) for c, label in enumerate(labels)},
                delta_win=float(result.win[i] - baseline.win[i]),
                delta_reach={
                    label: float(values[i, c] - base[i, c])
                    for c, label in enumerate(labels)
                },
            )
            for i, name in enumerate(config.team_names)
        ]
        combos = CombosInfo(
            rounds=[
                RoundCombos(label=r.label, full_range=r.full_range, support=r.support)
                for r in result.combos.rounds
            ],
            total_full_range=result.combos.total_full_range,
            total_support=result.combos.total_support,
        )
        return ComputeResponse(
            overrides=[_override_payload(config, ov) for ov in request_overrides],
            labels=labels,
            teams=teams,
            combos=combos,
        )

    ui_path = _resolve_ui_dir(ui_dir)
    if ui_path is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_path, html=True), name="ui")

        @app.get("/", include_in_schema=False)
        def root() -> RedirectResponse:
            return RedirectResponse(url="/ui/")

    return app


def _resolve_ui_dir(ui_dir: str | Path | None) -> Path | None:
    candidates = []
    if ui_dir is not None:
        candidates.append(Path(ui_dir))
    elif os.environ.get(UI_DIR_ENV):
        candidates.append(Path(os.environ[UI_DIR_ENV]))
    else:
        candidates.append(Path("frontend") / "dist")
    for path in candidates:
        if path.is_dir():
            return path
    return None
