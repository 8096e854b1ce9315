"""Config, ratings, odds, and report input/output.

A tournament config is one JSON document naming a ratings CSV, a schedule
(built-in name or descriptor file), the group assignments, and model
parameters.  Team indices are derived from the schedule's bracket order:
``index = group_size * bracket_position + position_within_group``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataError, InvalidParameterError
from .match_model import KNOCKOUT_RULES, MatchMatrices, OutcomeOverride, build_matrices
from .schedule import ScheduleDescriptor, load_schedule

# Rating-scale presets.  The fifa-* entries are the scales the rating systems
# themselves use; match-level predictions sharpen at roughly 0.6x those, hence
# the tightened defaults.
SIGMA_PRESETS = {
    "men": 360.0,
    "women": 240.0,
    "fifa-men": 600.0,
    "fifa-women": 400.0,
}

BUNDLED_CONFIGS = {
    "men-2022": "men_2022.json",
    "women-2023": "women_2023.json",
}

# Threshold under which a non-zero probability renders as "*" in tables:
# anything below 0.00005 percent would round to a row of zeros.
TINY_PROBABILITY = 5e-7
TINY_MARK = "*"


@dataclass(frozen=True)
class TournamentConfig:
    """A fully resolved tournament: teams indexed, schedule validated."""

    name: str
    sigma: float
    knockout_rule: str
    schedule: ScheduleDescriptor
    groups: Mapping[str, tuple[str, ...]]  # label -> team names in pot order
    team_names: tuple[str, ...]  # by global index
    ratings: np.ndarray  # by global index
    overrides: tuple[OutcomeOverride, ...] = ()
    team_index: Mapping[str, int] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "team_index", {name: i for i, name in enumerate(self.team_names)}
        )

    def group_label_of(self, index: int) -> str:
        pos = index // self.schedule.group_size
        return self.schedule.bracket_group_order[pos]

    def build_matrices(self) -> MatchMatrices:
        """Match tables for this config with its own overrides applied."""
        from .match_model import apply_overrides

        matrices = build_matrices(self.ratings, self.sigma, self.knockout_rule)
        if self.overrides:
            matrices = apply_overrides(matrices, self.overrides)
        return matrices


def load_ratings_csv(path: Path) -> dict[str, float]:
    """Parse a ``team,points`` CSV preserving row order."""
    violations: list[str] = []
    ratings: dict[str, float] = {}
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"cannot read ratings file {path}: {exc}") from None
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["team", "points"]:
        raise DataError(f"{path}: first line must be the header 'team,points'")
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 2:
            violations.append(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            continue
        name = row[0].strip()
        if not name:
            violations.append(f"{path}:{lineno}: empty team name")
            continue
        if name in ratings:
            violations.append(f"{path}:{lineno}: duplicate team {name!r}")
            continue
        try:
            points = float(row[1])
        except ValueError:
            violations.append(f"{path}:{lineno}: points {row[1]!r} is not a number")
            continue
        if not math.isfinite(points):
            violations.append(f"{path}:{lineno}: points must be finite")
            continue
        ratings[name] = points
    if violations:
        raise DataError(f"ratings file {path} is invalid", violations)
    return ratings


def parse_overrides_text(
    text: str, team_index: Mapping[str, int], source: str = "<overrides>"
) -> tuple[OutcomeOverride, ...]:
    """Parse override lines ``stage,team_a,team_b,result`` into typed overrides."""
    violations: list[str] = []
    out: list[OutcomeOverride] = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if [c.strip() for c in row] == ["stage", "team_a", "team_b", "result"]:
            continue  # tolerate a header line
        if len(row) != 4:
            violations.append(f"{source}:{lineno}: expected 4 fields, got {len(row)}")
            continue
        stage, team_a, team_b, result = (c.strip() for c in row)
        missing = [t for t in (team_a, team_b) if t not in team_index]
        if missing:
            violations.append(
                f"{source}:{lineno}: unknown team(s) {', '.join(repr(m) for m in missing)}"
            )
            continue
        try:
            out.append(
                OutcomeOverride(
                    stage=stage,
                    team_a=team_index[team_a],
                    team_b=team_index[team_b],
                    result=result,
                )
            )
        except InvalidParameterError as exc:
            violations.append(f"{source}:{lineno}: {exc}")
    if violations:
        raise DataError(f"overrides {source} are invalid", violations)
    return tuple(out)


def merge_overrides(
    base: Iterable[OutcomeOverride], extra: Iterable[OutcomeOverride]
) -> tuple[OutcomeOverride, ...]:
    """Combine override sets; an entry in ``extra`` replaces a base entry
    targeting the same pair and stage."""
    merged: dict[tuple, OutcomeOverride] = {}
    for ov in base:
        merged[(ov.stage, ov.pair)] = ov
    for ov in extra:
        merged[(ov.stage, ov.pair)] = ov
    return tuple(merged.values())


def _assemble_config(
    name: str,
    ratings_map: Mapping[str, float],
    sigma: float,
    knockout_rule: str,
    schedule: ScheduleDescriptor,
    groups: Mapping[str, Sequence[str]],
    overrides_text: str | None,
    overrides_source: str,
) -> TournamentConfig:
    violations: list[str] = []
    if not (isinstance(sigma, (int, float)) and math.isfinite(sigma) and sigma > 0):
        violations.append(f"sigma must be a positive number, got {sigma!r}")
    if knockout_rule not in KNOCKOUT_RULES:
        violations.append(
            f"knockout_rule must be one of {KNOCKOUT_RULES}, got {knockout_rule!r}"
        )
    k = schedule.group_size
    expected = set(schedule.bracket_group_order)
    got = set(groups)
    if expected != got:
        violations.append(
            f"group labels {sorted(got)} do not match the schedule's "
            f"{sorted(expected)}"
        )
    seen: set[str] = set()
    for label, names in groups.items():
        if len(names) != k:
            violations.append(
                f"group {label} has {len(names)} teams, schedule needs {k}"
            )
        for team in names:
            if team in seen:
                violations.append(f"team {team!r} appears in more than one group")
            seen.add(team)
            if team not in ratings_map:
                violations.append(f"group {label}: team {team!r} has no rating")
    if violations:
        raise DataError(f"config {name!r} is invalid", violations)

    team_names = tuple(
        team for label in schedule.bracket_group_order for team in groups[label]
    )
    ratings = np.array([ratings_map[t] for t in team_names])
    ratings.setflags(write=False)
    config = TournamentConfig(
        name=name,
        sigma=float(sigma),
        knockout_rule=knockout_rule,
        schedule=schedule,
        groups={label: tuple(names) for label, names in groups.items()},
        team_names=team_names,
        ratings=ratings,
    )
    overrides: tuple[OutcomeOverride, ...] = ()
    if overrides_text is not None:
        overrides = parse_overrides_text(
            overrides_text, config.team_index, overrides_source
        )
    object.__setattr__(config, "overrides", overrides)
    return config


def load_config(
    path: str | Path,
    sigma: float | None = None,
    schedule: str | None = None,
    overrides_path: str | Path | None = None,
) -> TournamentConfig:
    """Load a config document; optional arguments replace its sigma, schedule,
    or overrides file (the CLI's --sigma/--schedule/--overrides flags)."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise DataError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"config {path} is not valid JSON: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise DataError(f"config {path} must be a JSON object")
    missing = [key for key in ("name", "ratings", "sigma", "schedule", "groups") if key not in doc]
    if missing:
        raise DataError(
            f"config {path} is missing required fields", [f"missing {m!r}" for m in missing]
        )
    ratings_map = load_ratings_csv((path.parent / doc["ratings"]).resolve())
    schedule_ref = schedule if schedule is not None else doc["schedule"]
    desc = load_schedule(str(schedule_ref))

    overrides_text: str | None = None
    overrides_source = "<none>"
    ov_ref = overrides_path if overrides_path is not None else doc.get("overrides")
    if ov_ref is not None:
        ov_path = Path(ov_ref)
        if not ov_path.is_absolute() and overrides_path is None:
            ov_path = (path.parent / ov_path).resolve()
        try:
            overrides_text = ov_path.read_text()
        except OSError as exc:
            raise DataError(f"cannot read overrides file {ov_path}: {exc}") from None
        overrides_source = str(ov_path)

    groups = doc["groups"]
    if not isinstance(groups, dict):
        raise DataError(f"config {path}: 'groups' must be an object")
    return _assemble_config(
        name=str(doc["name"]),
        ratings_map=ratings_map,
        sigma=float(sigma) if sigma is not None else doc["sigma"],
        knockout_rule=doc.get("knockout_rule", "bradley_terry"),
        schedule=desc,
        groups=groups,
        overrides_text=overrides_text,
        overrides_source=overrides_source,
    )


def bundled_config_path(name: str) -> Path:
    """Filesystem path of a shipped config ("men-2022" or "women-2023")."""
    if name not in BUNDLED_CONFIGS:
        raise DataError(
            f"unknown bundled config {name!r}; available: {', '.join(sorted(BUNDLED_CONFIGS))}"
        )
    return Path(str(resources.files(__package__).joinpath("data", BUNDLED_CONFIGS[name])))


def bundled_config(name: str, **kwargs) -> TournamentConfig:
    return load_config(bundled_config_path(name), **kwargs)


def resolve_config(ref: str, **kwargs) -> TournamentConfig:
    """Accept either a bundled config name or a path to a config file."""
    if ref in BUNDLED_CONFIGS:
        return bundled_config(ref, **kwargs)
    return load_config(ref, **kwargs)


# ---------------------------------------------------------------------------
# Odds
# ---------------------------------------------------------------------------


def load_odds_csv(path: Path) -> dict[str, float]:
    """Parse a ``team,decimal_odds`` CSV."""
    violations: list[str] = []
    odds: dict[str, float] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataError(f"cannot read odds file {path}: {exc}") from None
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["team", "decimal_odds"]:
        raise DataError(f"{path}: first line must be the header 'team,decimal_odds'")
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 2:
            violations.append(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            continue
        name = row[0].strip()
        try:
            value = float(row[1])
        except ValueError:
            violations.append(f"{path}:{lineno}: odds {row[1]!r} is not a number")
            continue
        if not (math.isfinite(value) and value >= 1.0):
            violations.append(f"{path}:{lineno}: decimal odds must be >= 1")
            continue
        if name in odds:
            violations.append(f"{path}:{lineno}: duplicate team {name!r}")
            continue
        odds[name] = value
    if violations:
        raise DataError(f"odds file {path} is invalid", violations)
    return odds


def odds_probabilities(
    odds: Mapping[str, float], team_names: Sequence[str]
) -> np.ndarray:
    """Implied win probabilities: inverse odds, overround removed by scaling."""
    missing = [t for t in team_names if t not in odds]
    if missing:
        raise DataError(
            "odds are missing teams", [f"no odds for {t!r}" for t in missing]
        )
    implied = np.array([1.0 / odds[t] for t in team_names])
    total = implied.sum()
    if not (0.9 <= total <= 1.3):
        raise DataError(
            f"implied win probabilities sum to {total:.4f}; expected the "
            "bookmaker overround to land in [0.9, 1.3]"
        )
    return implied / total


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def format_percent(p: float) -> str:
    """Probability as a percent string; tiny-but-nonzero renders as '*'."""
    if p == 0.0:
        return "0"
    if 0.0 < p < TINY_PROBABILITY:
        return TINY_MARK
    text = f"{100.0 * p:.4f}".rstrip("0").rstrip(".")
    return text or "0"


def render_table(
    config: TournamentConfig,
    labels: Sequence[str],
    values: np.ndarray,
    title: str | None = None,
) -> str:
    """Fixed-width per-team table, one percent column per stage, sorted by the
    last (champion) column."""
    order = sorted(
        range(len(config.team_names)), key=lambda i: (-values[i, -1], i)
    )
    name_width = max(len("team"), max(len(n) for n in config.team_names))
    col_width = max(8, max(len(label) for label in labels) + 2)
    lines = []
    if title:
        lines.append(title)
    header = "team".ljust(name_width) + "".join(
        label.rjust(col_width) for label in labels
    )
    lines.append(header)
    for i in order:
        row = config.team_names[i].ljust(name_width)
        row += "".join(
            format_percent(float(values[i, c])).rjust(col_width)
            for c in range(len(labels))
        )
        lines.append(row)
    return "\n".join(lines) + "\n"


def render_json_lines(
    config: TournamentConfig,
    labels: Sequence[str],
    values: np.ndarray,
    meta: Mapping | None = None,
) -> str:
    """Machine-readable report: a meta line, then one JSON object per team.

    Floats keep full precision (shortest round-trip repr), so parsing the
    output reproduces the exact doubles.
    """
    head = {
        "type": "meta",
        "config": config.name,
        "schedule": config.schedule.name,
        "sigma": config.sigma,
        "knockout_rule": config.knockout_rule,
        "labels": list(labels),
    }
    if meta:
        head.update(meta)
    lines = [json.dumps(head, sort_keys=True)]
    for i, name in enumerate(config.team_names):
        lines.append(
            json.dumps(
                {
                    "type": "team",
                    "index": i,
                    "team": name,
                    "group": config.group_label_of(i),
                    "reach": {
                        label: float(values[i, c]) for c, label in enumerate(labels)
                    },
                    "win": float(values[i, -1]),
                },
                sort_keys=True,
            )
        )
    return "\n".join(lines) + "\n"


def parse_json_lines(text: str) -> tuple[dict, list[dict]]:
    """Inverse of render_json_lines: (meta, team rows)."""
    meta: dict = {}
    teams: list[dict] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        if obj.get("type") == "meta":
            meta = obj
        else:
            teams.append(obj)
    return meta, teams


def combos_dict(combos) -> dict:
    """JSON-friendly view of CombinationCounts."""
    return {
        "rounds": [
            {"label": r.label, "full_range": r.full_range, "support": r.support}
            for r in combos.rounds
        ],
        "total_full_range": combos.total_full_range,
        "total_support": combos.total_support,
    }
