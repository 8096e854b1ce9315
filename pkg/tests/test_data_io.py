"""Config files, ratings/odds CSVs, overrides, and report round-trips."""

import json

import numpy as np
import pytest

from bracketprob import DataError, OutcomeOverride
from bracketprob.data_io import (
    SIGMA_PRESETS,
    bundled_config,
    bundled_config_path,
    format_percent,
    load_config,
    load_odds_csv,
    load_ratings_csv,
    merge_overrides,
    odds_probabilities,
    parse_json_lines,
    parse_overrides_text,
    render_json_lines,
    render_table,
    resolve_config,
)


# ---------------------------------------------------------------------------
# Bundled configs
# ---------------------------------------------------------------------------


def test_bundled_men_config(men_config):
    cfg = men_config
    assert cfg.schedule.name == "wc2022"
    assert cfg.sigma == SIGMA_PRESETS["men"] == 360.0
    assert cfg.knockout_rule == "bradley_terry"
    assert len(cfg.team_names) == 32
    assert cfg.team_names[0] == "Qatar"
    assert cfg.ratings[cfg.team_index["Brazil"]] == 1841.0
    assert cfg.ratings[cfg.team_index["Ghana"]] == 1393.0
    assert cfg.group_label_of(0) == "A"
    assert cfg.group_label_of(31) == "H"
    assert not cfg.ratings.flags.writeable
    # groups hold the same teams the flat index order does
    for label, names in cfg.groups.items():
        assert len(names) == 4
        for name in names:
            assert cfg.group_label_of(cfg.team_index[name]) == label


def test_bundled_women_config(women_config):
    cfg = women_config
    assert cfg.schedule.name == "wc2023"
    assert cfg.sigma == SIGMA_PRESETS["women"] == 240.0
    assert cfg.team_index["USA"] == 8
    assert cfg.ratings[8] == 2090.0
    assert cfg.team_index["Zambia"] == 6
    assert cfg.ratings[6] == 1298.0
    # teams are stored in bracket order, so positional groups carry the
    # schedule's labels: position 1 is group C, position 2 is group E
    assert cfg.group_label_of(6) == "C"
    assert cfg.group_label_of(8) == "E"
    assert cfg.schedule.bracket_group_order == (
        "A", "C", "E", "G", "B", "D", "F", "H",
    )


def test_resolve_config_accepts_names_and_paths():
    by_name = resolve_config("men-2022")
    by_path = load_config(bundled_config_path("men-2022"))
    assert by_name.team_names == by_path.team_names
    assert np.array_equal(by_name.ratings, by_path.ratings)
    with pytest.raises(DataError, match="unknown bundled config"):
        bundled_config_path("men-1994")


def test_config_flag_replacements():
    cfg = bundled_config("men-2022", sigma=600.0, schedule="wc2023")
    assert cfg.sigma == 600.0
    assert cfg.schedule.name == "wc2023"


def test_config_own_overrides_reach_the_matrices(tmp_path):
    src = bundled_config_path("men-2022")
    doc = json.loads(src.read_text())
    ratings_csv = (src.parent / doc["ratings"]).read_text()
    (tmp_path / doc["ratings"]).write_text(ratings_csv)
    doc["overrides"] = "pins.csv"
    (tmp_path / "pins.csv").write_text("group,Qatar,Ecuador,a_wins\n")
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(doc))

    cfg = load_config(cfg_path)
    assert len(cfg.overrides) == 1
    qa, ec = cfg.team_index["Qatar"], cfg.team_index["Ecuador"]
    matrices = cfg.build_matrices()
    np.testing.assert_array_equal(matrices.group[qa, ec], [0.0, 0.0, 1.0])
    np.testing.assert_array_equal(matrices.group[ec, qa], [1.0, 0.0, 0.0])


# ---------------------------------------------------------------------------
# Ratings CSV
# ---------------------------------------------------------------------------


def test_load_ratings_csv(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("team,points\nAlpha,1500\n\nBeta,1600.5\n")
    ratings = load_ratings_csv(path)
    assert ratings == {"Alpha": 1500.0, "Beta": 1600.5}
    assert list(ratings) == ["Alpha", "Beta"]  # row order preserved


def test_ratings_csv_header_required(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("name,elo\nAlpha,1500\n")
    with pytest.raises(DataError, match="team,points"):
        load_ratings_csv(path)


def test_ratings_csv_violations_carry_line_numbers(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text(
        "team,points\n"
        "Alpha,1500\n"
        "Beta\n"
        ",1200\n"
        "Alpha,1501\n"
        "Gamma,tall\n"
        "Delta,inf\n"
    )
    with pytest.raises(DataError) as err:
        load_ratings_csv(path)
    violations = err.value.violations
    assert len(violations) == 5
    assert any(v.startswith(f"{path}:3:") and "2 fields" in v for v in violations)
    assert any(v.startswith(f"{path}:4:") and "empty team name" in v for v in violations)
    assert any(v.startswith(f"{path}:5:") and "duplicate" in v for v in violations)
    assert any(v.startswith(f"{path}:6:") and "not a number" in v for v in violations)
    assert any(v.startswith(f"{path}:7:") and "finite" in v for v in violations)


def test_ratings_csv_missing_file(tmp_path):
    with pytest.raises(DataError, match="cannot read"):
        load_ratings_csv(tmp_path / "absent.csv")


# ---------------------------------------------------------------------------
# Overrides
# ---------------------------------------------------------------------------


def test_parse_overrides_text(men_config):
    text = (
        "stage,team_a,team_b,result\n"
        "group,Qatar,Senegal,draw\n"
        "knockout,Brazil,France,a_wins\n"
    )
    overrides = parse_overrides_text(text, men_config.team_index)
    assert overrides == (
        OutcomeOverride(stage="group", team_a=0, team_b=2, result="draw"),
        OutcomeOverride(
            stage="knockout",
            team_a=men_config.team_index["Brazil"],
            team_b=men_config.team_index["France"],
            result="a_wins",
        ),
    )


def test_parse_overrides_reports_violations(men_config):
    text = (
        "group,Qatar,Narnia,a_wins\n"
        "knockout,Brazil,France,draw\n"
        "group,Qatar\n"
    )
    with pytest.raises(DataError) as err:
        parse_overrides_text(text, men_config.team_index, source="pins.csv")
    violations = err.value.violations
    assert len(violations) == 3
    assert any("pins.csv:1" in v and "Narnia" in v for v in violations)
    assert any("pins.csv:2" in v and "draw" in v for v in violations)
    assert any("pins.csv:3" in v and "4 fields" in v for v in violations)


def test_merge_overrides_is_orientation_aware():
    base = (OutcomeOverride(stage="group", team_a=0, team_b=1, result="a_wins"),)
    flipped = OutcomeOverride(stage="group", team_a=1, team_b=0, result="a_wins")
    merged = merge_overrides(base, (flipped,))
    assert merged == (flipped,)  # same pair, so the extra entry replaces
    other_stage = OutcomeOverride(stage="knockout", team_a=0, team_b=1, result="a_wins")
    assert len(merge_overrides(base, (other_stage,))) == 2


# ---------------------------------------------------------------------------
# Config documents
# ---------------------------------------------------------------------------


def test_load_config_bad_json(tmp_path):
    path = tmp_path / "c.json"
    path.write_text('{"name": "x",\n  "ratings": }\n')
    with pytest.raises(DataError, match=r"line 2 column 14"):
        load_config(path)


def test_load_config_missing_fields(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"name": "x", "sigma": 300.0}))
    with pytest.raises(DataError) as err:
        load_config(path)
    assert any("'ratings'" in v for v in err.value.violations)
    assert any("'schedule'" in v for v in err.value.violations)
    assert any("'groups'" in v for v in err.value.violations)


def test_load_config_group_validation(tmp_path):
    (tmp_path / "r.csv").write_text(
        "team,points\n" + "".join(f"T{i},1500\n" for i in range(8))
    )
    doc = {
        "name": "tiny",
        "ratings": "r.csv",
        "sigma": 300.0,
        "schedule": "wc2022",
        "groups": {"A": ["T0", "T1", "T2", "T3"], "B": ["T4", "T5", "T6", "Missing"]},
    }
    path = tmp_path / "c.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(DataError) as err:
        load_config(path)
    violations = err.value.violations
    assert any("group labels" in v for v in violations)
    assert any("'Missing' has no rating" in v for v in violations)


def test_load_config_rejects_bad_sigma(tmp_path):
    (tmp_path / "r.csv").write_text("team,points\nT0,1500\n")
    doc = {
        "name": "x",
        "ratings": "r.csv",
        "sigma": -1.0,
        "schedule": "wc2022",
        "groups": {},
    }
    path = tmp_path / "c.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(DataError) as err:
        load_config(path)
    assert any("sigma" in v for v in err.value.violations)


# ---------------------------------------------------------------------------
# Odds
# ---------------------------------------------------------------------------


def test_load_odds_csv(tmp_path):
    path = tmp_path / "o.csv"
    path.write_text("team,decimal_odds\nAlpha,4.0\nBeta,1.5\n")
    assert load_odds_csv(path) == {"Alpha": 4.0, "Beta": 1.5}


def test_odds_csv_violations(tmp_path):
    path = tmp_path / "o.csv"
    path.write_text("team,decimal_odds\nAlpha,0.8\nBeta,soon\nAlpha,2.0\n")
    with pytest.raises(DataError) as err:
        load_odds_csv(path)
    violations = err.value.violations
    assert any(">= 1" in v for v in violations)
    assert any("not a number" in v for v in violations)
    # the duplicate check fires even though the first Alpha row was invalid
    assert len(violations) == 2 or any("duplicate" in v for v in violations)


def test_odds_probabilities_normalize():
    odds = {"A": 2.0, "B": 4.0, "C": 4.0, "D": 20.0}
    probs = odds_probabilities(odds, ["A", "B", "C", "D"])
    assert probs.sum() == pytest.approx(1.0)
    assert probs[0] == pytest.approx(0.5 / 1.05)
    with pytest.raises(DataError, match="no odds for 'E'"):
        odds_probabilities(odds, ["A", "E"])


def test_odds_probabilities_overround_window():
    # implied total 0.5: far below any plausible bookmaker margin
    with pytest.raises(DataError, match="overround"):
        odds_probabilities({"A": 4.0, "B": 4.0}, ["A", "B"])


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def test_format_percent():
    assert format_percent(0.0) == "0"
    assert format_percent(1e-9) == "*"
    assert format_percent(0.03125) == "3.125"
    assert format_percent(0.5) == "50"
    assert format_percent(1.0) == "100"
    assert format_percent(0.123456) == "12.3456"


def test_render_table_sorts_by_champion(men_config):
    rng = np.random.default_rng(0)
    values = rng.random((32, 5))
    values[men_config.team_index["Ghana"], -1] = 2.0  # forced to the top
    values[men_config.team_index["Qatar"], -1] = 1e-9  # renders as "*"
    text = render_table(men_config, ["L16", "QF", "SF", "F", "W"], values)
    lines = text.strip().split("\n")
    assert lines[0].split() == ["team", "L16", "QF", "SF", "F", "W"]
    assert lines[1].startswith("Ghana")
    assert len(lines) == 33
    qatar_row = next(line for line in lines if line.startswith("Qatar"))
    assert qatar_row.split()[-1] == "*"


def test_json_lines_round_trip(men_config):
    rng = np.random.default_rng(1)
    values = rng.random((32, 5))
    labels = ["L16", "QF", "SF", "F", "W"]
    text = render_json_lines(men_config, labels, values, meta={"runs": 7})
    meta, teams = parse_json_lines(text)
    assert meta["config"] == men_config.name
    assert meta["schedule"] == "wc2022"
    assert meta["sigma"] == 360.0
    assert meta["runs"] == 7
    assert meta["labels"] == labels
    assert len(teams) == 32
    for row in teams:
        i = row["index"]
        assert row["team"] == men_config.team_names[i]
        assert row["group"] == men_config.group_label_of(i)
        # full-precision floats survive the text round trip bit for bit
        for c, label in enumerate(labels):
            assert row["reach"][label] == values[i, c]
        assert row["win"] == values[i, -1]
