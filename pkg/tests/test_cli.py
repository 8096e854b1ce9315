"""End-to-end CLI behavior: exit codes, output formats, determinism."""

import json
import subprocess
import sys

import pytest

from bracketprob import build_schedule, compute_tournament
from bracketprob.cli import main
from bracketprob.data_io import bundled_config
from bracketprob.schedule import schedule_to_json


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# Exit codes
# ---------------------------------------------------------------------------


def test_missing_config_exits_2(capsys, tmp_path):
    code, out, err = run_cli(
        capsys, "compute", "--config", str(tmp_path / "absent.json")
    )
    assert code == 2
    assert "config error" in err and not out


def test_bad_schedule_reference_exits_3(capsys):
    code, out, err = run_cli(
        capsys, "compute", "--config", "men-2022", "--schedule", "wc2050"
    )
    assert code == 3
    assert "schedule error" in err and "wc2050" in err


def test_capacity_guard_exits_4(capsys, tmp_path):
    # two groups of six: the per-group outcome enumeration (3^15) is refused
    desc = build_schedule("big6", num_groups=2, group_size=6)
    (tmp_path / "big6.json").write_text(schedule_to_json(desc))
    names = [f"T{i}" for i in range(12)]
    (tmp_path / "r.csv").write_text(
        "team,points\n" + "".join(f"{n},{1500 + i}\n" for i, n in enumerate(names))
    )
    (tmp_path / "c.json").write_text(
        json.dumps(
            {
                "name": "big6",
                "ratings": "r.csv",
                "sigma": 300.0,
                "schedule": str(tmp_path / "big6.json"),
                "groups": {"A": names[:6], "B": names[6:]},
            }
        )
    )
    code, out, err = run_cli(capsys, "compute", "--config", str(tmp_path / "c.json"))
    assert code == 4
    assert "capacity error" in err


def test_bad_overrides_exit_2(capsys, tmp_path):
    pins = tmp_path / "pins.csv"
    pins.write_text("group,Qatar,Narnia,a_wins\n")
    code, out, err = run_cli(
        capsys, "compute", "--config", "men-2022", "--overrides", str(pins)
    )
    assert code == 2
    assert "Narnia" in err


# ---------------------------------------------------------------------------
# compute
# ---------------------------------------------------------------------------


def test_compute_table_output(capsys):
    code, out, err = run_cli(capsys, "compute", "--config", "women-2023")
    assert code == 0 and not err
    lines = out.strip().split("\n")
    assert lines[1].split() == ["team", "L16", "QF", "SF", "F", "W"]
    assert any(line.startswith("combinations") for line in lines)
    assert any("23,256" in line for line in lines)


def test_compute_json_lines_reruns_identically(capsys):
    args = ("compute", "--config", "men-2022", "--format", "json-lines")
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    meta = json.loads(out1.split("\n", 1)[0])
    assert meta["schedule"] == "wc2022"
    assert meta["combos"]["total_full_range"] == 81_352
    rows = [json.loads(line) for line in out1.strip().split("\n")[1:]]
    assert len(rows) == 32
    assert sum(r["win"] for r in rows) == pytest.approx(1.0, abs=1e-9)


def test_compute_respects_overrides_flag(capsys, tmp_path):
    base_code, base_out, _ = run_cli(
        capsys, "compute", "--config", "men-2022", "--format", "json-lines"
    )
    pins = tmp_path / "pins.csv"
    pins.write_text(
        "stage,team_a,team_b,result\n"
        "group,Qatar,Ecuador,a_wins\n"
        "group,Qatar,Senegal,a_wins\n"
        "group,Qatar,Netherlands,a_wins\n"
    )
    code, out, _ = run_cli(
        capsys,
        "compute",
        "--config",
        "men-2022",
        "--overrides",
        str(pins),
        "--format",
        "json-lines",
    )
    assert base_code == code == 0
    base_win = {r["team"]: r["win"] for r in map(json.loads, base_out.strip().split("\n")[1:])}
    win = {r["team"]: r["win"] for r in map(json.loads, out.strip().split("\n")[1:])}
    assert win["Qatar"] > base_win["Qatar"]
    assert json.loads(out.split("\n", 1)[0])["overrides"] == 3


# ---------------------------------------------------------------------------
# simulate / bench / compare
# ---------------------------------------------------------------------------


def test_simulate_deterministic_per_seed(capsys):
    args = ("simulate", "--config", "women-2023", "--runs", "2000", "--seed", "7")
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2
    assert "2,000 simulated tournaments (seed 7)" in out1
    _, out3, _ = run_cli(
        capsys, "simulate", "--config", "women-2023", "--runs", "2000", "--seed", "8"
    )
    assert out3 != out1


def test_bench_json_output(capsys):
    code, out, err = run_cli(
        capsys,
        "bench",
        "--config",
        "women-2023",
        "--runs",
        "5",
        "--format",
        "json-lines",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["type"] == "benchmark" and doc["schedule"] == "wc2023"
    assert doc["exact_seconds"] > 0 and doc["per_run_seconds"] > 0
    assert doc["equivalent_runs"] == pytest.approx(
        doc["exact_seconds"] / doc["per_run_seconds"]
    )


def test_compare_small_grid(capsys):
    code, out, err = run_cli(
        capsys,
        "compare",
        "--config",
        "women-2023",
        "--grid",
        "50,100",
        "--trials",
        "3",
        "--format",
        "json-lines",
    )
    assert code == 0
    lines = out.strip().split("\n")
    meta = json.loads(lines[0])
    assert meta["trials"] == 3 and meta["equivalent_runs"] > 0
    points = [json.loads(line) for line in lines[1:]]
    assert [p["runs"] for p in points] == [50, 100]
    for p in points:
        assert set(p["stats"]) == {"max_abs", "mean_abs", "rmse"}


def test_compare_rejects_malformed_grid(capsys):
    code, out, err = run_cli(
        capsys, "compare", "--config", "women-2023", "--grid", "ten,20"
    )
    assert code == 2
    assert "comma-separated" in err


# ---------------------------------------------------------------------------
# calibrate / bracket
# ---------------------------------------------------------------------------


def test_calibrate_recovers_sigma_from_synthetic_odds(capsys, tmp_path):
    config = bundled_config("women-2023", sigma=300.0)
    win = compute_tournament(config.build_matrices(), config.schedule).win
    lines = ["team,decimal_odds"]
    for name, p in zip(config.team_names, win):
        lines.append(f"{name},{float(1.0 / (1.05 * p))!r}")  # 5% bookmaker margin
    odds_path = tmp_path / "odds.csv"
    odds_path.write_text("\n".join(lines) + "\n")

    code, out, err = run_cli(
        capsys,
        "calibrate",
        "--config",
        "women-2023",
        str(odds_path),
        "--grid",
        "240,300,360",
    )
    assert code == 0
    assert "best sigma: 300" in out


def test_bracket_table_output(capsys):
    code, out, err = run_cli(capsys, "bracket", "--config", "men-2022")
    assert code == 0
    assert out.startswith("most likely bracket  p = ")
    assert "champion: " in out
    assert " over " in out


def test_bracket_json_output(capsys):
    code, out, err = run_cli(
        capsys, "bracket", "--config", "men-2022", "--format", "json-lines"
    )
    assert code == 0
    doc = json.loads(out)
    assert len(doc["matches"]) == 15
    assert len(doc["group_pairs"]) == 8
    assert doc["matches"][-1]["winner"] == doc["champion"]
    assert 0.0 < doc["probability"] < 1.0


# ---------------------------------------------------------------------------
# module entry point
# ---------------------------------------------------------------------------


def test_module_invocation_smoke():
    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "bracketprob.cli",
            "compute",
            "--config",
            "women-2023",
            "--format",
            "json-lines",
        ],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    meta = json.loads(proc.stdout.split("\n", 1)[0])
    assert meta["combos"]["total_full_range"] == 23_256
