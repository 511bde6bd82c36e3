from __future__ import annotations

import json
import subprocess
import sys

from skillrts.cli import main


def test_match_prints_rows(capsys):
    assert main(["match", "WorkerRush", "RandomBiasedAI", "--seed", "7"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("side,agent,score,resources_harvested")
    assert lines[1].startswith("0,WorkerRush,1,")
    assert lines[2].startswith("1,RandomBiasedAI,-1,")
    assert lines[3].startswith("# outcome=win(0)")


def test_match_with_output_and_replay_verify(tmp_path, capsys):
    out = tmp_path / "m"
    assert main(["match", "mock:economy", "LightRush", "--max-ticks", "300", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert (out / "timeline.png").stat().st_size > 0
    doc = json.loads((out / "result.json").read_text())
    assert doc["agents"] == ["mock-economy", "LightRush"] and len(doc["metrics"]) == 2
    assert "# figure" in text
    assert main(["replay", "verify", str(out / "match.jsonl")]) == 0
    assert "ok=True" in capsys.readouterr().out


def test_tournament_writes_tables_and_figures(tmp_path, capsys):
    out = tmp_path / "t"
    rc = main(["tournament", "WorkerRush", "LightRush", "RandomBiasedAI", "--rounds", "1",
               "--max-ticks", "400", "--out", str(out)])
    assert rc == 0
    text = capsys.readouterr().out
    assert "Scores" in text
    for name in ("leaderboard.csv", "confrontation.csv", "results.json", "leaderboard.png", "confrontation.png"):
        assert (out / name).stat().st_size > 0


def test_qa_with_mock(tmp_path, capsys):
    answers = tmp_path / "a.yaml"
    answers.write_text("0: '250'\n1: '4 hit points'\n2: nothing\n")
    assert main(["qa", "--mock", str(answers), "--out", str(tmp_path)]) == 0
    text = capsys.readouterr().out
    assert "# accuracy=0.200" in text
    assert json.loads((tmp_path / "qa.json").read_text())["accuracy"] == 0.2


def test_errors_exit_2(capsys):
    assert main(["match", "WorkerRush", "Dragon"]) == 2
    assert "unknown agent" in capsys.readouterr().err
    assert main(["tournament", "WorkerRush"]) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "skillrts.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "tournament" in proc.stdout
