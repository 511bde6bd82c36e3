from __future__ import annotations

import csv
import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from skillrts.engine import MatchCounters
from skillrts.harness import (
    CER_INFINITE,
    AgentError,
    AgentSpec,
    MatchConfig,
    MatchConfigError,
    MatchResult,
    MetricsError,
    PlapAgent,
    QAError,
    TournamentConfig,
    TournamentError,
    compute_metrics,
    first_number,
    format_leaderboard,
    load_questions,
    make_agent,
    match_seed,
    qa_probe,
    run_match,
    run_tournament,
    schedule_tournament,
    score,
)
from skillrts.planner import MockPlanner, PlannerConfig, PlannerError


def result_with(winner=None, game_time=100, c0=None, c1=None) -> MatchResult:
    return MatchResult(winner, game_time, [c0 or MatchCounters(), c1 or MatchCounters()])


# -- scoring and metrics --------------------------------------------------

def test_score_values():
    assert score(result_with(0), 0) == 1
    assert score(result_with(0), 1) == -1
    assert score(result_with(None), 0) == 0 and score(result_with(None), 1) == 0
    with pytest.raises(ValueError):
        score(result_with(0), 2)


@given(st.sampled_from([0, 1, None]))
def test_score_antisymmetry(winner):
    r = result_with(winner)
    assert score(r, 0) == -score(r, 1)


def test_rhr():
    m, _ = compute_metrics(result_with(game_time=2000, c0=MatchCounters(resources_harvested=40)))
    assert m.rhr == 2.0


def test_rur_upr():
    m, _ = compute_metrics(result_with(game_time=1000, c0=MatchCounters(resources_spent=30, unit_production=25)))
    assert (m.rur, m.upr) == (3.0, 2.5)


def test_cer():
    m, _ = compute_metrics(result_with(c0=MatchCounters(damage_dealt=12, damage_taken=8)))
    assert m.cer == 1.5


def test_cer_sentinel_when_untouched():
    m, _ = compute_metrics(result_with(c0=MatchCounters(damage_dealt=3)))
    assert m.cer == CER_INFINITE and not m.cer_finite
    assert m.damage_dealt == 3
    assert m.to_dict()["CER"] == "inf"


def test_zero_game_time_has_no_rates():
    with pytest.raises(MetricsError):
        compute_metrics(result_with(game_time=0))


# -- agents ---------------------------------------------------------------

@pytest.mark.parametrize("text, expect", [
    ("WorkerRush", AgentSpec("WorkerRush", "bot", "WorkerRush")),
    ("wr2=WorkerRush", AgentSpec("wr2", "bot", "WorkerRush")),
    ("llm:fs-tip", AgentSpec("PLAP-fs-tip", "llm", variant="fs-tip")),
    ("llm:zs:some-model", AgentSpec("PLAP-zs-some-model", "llm", variant="zs", model="some-model")),
    ("mock:economy", AgentSpec("mock-economy", "mock", "economy", "zs")),
    ("mock:economy:fs", AgentSpec("mock-economy", "mock", "economy", "fs")),
])
def test_agent_spec_grammar(text, expect):
    assert AgentSpec.parse(text) == expect


@pytest.mark.parametrize("text", ["NaiveMCTS", "llm:xx", "mock:", "=WorkerRush", "mock:no-such-fixture"])
def test_bad_agent_specs(text):
    with pytest.raises(AgentError):
        make_agent(text)


def test_llm_agent_without_endpoint(monkeypatch):
    monkeypatch.delenv("SKILLRTS_BASE_URL", raising=False)
    with pytest.raises(AgentError, match="base URL"):
        make_agent("llm:zs")


# -- matches --------------------------------------------------------------

def test_match_is_deterministic():
    cfg = MatchConfig(("WorkerRush", "RandomBiasedAI"), seed=7)
    a, b = run_match(cfg), run_match(cfg)
    assert a.hashes == b.hashes
    assert a.winner == 0
    assert len(a.hashes) == a.game_time


def test_mock_plap_economy_against_passive():
    res = run_match(MatchConfig(("mock:economy", "Passive"), max_ticks=500))
    c = res.counters[0]
    assert c.resources_harvested > 0
    assert c.unit_production >= 1
    assert res.planning_events == 5 and res.planner_errors == 0
    assert res.game_time == 500 and res.winner is None


def test_zero_max_ticks_is_immediate_draw():
    res = run_match(MatchConfig(("WorkerRush", "LightRush"), max_ticks=0))
    assert (res.winner, res.game_time, res.hashes) == (None, 0, [])


@pytest.mark.parametrize("kwargs", [{"agents": ("WorkerRush",)}, {"k": 0}, {"max_ticks": -1}])
def test_match_config_validation(kwargs):
    base = {"agents": ("WorkerRush", "LightRush")}
    with pytest.raises(MatchConfigError):
        MatchConfig(**{**base, **kwargs})


def test_bad_map_and_agent_are_config_errors(tmp_path):
    with pytest.raises(MatchConfigError):
        run_match(MatchConfig(("WorkerRush", "LightRush"), map=str(tmp_path / "missing.json")))
    with pytest.raises(MatchConfigError):
        run_match(MatchConfig(("WorkerRush", "Dragon")))


def test_planner_fault_degrades_to_empty_plan():
    class Broken:
        def respond(self, prompt, tick):
            raise PlannerError("endpoint down")

    agents = (make_agent("mock:economy", planner=Broken()), make_agent("Passive"))
    res = run_match(MatchConfig(("x", "y"), max_ticks=300), agents=agents)
    assert res.planning_events == 3 and res.planner_errors == 3
    assert res.counters[0].as_dict() == MatchCounters().as_dict()


def test_auth_failure_match_continues(stub_server, monkeypatch, tmp_path):
    url, srv = stub_server([(401, "invalid key")])
    monkeypatch.setenv("SKILLRTS_BASE_URL", url)
    monkeypatch.setenv("SKILLRTS_API_KEY", "nope")
    res = run_match(MatchConfig(("llm:zs", "Passive"), max_ticks=250, out_dir=str(tmp_path)))
    assert res.game_time == 250
    assert res.planning_events == 3 and res.planner_errors == 3
    assert len(srv.requests) == 3  # auth errors are not retried
    event = json.loads(open(res.transcripts[0]).read())
    assert "authentication" in event["error"] and event["accepted"] == []


def test_transcripts_written(tmp_path):
    res = run_match(MatchConfig(("mock:economy", "Passive"), max_ticks=200, out_dir=str(tmp_path), name="t"))
    names = sorted(p.split("/")[-1] for p in res.transcripts)
    assert names == ["t_p0_t00000.json", "t_p0_t00100.json"]
    event = json.loads(open(res.transcripts[0]).read())
    assert "## Battlefield Situation" in event["prompt"]
    assert event["accepted"] == ["[Harvest Mineral](0, 0)", "[Produce Unit](worker, south)",
                                 "[Attack Enemy](worker, worker)"]


def test_plap_replans_every_k():
    mock = MockPlanner("[Harvest Mineral](0, 0)")
    agent = make_agent("mock:economy", k=50, planner=mock)
    assert isinstance(agent, PlapAgent)
    run_match(MatchConfig(("x", "Passive"), k=50, max_ticks=220), agents=(agent, make_agent("Passive")))
    assert mock.calls == [0, 50, 100, 150, 200]


# -- tournaments ----------------------------------------------------------

def test_schedule_counts():
    assert len(schedule_tournament(2, 1)) == 2
    sched = schedule_tournament(4, 3)
    assert len(sched) == 6 * 3 * 2
    for a in range(4):
        assert sum(a in (m.blue, m.red) for m in sched) == 3 * 3 * 2
    assert {(m.blue, m.red) for m in sched} == {(i, j) for i in range(4) for j in range(4) if i != j}
    assert len({m.seed for m in sched}) == len(sched)


def test_match_seed_is_stable():
    assert match_seed(0, 5) == match_seed(0, 5)
    assert schedule_tournament(3, 1, 9)[:2] == schedule_tournament(4, 1, 9)[:2]


def test_schedule_validation():
    with pytest.raises(TournamentError):
        schedule_tournament(1, 1)
    with pytest.raises(TournamentError):
        schedule_tournament(2, 0)


SMALL = ["WorkerRush", "LightRush", "RandomBiasedAI", "mock:economy"]


def test_tournament_outputs(tmp_path):
    res = run_tournament(TournamentConfig(SMALL, rounds=1, max_ticks=400, out_dir=str(tmp_path)))
    assert len(res.results) == 12
    rows = res.leaderboard
    assert all(r.matches == 6 for r in rows)
    assert [(-r.scores, -r.wr, r.agent) for r in rows] == sorted((-r.scores, -r.wr, r.agent) for r in rows)
    assert sum(r.scores for r in rows) == 0
    with open(res.files["leaderboard"]) as fh:
        table = list(csv.DictReader(fh))
    assert [t["agent"] for t in table] == [r.agent for r in rows]
    doc = json.loads(open(res.files["results"]).read())
    assert len(doc["matches"]) == 12
    assert "Scores" in format_leaderboard(rows)


def test_tournament_is_deterministic_and_parallel_safe():
    cfg = dict(agents=SMALL, rounds=1, max_ticks=300, seed=3)
    serial = run_tournament(TournamentConfig(**cfg))
    again = run_tournament(TournamentConfig(**cfg))
    parallel = run_tournament(TournamentConfig(**cfg, workers=2))
    as_rows = lambda r: [row.to_dict() for row in r.leaderboard]  # noqa: E731
    assert as_rows(serial) == as_rows(again) == as_rows(parallel)
    assert serial.confrontation == parallel.confrontation


def test_tournament_aborts_before_playing(monkeypatch):
    import skillrts.harness.tournament as tour

    played = []
    monkeypatch.setattr(tour, "_play", lambda mc: played.append(mc))
    with pytest.raises(TournamentError, match="agent construction"):
        run_tournament(TournamentConfig(["WorkerRush", "Nope"], rounds=1))
    with pytest.raises(TournamentError, match="duplicate"):
        run_tournament(TournamentConfig(["WorkerRush", "WorkerRush"], rounds=1))
    assert played == []


def test_cer_average_skips_infinite():
    from skillrts.harness import leaderboard

    sched = schedule_tournament(2, 1)
    results = [
        result_with(0, 100, MatchCounters(damage_dealt=4, damage_taken=2), MatchCounters(damage_dealt=2, damage_taken=4)),
        result_with(1, 100, MatchCounters(damage_dealt=1), MatchCounters(damage_dealt=0, damage_taken=1)),
    ]
    rows = {r.agent: r for r in leaderboard(["a", "b"], sched, results)}
    # agent b plays BLUE in the second match and took no damage there
    assert rows["a"].cer == pytest.approx((2.0 + 0.0) / 2)
    assert rows["b"].cer == pytest.approx(0.5)
    assert rows["a"].scores == 1 + 1 and rows["b"].scores == -2
    assert math.isnan(leaderboard(["a", "b"], sched[:0], [])[0].cer)


# -- knowledge probe ------------------------------------------------------

def test_question_file():
    qs = load_questions()
    assert len(qs) == 10
    assert [q.game for q in qs].count("microrts") == 5
    assert qs[0].question == "How many time units does it take to build the Base in MicroRTS?"
    assert qs[0].answer == 250


def test_qa_correct_item():
    res = qa_probe(PlannerConfig(), planner=MockPlanner({0: "It takes 250 time units.", 1: "no idea"}))
    assert len(res.items) == 10
    assert res.items[0].correct and res.items[0].extracted == 250
    assert not res.items[1].correct
    assert res.accuracy == pytest.approx(0.1)
    assert res.by_game() == {"microrts": 0.2, "sc2": 0.0}


def test_qa_silent_model():
    res = qa_probe(PlannerConfig(), planner=MockPlanner({0: ""}))
    assert res.accuracy == 0.0 and len(res.items) == 10


def test_qa_endpoint_failure():
    class Down:
        def respond(self, prompt, tick):
            raise PlannerError("unreachable")

    with pytest.raises(QAError, match="question 1"):
        qa_probe(PlannerConfig(), planner=Down())


@pytest.mark.parametrize("text, value", [
    ("250", 250), ("about 1,500 minerals", 1500), ("-3 hp", -3), ("2.5 units", 2.5), ("none", None), ("", None),
])
def test_first_number(text, value):
    assert first_number(text) == value


def test_bad_question_file(tmp_path):
    (tmp_path / "q.yaml").write_text("questions:\n  - question: hi\n")
    with pytest.raises(QAError):
        load_questions(tmp_path / "q.yaml")
