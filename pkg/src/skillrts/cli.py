"""Command line entry point: ``skillrts {match,tournament,qa,replay}``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .engine import DEFAULT_MAX_TICKS
from .harness import (
    AgentError,
    MatchConfig,
    MatchConfigError,
    MetricsError,
    QAError,
    ReplayError,
    TournamentConfig,
    TournamentError,
    compute_metrics,
    format_leaderboard,
    qa_probe,
    run_match,
    run_tournament,
    score,
    verify_replay,
)
from .planner import MockPlanner, PlannerConfig, PlannerConfigError


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--map", default="basesWorkers8x8", help="map JSON file or bundled map name")
    p.add_argument("--k", type=int, default=100, help="planning interval in ticks")
    p.add_argument("--max-ticks", type=int, default=DEFAULT_MAX_TICKS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output directory for replays, tables and figures")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skillrts", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging and executor traces")
    sub = parser.add_subparsers(dest="command", required=True)

    m = sub.add_parser("match", help="play one match")
    m.add_argument("blue", help="agent for side 0, e.g. WorkerRush, llm:zs, mock:economy")
    m.add_argument("red", help="agent for side 1")
    _common(m)
    m.add_argument("--no-figures", action="store_true")

    t = sub.add_parser("tournament", help="round robin over two or more agents")
    t.add_argument("agents", nargs="+", help="agent specs; prefix label= to rename")
    _common(t)
    t.add_argument("--rounds", type=int, default=5, help="matches per pairing and side assignment")
    t.add_argument("--workers", type=int, default=1, help="parallel match processes")
    t.add_argument("--save-replays", action="store_true")
    t.add_argument("--no-figures", action="store_true")

    q = sub.add_parser("qa", help="ask the knowledge probe questions")
    q.add_argument("--questions", default=None, help="question YAML (bundled set by default)")
    q.add_argument("--model", default="")
    q.add_argument("--mock", default=None, help="scripted answers keyed by question index")
    q.add_argument("--out", default=None)

    r = sub.add_parser("replay", help="replay utilities")
    rsub = r.add_subparsers(dest="replay_command", required=True)
    rv = rsub.add_parser("verify", help="re-simulate a replay and compare state hashes")
    rv.add_argument("path")
    return parser


def _cmd_match(args) -> int:
    cfg = MatchConfig(agents=(args.blue, args.red), map=args.map, k=args.k, max_ticks=args.max_ticks,
                      seed=args.seed, out_dir=args.out, verbose=args.verbose)
    res = run_match(cfg)
    print("side,agent,score," + ",".join(res.counters[0].as_dict()) + ",RHR,RUR,UPR,CER")
    try:
        metrics = compute_metrics(res)
    except MetricsError:
        metrics = None
    for side in (0, 1):
        c = res.counters[side].as_dict()
        m = metrics[side].to_dict() if metrics else {"RHR": "", "RUR": "", "UPR": "", "CER": ""}
        print(",".join(str(v) for v in (side, res.agents[side], score(res, side), *c.values(),
                                         *(m[k] for k in ("RHR", "RUR", "UPR", "CER")))))
    print(f"# outcome={res.outcome} game_time={res.game_time} planning_events={res.planning_events} "
          f"planner_errors={res.planner_errors}")
    if args.out:
        out = Path(args.out)
        doc = res.to_dict()
        if metrics:
            doc["metrics"] = [m.to_dict() for m in metrics]
        (out / "result.json").write_text(json.dumps(doc, indent=2))
        print(f"# replay {res.replay_path}")
        if not args.no_figures:
            from .report import plot_match_timeline
            print(f"# figure {plot_match_timeline(res, out / 'timeline.png')}")
    return 0


def _cmd_tournament(args) -> int:
    cfg = TournamentConfig(agents=args.agents, rounds=args.rounds, map=args.map, k=args.k,
                           max_ticks=args.max_ticks, seed=args.seed, workers=args.workers,
                           out_dir=args.out, save_replays=args.save_replays)
    res = run_tournament(cfg)
    print(format_leaderboard(res.leaderboard))
    if args.out:
        files = dict(res.files)
        if not args.no_figures:
            from .report import tournament_figures
            files.update(tournament_figures(res, args.out, rounds=args.rounds))
        for name, path in files.items():
            print(f"# {name} {path}")
    return 0


def _cmd_qa(args) -> int:
    cfg = PlannerConfig(model=args.model)
    planner = None
    if args.mock:
        planner = MockPlanner.from_file(args.mock)
    res = qa_probe(cfg, args.questions, planner)
    print("index,game,expected,extracted,correct")
    for i, item in enumerate(res.items):
        print(f"{i},{item.question.game},{item.question.answer:g},"
              f"{'' if item.extracted is None else format(item.extracted, 'g')},{int(item.correct)}")
    print(f"# accuracy={res.accuracy:.3f} " + " ".join(f"{g}={a:.3f}" for g, a in res.by_game().items()))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        doc = {"accuracy": res.accuracy, "items": [
            {"question": i.question.question, "expected": i.question.answer, "response": i.response,
             "extracted": i.extracted, "correct": i.correct} for i in res.items]}
        (out / "qa.json").write_text(json.dumps(doc, indent=2))
    return 0


def _cmd_replay(args) -> int:
    rep = verify_replay(args.path)
    print(f"ticks={rep.ticks} ok={rep.ok} {rep.message}")
    return 0 if rep.ok else 1


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handlers = {"match": _cmd_match, "tournament": _cmd_tournament, "qa": _cmd_qa, "replay": _cmd_replay}
    try:
        return handlers[args.command](args)
    except (MatchConfigError, TournamentError, AgentError, PlannerConfigError, QAError,
            ReplayError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
