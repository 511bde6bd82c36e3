"""Round-robin tournaments with both side assignments and a leaderboard."""
from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from ..engine import DEFAULT_MAX_TICKS
from .agents import AgentError, AgentSpec, make_agent
from .match import MatchConfig, MatchResult, run_match
from .metrics import compute_metrics, score

log = logging.getLogger(__name__)


class TournamentError(ValueError):
    pass


@dataclass
class TournamentConfig:
    agents: list[str]
    rounds: int = 5
    map: str = "basesWorkers8x8"
    k: int = 100
    max_ticks: int = DEFAULT_MAX_TICKS
    seed: int = 0
    workers: int = 1
    out_dir: str | None = None
    save_replays: bool = False
    # cap on matches in flight when any agent calls a live endpoint
    llm_concurrency: int = 2


@dataclass(frozen=True)
class ScheduledMatch:
    index: int
    blue: int  # agent index playing side 0
    red: int   # agent index playing side 1
    round: int
    seed: int


def match_seed(root: int, index: int) -> int:
    """Independent 32-bit seed for match ``index``, stable under schedule growth."""
    child = np.random.SeedSequence(root, spawn_key=(index,))
    return int(child.generate_state(1)[0])


def schedule_tournament(n_agents: int, rounds: int, root_seed: int = 0) -> list[ScheduledMatch]:
    """Every unordered pair plays ``rounds`` matches in each side assignment."""
    if n_agents < 2:
        raise TournamentError("a tournament needs at least two agents")
    if rounds < 1:
        raise TournamentError("rounds must be >= 1")
    out = []
    for i, j in combinations(range(n_agents), 2):
        for r in range(rounds):
            for blue, red in ((i, j), (j, i)):
                idx = len(out)
                out.append(ScheduledMatch(idx, blue, red, r, match_seed(root_seed, idx)))
    return out


@dataclass
class LeaderboardRow:
    agent: str
    matches: int = 0
    wins: int = 0
    draws: int = 0
    losses: int = 0
    scores: int = 0
    rhr: float = 0.0
    rur: float = 0.0
    upr: float = 0.0
    cer: float = math.nan

    @property
    def wr(self) -> float:
        return self.wins / self.matches if self.matches else 0.0

    def to_dict(self) -> dict:
        return {"agent": self.agent, "matches": self.matches, "wins": self.wins, "draws": self.draws,
                "losses": self.losses, "scores": self.scores, "wr": round(self.wr, 4),
                "rhr": round(self.rhr, 4), "rur": round(self.rur, 4), "upr": round(self.upr, 4),
                "cer": None if math.isnan(self.cer) else round(self.cer, 4)}


@dataclass
class TournamentResult:
    labels: list[str]
    schedule: list[ScheduledMatch]
    results: list[MatchResult]
    leaderboard: list[LeaderboardRow] = field(default_factory=list)
    # confrontation[i][j]: summed score of agent i as BLUE against agent j as RED
    confrontation: list[list[int]] = field(default_factory=list)
    files: dict[str, str] = field(default_factory=dict)


def _validate(cfg: TournamentConfig) -> list[AgentSpec]:
    try:
        specs = [AgentSpec.parse(a) for a in cfg.agents]
        for spec in specs:
            make_agent(spec, k=cfg.k)
    except AgentError as exc:
        raise TournamentError(f"agent construction failed: {exc}") from None
    labels = [s.label for s in specs]
    dupes = sorted({x for x in labels if labels.count(x) > 1})
    if dupes:
        raise TournamentError(f"duplicate agent labels {dupes}; rename with label=spec")
    return specs


def _match_config(cfg: TournamentConfig, m: ScheduledMatch) -> MatchConfig:
    out = None
    if cfg.out_dir and cfg.save_replays:
        out = str(Path(cfg.out_dir) / "replays")
    return MatchConfig(
        agents=(cfg.agents[m.blue], cfg.agents[m.red]), map=cfg.map, k=cfg.k,
        max_ticks=cfg.max_ticks, seed=m.seed, out_dir=out, name=f"m{m.index:04d}",
    )


def _play(mc: MatchConfig) -> MatchResult:
    result = run_match(mc)
    result.hashes = []  # not needed for aggregation; keeps worker payloads small
    return result


def run_tournament(cfg: TournamentConfig) -> TournamentResult:
    specs = _validate(cfg)
    labels = [s.label for s in specs]
    schedule = schedule_tournament(len(specs), cfg.rounds, cfg.seed)
    configs = [_match_config(cfg, m) for m in schedule]
    workers = max(1, cfg.workers)
    if any(s.kind == "llm" for s in specs):
        workers = min(workers, max(1, cfg.llm_concurrency))
    log.info("tournament: %d agents, %d matches, %d worker(s)", len(specs), len(schedule), workers)
    if workers == 1:
        results = [_play(mc) for mc in configs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_play, configs, chunksize=4))
    out = TournamentResult(labels, schedule, results)
    out.leaderboard = leaderboard(labels, schedule, results)
    out.confrontation = confrontation(len(labels), schedule, results)
    if cfg.out_dir:
        out.files = write_outputs(Path(cfg.out_dir), out, cfg)
    return out


def leaderboard(labels: list[str], schedule, results) -> list[LeaderboardRow]:
    """Rows sorted by Scores, then win rate, then name."""
    rows = [LeaderboardRow(label) for label in labels]
    samples = [{"rhr": [], "rur": [], "upr": [], "cer": []} for _ in labels]
    for m, res in zip(schedule, results):
        metrics = compute_metrics(res) if res.game_time > 0 else None
        for side, idx in ((0, m.blue), (1, m.red)):
            row = rows[idx]
            s = score(res, side)
            row.matches += 1
            row.scores += s
            row.wins += s == 1
            row.draws += s == 0
            row.losses += s == -1
            if metrics is not None:
                pm = metrics[side]
                samples[idx]["rhr"].append(pm.rhr)
                samples[idx]["rur"].append(pm.rur)
                samples[idx]["upr"].append(pm.upr)
                if pm.cer_finite:
                    samples[idx]["cer"].append(pm.cer)
    for row, smp in zip(rows, samples):
        row.rhr = float(np.mean(smp["rhr"])) if smp["rhr"] else 0.0
        row.rur = float(np.mean(smp["rur"])) if smp["rur"] else 0.0
        row.upr = float(np.mean(smp["upr"])) if smp["upr"] else 0.0
        row.cer = float(np.mean(smp["cer"])) if smp["cer"] else math.nan
    return sorted(rows, key=lambda r: (-r.scores, -r.wr, r.agent))


def confrontation(n: int, schedule, results) -> list[list[int]]:
    grid = [[0] * n for _ in range(n)]
    for m, res in zip(schedule, results):
        grid[m.blue][m.red] += score(res, 0)
    return grid


COLUMNS = ["rank", "agent", "matches", "wins", "draws", "losses", "scores", "wr", "rhr", "rur", "upr", "cer"]


def format_leaderboard(rows: list[LeaderboardRow]) -> str:
    """Fixed-width table for terminals."""
    head = f"{'#':>3}  {'agent':<20} {'M':>4} {'W':>4} {'D':>4} {'L':>4} {'Scores':>6} {'WR':>6} " \
           f"{'RHR':>6} {'RUR':>6} {'UPR':>6} {'CER':>6}"
    lines = [head, "-" * len(head)]
    for rank, r in enumerate(rows, 1):
        cer = "  n/a" if math.isnan(r.cer) else f"{r.cer:6.2f}"
        lines.append(f"{rank:>3}  {r.agent:<20} {r.matches:>4} {r.wins:>4} {r.draws:>4} {r.losses:>4} "
                     f"{r.scores:>6} {r.wr:>6.2f} {r.rhr:>6.2f} {r.rur:>6.2f} {r.upr:>6.2f} {cer:>6}")
    return "\n".join(lines)


def write_outputs(out_dir: Path, res: TournamentResult, cfg: TournamentConfig) -> dict[str, str]:
    out_dir.mkdir(parents=True, exist_ok=True)
    files = {}
    path = out_dir / "leaderboard.csv"
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=COLUMNS)
        w.writeheader()
        for rank, row in enumerate(res.leaderboard, 1):
            w.writerow({"rank": rank, **row.to_dict()})
    files["leaderboard"] = str(path)

    path = out_dir / "confrontation.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["blue \\ red", *res.labels])
        for label, row in zip(res.labels, res.confrontation):
            w.writerow([label, *row])
    files["confrontation"] = str(path)

    path = out_dir / "results.json"
    doc = {
        "config": {"agents": cfg.agents, "rounds": cfg.rounds, "map": cfg.map, "k": cfg.k,
                   "max_ticks": cfg.max_ticks, "seed": cfg.seed},
        "labels": res.labels,
        "leaderboard": [r.to_dict() for r in res.leaderboard],
        "confrontation": res.confrontation,
        "matches": [
            {"index": m.index, "round": m.round, "blue": res.labels[m.blue], "red": res.labels[m.red],
             **r.to_dict()}
            for m, r in zip(res.schedule, res.results)
        ],
    }
    path.write_text(json.dumps(doc, indent=2))
    files["results"] = str(path)
    return files
