"""The planner-executor match loop and its result record."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from ..engine import (
    DEFAULT_MAX_TICKS,
    MatchCounters,
    dump_stats,
    load_map,
    read_map_document,
    step,
    terminal_status,
)
from ..engine.state import MapError
from .agents import Agent, AgentError, make_agent
from .replay import ReplayWriter

log = logging.getLogger(__name__)


class MatchConfigError(ValueError):
    pass


@dataclass
class MatchConfig:
    agents: tuple[str, str]
    map: str = "basesWorkers8x8"
    k: int = 100
    max_ticks: int = DEFAULT_MAX_TICKS
    seed: int = 0
    out_dir: str | None = None
    verbose: bool = False
    name: str = "match"

    def __post_init__(self):
        if len(self.agents) != 2:
            raise MatchConfigError(f"a match needs exactly two agents, got {len(self.agents)}")
        if self.k < 1:
            raise MatchConfigError(f"k must be >= 1, got {self.k}")
        if self.max_ticks < 0:
            raise MatchConfigError(f"max_ticks must be >= 0, got {self.max_ticks}")


@dataclass
class MatchResult:
    winner: int | None  # None is a draw
    game_time: int
    counters: list[MatchCounters]
    agents: tuple[str, str] = ("", "")
    seed: int = 0
    replay_path: str | None = None
    transcripts: list[str] = field(default_factory=list)
    planning_events: int = 0
    planner_errors: int = 0
    hashes: list[str] = field(default_factory=list)
    # per-tick (tick, stock0, stock1, units0, units1) samples for plotting
    timeline: list[tuple[int, int, int, int, int]] = field(default_factory=list)

    @property
    def outcome(self) -> str:
        return "draw" if self.winner is None else f"win({self.winner})"

    def to_dict(self) -> dict:
        return {
            "agents": list(self.agents),
            "seed": self.seed,
            "winner": self.winner,
            "game_time": self.game_time,
            "counters": [c.as_dict() for c in self.counters],
            "replay": self.replay_path,
            "transcripts": self.transcripts,
            "planning_events": self.planning_events,
            "planner_errors": self.planner_errors,
        }


def side_seed(seed: int, side: int) -> int:
    return seed * 2 + side


def run_match(cfg: MatchConfig, agents: tuple[Agent, Agent] | None = None) -> MatchResult:
    """Play one match; pass prebuilt ``agents`` to inject custom planners."""
    try:
        doc = read_map_document(cfg.map)
        state = load_map(doc)
    except MapError as exc:
        raise MatchConfigError(str(exc)) from None
    if agents is None:
        try:
            agents = tuple(make_agent(spec, seed=side_seed(cfg.seed, side), k=cfg.k, verbose=cfg.verbose)
                           for side, spec in enumerate(cfg.agents))
        except AgentError as exc:
            raise MatchConfigError(str(exc)) from None
    for side, agent in enumerate(agents):
        agent.reset(state, side)

    out = Path(cfg.out_dir) if cfg.out_dir else None
    writer = None
    if out is not None:
        writer = ReplayWriter(out / f"{cfg.name}.jsonl", {
            "name": cfg.name, "agents": [a.label for a in agents], "specs": list(cfg.agents),
            "seed": cfg.seed, "k": cfg.k, "max_ticks": cfg.max_ticks,
            "map": doc, "stats": dump_stats(state.stats), "initial_hash": state.state_hash(),
        })

    hashes = []
    timeline = [_sample(state)]
    try:
        status = terminal_status(state, cfg.max_ticks)
        while not status.over:
            vecs = (agents[0].act(state), agents[1].act(state))
            tick = state.tick
            state, events = step(state, *vecs)
            for agent in agents:
                agent.after_step(state)
            h = state.state_hash()
            hashes.append(h)
            timeline.append(_sample(state))
            if writer is not None:
                trace = None
                if cfg.verbose:
                    trace = [a.traces[-1] if getattr(a, "traces", None) else None for a in agents]
                    trace = [_jsonable(t) for t in trace]
                writer.tick(tick, vecs, events, h, trace)
            status = terminal_status(state, cfg.max_ticks)

        result = MatchResult(
            winner=status.winner,
            game_time=state.tick,
            counters=[c.copy() for c in state.counters],
            agents=(agents[0].label, agents[1].label),
            seed=cfg.seed,
            hashes=hashes,
            timeline=timeline,
        )
        for agent in agents:
            for ev in getattr(agent, "events", []):
                result.planning_events += 1
                result.planner_errors += ev.error is not None
                if out is not None:
                    path = out / "transcripts" / f"{cfg.name}_p{ev.side}_t{ev.tick:05d}.json"
                    path.parent.mkdir(parents=True, exist_ok=True)
                    path.write_text(json.dumps(ev.to_dict(), indent=2))
                    result.transcripts.append(str(path))
        if writer is not None:
            result.replay_path = str(writer.path)
            writer.result({"winner": status.winner, "status": status.kind, "game_time": state.tick,
                           "counters": [c.as_dict() for c in state.counters]})
    finally:
        if writer is not None:
            writer.close()
    log.info("%s: %s vs %s -> %s at tick %d", cfg.name, *result.agents, result.outcome, result.game_time)
    return result


def _sample(state) -> tuple[int, int, int, int, int]:
    n = [0, 0]
    for u in state.units.values():
        if u.owner in (0, 1):
            n[u.owner] += 1
    return (state.tick, state.player_resources[0], state.player_resources[1], n[0], n[1])


def _jsonable(trace):
    if trace is None:
        return None
    return {
        "tick": trace["tick"],
        "active": list(trace["active"]),
        "bindings": {str(k): v for k, v in trace["bindings"].items()},
        "actions": [list(a) for a in trace["actions"]],
    }
