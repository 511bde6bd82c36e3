"""Agents that drive one side of a match, built from short spec strings.

Spec grammar (an optional ``label=`` prefix renames the agent):

    WorkerRush | LightRush | RandomBiasedAI | Passive
    llm:<variant>[:<model>]        planner backed by a chat-completion endpoint
    mock:<fixture>[:<variant>]     planner replaying scripted responses
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from pathlib import Path

from .. import bots, executor
from ..engine import ActionVector, GameState
from ..engine.state import _data_path
from ..planner import (
    LLMPlanner,
    MockPlanner,
    Planner,
    PlannerConfig,
    PlannerConfigError,
    PlannerError,
    RawResponse,
    build_prompt,
    parse_plan,
)
from ..skills import REGISTRY, SkillRegistry

log = logging.getLogger(__name__)


class AgentError(ValueError):
    pass


@dataclass(frozen=True)
class AgentSpec:
    label: str
    kind: str  # "bot" | "llm" | "mock"
    name: str = ""  # bot name or mock fixture
    variant: str = "zs"
    model: str = ""

    @classmethod
    def parse(cls, text: str) -> "AgentSpec":
        text = text.strip()
        label = None
        if "=" in text:
            label, text = (s.strip() for s in text.split("=", 1))
            if not label:
                raise AgentError("empty agent label")
        if text in bots.BOT_NAMES:
            return cls(label or text, "bot", text)
        head, _, rest = text.partition(":")
        if head == "llm":
            variant, _, model = rest.partition(":")
            variant = variant or "zs"
            _check_variant(variant)
            return cls(label or f"PLAP-{variant}" + (f"-{model}" if model else ""), "llm",
                       variant=variant, model=model)
        if head == "mock":
            fixture, variant = rest, "zs"
            base, sep, tail = rest.rpartition(":")
            if sep and tail in ("zs", "zs-tip", "fs", "fs-tip"):
                fixture, variant = base, tail
            if not fixture:
                raise AgentError("mock agent needs a fixture: mock:<file or bundled name>")
            return cls(label or f"mock-{Path(fixture).stem}", "mock", fixture, variant)
        known = ", ".join(bots.BOT_NAMES)
        raise AgentError(f"unknown agent {text!r}; expected one of {known}, llm:<variant>, mock:<fixture>")


def _check_variant(variant: str) -> None:
    try:
        PlannerConfig(variant=variant)
    except PlannerConfigError as exc:
        raise AgentError(str(exc)) from None


def resolve_fixture(name: str) -> Path:
    """A fixture path, or the stem of a plan script bundled with the package."""
    path = Path(name)
    if path.is_file():
        return path
    for suffix in (".yaml", ".txt"):
        node = _data_path("plans", f"{name}{suffix}")
        if node.is_file():
            return Path(str(node))
    raise AgentError(f"mock fixture not found: {name}")


class Agent:
    label: str = ""
    is_planner = False

    def reset(self, state: GameState, side: int) -> None:
        self.side = side

    def act(self, state: GameState) -> ActionVector:
        raise NotImplementedError

    def after_step(self, state: GameState) -> None:
        pass


class BotAgent(Agent):
    _fns = {"WorkerRush": bots.worker_rush, "LightRush": bots.light_rush, "Passive": bots.passive}

    def __init__(self, label: str, name: str):
        self.label = label
        self.fn = self._fns[name]

    def act(self, state):
        return self.fn(state, self.side)


class RandomAgent(Agent):
    def __init__(self, label: str, seed: int):
        self.label = label
        self.seed = seed

    def reset(self, state, side):
        super().reset(state, side)
        self.rng = random.Random(self.seed)
        self.holds: dict[int, int] = {}

    def act(self, state):
        return bots.random_biased(state, self.side, self.rng, self.holds)


@dataclass
class PlanningEvent:
    """One planning call: what was asked, what came back, what survived parsing."""

    tick: int
    side: int
    prompt: str
    response: str = ""
    accepted: list[str] = field(default_factory=list)
    rejected: list[tuple[str, str]] = field(default_factory=list)
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "tick": self.tick, "side": self.side, "prompt": self.prompt, "response": self.response,
            "accepted": self.accepted, "rejected": [list(r) for r in self.rejected], "error": self.error,
        }


class PlapAgent(Agent):
    """Plans every ``k`` ticks and executes the current plan in between."""

    is_planner = True

    def __init__(self, label: str, cfg: PlannerConfig, planner: Planner,
                 registry: SkillRegistry = REGISTRY, verbose: bool = False):
        self.label = label
        self.cfg = cfg
        self.planner = planner
        self.registry = registry
        self.verbose = verbose

    def reset(self, state, side):
        super().reset(state, side)
        self.plan = executor.SkillPlan(player=side)
        self.events: list[PlanningEvent] = []
        self.traces: list[dict] = []

    def replan(self, state: GameState) -> PlanningEvent:
        prompt = build_prompt(state, self.cfg, self.side, self.registry)
        event = PlanningEvent(state.tick, self.side, prompt.text)
        try:
            raw = RawResponse(self.planner.respond(prompt, state.tick))
        except PlannerError as exc:
            log.warning("%s: planner failed at tick %d: %s; continuing with an empty plan",
                        self.label, state.tick, exc)
            event.error = str(exc)
            raw = RawResponse("")
        event.response = raw.text
        self.plan = parse_plan(raw, self.registry, state, self.side)
        event.accepted = self.plan.lines(self.registry)
        event.rejected = [(v.line, v.reason) for v in raw.rejected if v.reason != "not a skill line"]
        if not self.plan.entries:
            log.info("%s: empty plan at tick %d", self.label, state.tick)
        self.events.append(event)
        return event

    def act(self, state):
        if state.tick % self.cfg.k == 0:
            self.replan(state)
        vec = executor.tick(self.plan, state, self.side, self.registry)
        if self.verbose and self.plan.last_trace is not None:
            self.traces.append(self.plan.last_trace)
        return vec

    def after_step(self, state):
        executor.prune(self.plan, state, self.registry)


def make_agent(spec: str | AgentSpec, *, seed: int = 0, k: int = 100, verbose: bool = False,
               planner: Planner | None = None) -> Agent:
    """Instantiate an agent; ``planner`` overrides the one implied by the spec."""
    spec = AgentSpec.parse(spec) if isinstance(spec, str) else spec
    if spec.kind == "bot":
        if spec.name == "RandomBiasedAI":
            return RandomAgent(spec.label, seed)
        return BotAgent(spec.label, spec.name)
    cfg = PlannerConfig(variant=spec.variant, model=spec.model, k=k)
    if planner is None:
        if spec.kind == "mock":
            planner = MockPlanner.from_file(resolve_fixture(spec.name))
        else:
            try:
                planner = LLMPlanner(cfg)
            except PlannerError as exc:
                raise AgentError(f"{spec.label}: {exc}") from None
    return PlapAgent(spec.label, cfg, planner, verbose=verbose)
