"""Prompt assembly for the language-model skill planner."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from ..engine import GameState, UnitKind
from ..engine.state import StatsTable, _data_path
from ..observation import SIDE_NAMES, to_text
from ..skills import REGISTRY, SkillRegistry, describe_skills

VARIANTS = ("zs", "zs-tip", "fs", "fs-tip")
PLAN_START = "START OF SKILL_PLAN"
PLAN_END = "END OF SKILL_PLAN"

BASE_URL_ENV = "SKILLRTS_BASE_URL"
API_KEY_ENV = "SKILLRTS_API_KEY"
MODEL_ENV = "SKILLRTS_MODEL"


class PlannerConfigError(ValueError):
    pass


@dataclass
class PlannerConfig:
    variant: str = "zs"
    model: str = ""
    temperature: float = 0.0
    max_tokens: int = 256
    k: int = 100
    base_url: str | None = None
    # name of the environment variable holding the API key (never the key itself)
    api_key_env: str = API_KEY_ENV
    timeout: float = 60.0
    max_attempts: int = 4
    backoff: float = 1.0
    template_dir: str | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise PlannerConfigError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.k < 1:
            raise PlannerConfigError(f"planning interval k must be >= 1, got {self.k}")
        if self.temperature < 0:
            raise PlannerConfigError(f"temperature must be >= 0, got {self.temperature}")
        if self.max_tokens < 1:
            raise PlannerConfigError(f"max_tokens must be >= 1, got {self.max_tokens}")
        if self.max_attempts < 1:
            raise PlannerConfigError(f"max_attempts must be >= 1, got {self.max_attempts}")

    @property
    def few_shot(self) -> bool:
        return self.variant.startswith("fs")

    @property
    def tips(self) -> bool:
        return self.variant.endswith("-tip")

    def resolved_base_url(self) -> str | None:
        return self.base_url or os.environ.get(BASE_URL_ENV)

    def resolved_model(self) -> str:
        return self.model or os.environ.get(MODEL_ENV, "")

    def api_key(self) -> str | None:
        return os.environ.get(self.api_key_env)


INSTRUCTION = (
    "You are planning for one side of a MicroRTS match, a real-time strategy game "
    "on a small grid. Read the rules and the current state below, then write a "
    "skill plan that leads your side to victory."
)

PLAN_FORMAT = (
    f"Write your plan as a list of parameterized skills, one per line, placed between "
    f'the lines "{PLAN_START}" and "{PLAN_END}". Earlier lines have priority when two '
    f"skills want the same unit. For example:\n"
    f"{PLAN_START}\n"
    f"[Harvest Mineral](0, 0)\n"
    f"[Produce Unit](worker, south)\n"
    f"{PLAN_END}"
)


def game_manual(stats: StatsTable) -> str:
    """Rules summary generated from the loaded unit stats table."""
    lines = [
        "Two players share a grid; every unit fills exactly one cell. Resources are "
        "the only currency: workers carry them from mineral fields to a base, and "
        "producing anything spends them.",
        "Unit types:",
        "- Resource: neutral mineral field that workers harvest.",
    ]
    for kind in (UnitKind.BASE, UnitKind.BARRACK, UnitKind.WORKER,
                 UnitKind.LIGHT, UnitKind.HEAVY, UnitKind.RANGED):
        s = stats[kind]
        parts = [f"{s.max_hp} HP", f"costs {s.cost}", f"takes {s.build_time} time units to build"]
        if s.can_attack:
            parts.append(f"deals {s.attack_damage} damage at range {s.attack_range}")
        if s.can_move:
            parts.append(f"moves one cell per {s.move_time} time units")
        if s.can_harvest:
            parts.append(f"carries {s.harvest_amount} resource per trip")
        made = sorted((k for k, ks in stats.items() if ks.producible_by == kind), key=int)
        if made:
            parts.append("produces " + ", ".join(k.label for k in made))
        if s.producible_by is not None:
            parts.append(f"made by a {s.producible_by.label}")
        lines.append(f"- {kind.label.capitalize()}: " + "; ".join(parts) + ".")
    lines.append("A player loses when all of its units and buildings are destroyed.")
    return "\n".join(lines)


@dataclass
class PromptDocument:
    instruction: str
    manual: str
    skills: str
    examples: str | None
    tips: str | None
    situation: str
    side: str
    sections: list[tuple[str, str]] = field(default_factory=list)

    def __post_init__(self):
        if not self.sections:
            self.sections = self._assemble()

    def _assemble(self) -> list[tuple[str, str]]:
        out = [
            ("Instruction", self.instruction),
            ("Game Manual", self.manual),
            ("Available Skills", self.skills),
        ]
        if self.examples is not None:
            out.append(("Examples", self.examples))
        if self.tips is not None:
            out.append(("Tips", self.tips))
        out.append(("Battlefield Situation", self.situation))
        return out

    @property
    def text(self) -> str:
        return "\n\n".join(f"## {title}\n{body.rstrip()}" for title, body in self.sections) + "\n"

    def messages(self) -> list[dict]:
        return [{"role": "user", "content": self.text}]


def _template(cfg: PlannerConfig, name: str) -> str:
    if cfg.template_dir is not None:
        path = Path(cfg.template_dir) / name
        if not path.is_file():
            raise PlannerConfigError(f"template {name!r} not found in {cfg.template_dir}")
        return path.read_text()
    node = _data_path("templates", name)
    if not node.is_file():
        raise PlannerConfigError(f"bundled template {name!r} is missing")
    return node.read_text()


FINAL_BATTLE_RULE = (
    "Once your stockpile is empty and no mineral field is left, commit every unit "
    "to attacking enemy units and buildings."
)

EXAMPLE_SEPARATOR = "\n---\n"


def load_examples(cfg: PlannerConfig) -> list[str]:
    shots = [s.strip() for s in _template(cfg, "examples.txt").split(EXAMPLE_SEPARATOR) if s.strip()]
    if len(shots) != 2:
        raise PlannerConfigError(f"few-shot template must hold exactly 2 examples, found {len(shots)}")
    return shots


def load_tips(cfg: PlannerConfig) -> list[str]:
    tips = [t.strip() for t in _template(cfg, "tips.txt").splitlines() if t.strip()]
    if not tips:
        raise PlannerConfigError("tips template is empty")
    return tips


def build_prompt(state: GameState, cfg: PlannerConfig, side: int,
                 registry: SkillRegistry = REGISTRY) -> PromptDocument:
    """Deterministic prompt for ``side`` (0 = BLUE, 1 = RED) at the current state."""
    if side not in (0, 1):
        raise ValueError(f"side must be 0 or 1, got {side!r}")
    skills = PLAN_FORMAT + "\nAvailable skills:\n" + describe_skills(registry)
    examples = None
    if cfg.few_shot:
        shots = load_examples(cfg)
        examples = "\n\n".join(f"Example {i}:\n{s}" for i, s in enumerate(shots, 1))
    tips = None
    if cfg.tips:
        tips = "\n".join(t if t.startswith("- ") else f"- {t}" for t in load_tips(cfg))
    name = SIDE_NAMES[side]
    situation = (
        "Current state of the match:\n"
        + to_text(state, side)
        + f"\n{FINAL_BATTLE_RULE}\n"
        + f"You are now the **{name}** side. Write the skill plan for this situation."
    )
    return PromptDocument(
        instruction=INSTRUCTION,
        manual=game_manual(state.stats),
        skills=skills,
        examples=examples,
        tips=tips,
        situation=situation,
        side=name,
    )
