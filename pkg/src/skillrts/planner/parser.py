"""Regex extraction and validation of skill plans from model output."""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

from ..engine import GameState
from ..executor import SkillPlan
from ..skills import REGISTRY, ParamError, PlanEntry, SkillError, SkillRegistry
from .prompt import PLAN_END, PLAN_START

log = logging.getLogger(__name__)

MAX_PLAN_ENTRIES = 20

_LINE = re.compile(
    r"^\s*(?:[-*+]\s*|\d+[.)]\s*)?"      # optional bullet or numbering
    r"\[\s*([^\[\]]+?)\s*\]"              # [Skill Name]
    r"\s*\((.*)\)"                        # (params), outermost parentheses
    r"\s*[.,;]?\s*$"
)
_STRIP = str.maketrans({c: " " for c in "()\"'`"})


@dataclass
class LineVerdict:
    line: str
    entry: PlanEntry | None = None
    reason: str = ""

    @property
    def accepted(self) -> bool:
        return self.entry is not None


@dataclass
class RawResponse:
    text: str
    region: str = ""
    verdicts: list[LineVerdict] = field(default_factory=list)

    @property
    def accepted(self) -> list[PlanEntry]:
        return [v.entry for v in self.verdicts if v.entry is not None]

    @property
    def rejected(self) -> list[LineVerdict]:
        return [v for v in self.verdicts if v.entry is None]


def extract_region(text: str) -> str:
    """Text between the first start marker and the next end marker, else all of it."""
    start = text.find(PLAN_START)
    if start < 0:
        return text
    body = text[start + len(PLAN_START):]
    end = body.find(PLAN_END)
    return body if end < 0 else body[:end]


def split_params(raw: str) -> list[str]:
    return [t.strip() for t in raw.translate(_STRIP).split(",") if t.strip()]


def parse_line(line: str, registry: SkillRegistry, width: int, height: int) -> LineVerdict:
    m = _LINE.match(line)
    if m is None:
        return LineVerdict(line, reason="not a skill line")
    name, params = m.group(1), m.group(2)
    try:
        skill = registry[name]
    except SkillError:
        return LineVerdict(line, reason=f"unknown skill {name.strip()!r}")
    try:
        theta = skill.params.parse(split_params(params), width, height)
    except ParamError as exc:
        return LineVerdict(line, reason=f"invalid parameters: {exc}")
    return LineVerdict(line, entry=PlanEntry(skill.name, theta))


def parse_response(raw: RawResponse | str, width: int, height: int,
                   registry: SkillRegistry = REGISTRY) -> RawResponse:
    """Fill ``region`` and per-line verdicts; never raises on malformed text."""
    if not isinstance(raw, RawResponse):
        raw = RawResponse(str(raw))
    raw.region = extract_region(raw.text)
    raw.verdicts = []
    kept = 0
    for line in raw.region.splitlines():
        if not line.strip():
            continue
        verdict = parse_line(line, registry, width, height)
        if verdict.entry is not None:
            if kept >= MAX_PLAN_ENTRIES:
                verdict = LineVerdict(line, reason=f"plan size cap of {MAX_PLAN_ENTRIES} reached")
            else:
                kept += 1
        raw.verdicts.append(verdict)
    capped = sum(1 for v in raw.verdicts if v.reason.startswith("plan size cap"))
    if capped:
        log.warning("discarded %d skill lines beyond the %d-entry cap", capped, MAX_PLAN_ENTRIES)
    return raw


def parse_plan(raw: RawResponse | str, registry: SkillRegistry, state: GameState, player: int) -> SkillPlan:
    """Accepted entries, in response order, as a fresh plan created at ``state.tick``."""
    raw = parse_response(raw, state.width, state.height, registry)
    return SkillPlan(entries=raw.accepted, created=state.tick, player=player)


def format_plan(entries, registry: SkillRegistry = REGISTRY) -> str:
    """Marker-delimited text that :func:`parse_plan` maps back to ``entries``."""
    lines = [PLAN_START]
    lines += [e.line(registry) for e in entries]
    lines.append(PLAN_END)
    return "\n".join(lines) + "\n"
