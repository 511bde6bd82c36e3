"""Compile a skill plan into one legal action vector per tick."""
from __future__ import annotations

from dataclasses import dataclass, field

from .engine import ActionType, ActionVector, GameState, UnitKind
from .engine.rules import target_cell
from .skills import REGISTRY, PlanEntry, SkillRegistry


@dataclass
class SkillPlan:
    """Ordered plan entries; earlier entries have priority when claiming units."""

    entries: list[PlanEntry] = field(default_factory=list)
    created: int = 0
    player: int = 0
    # unit id -> index of the entry holding it, rebuilt by active_set
    ledger: dict[int, int] = field(default_factory=dict)
    last_trace: dict | None = None

    def __len__(self) -> int:
        return len(self.entries)

    def lines(self, registry: SkillRegistry = REGISTRY) -> list[str]:
        return [e.line(registry) for e in self.entries]


def active_set(plan: SkillPlan, state: GameState, player: int, registry: SkillRegistry = REGISTRY) -> list[int]:
    """Indices of applicable entries; binds units greedily in plan order."""
    ledger: dict[int, int] = {}
    active = []
    for i, entry in enumerate(plan.entries):
        skill = registry[entry.skill]
        entry.binding.units = skill.bind(state, player, entry.theta, entry.binding, ledger.keys())
        if skill.applicable(state, player, entry.theta, entry.binding):
            active.append(i)
            for uid in entry.binding.units:
                ledger[uid] = i
        else:
            entry.binding.units = []
    plan.ledger = ledger
    return active


def tick(plan: SkillPlan, state: GameState, player: int, registry: SkillRegistry = REGISTRY) -> ActionVector:
    """First action of every active entry's fresh rollout, merged into one vector.

    Proposals that would overspend the stockpile or race an earlier entry
    for the same target cell are held back for this tick, so lower-priority
    entries never disturb higher-priority ones.
    """
    active = active_set(plan, state, player, registry)
    vec = ActionVector.noop(state.width, state.height)
    budget = state.player_resources[player]
    targets: set[tuple[int, int]] = set()
    commanded: set[int] = set()
    emitted = []
    for i in active:
        entry = plan.entries[i]
        skill = registry[entry.skill]
        for uid, action in skill.policy(state, player, entry.theta, entry.binding):
            if uid in commanded or plan.ledger.get(uid) != i:
                continue
            unit = state.units[uid]
            t = action.action_type
            if t in (ActionType.MOVE, ActionType.PRODUCE):
                cell = target_cell(unit, action)
                if cell in targets:
                    continue
            if t == ActionType.PRODUCE:
                cost = state.stats[UnitKind(action.produce_kind)].cost
                if cost > budget:
                    continue
                budget -= cost
                entry.binding.issued = (uid, state.tick)
                entry.binding.started = False
            if t in (ActionType.MOVE, ActionType.PRODUCE):
                targets.add(cell)
            commanded.add(uid)
            vec.set(unit.x, unit.y, action)
            emitted.append((i, uid, action.describe()))
    plan.last_trace = {
        "tick": state.tick,
        "active": active,
        "bindings": {i: list(plan.entries[i].binding.units) for i in active},
        "actions": emitted,
    }
    return vec


def prune(plan: SkillPlan, state: GameState, registry: SkillRegistry = REGISTRY) -> SkillPlan:
    """Drop entries whose termination condition holds and release their units."""
    kept = []
    for entry in plan.entries:
        skill = registry[entry.skill]
        skill.refresh(state, entry.binding)
        if not skill.terminated(state, plan.player, entry.theta, entry.binding):
            kept.append(entry)
    if len(kept) != len(plan.entries):
        plan.entries = kept
        live = {id(e): i for i, e in enumerate(kept)}
        plan.ledger = {
            uid: live[id(e)] for e in kept for uid in e.binding.units if id(e) in live
        }
    return plan
