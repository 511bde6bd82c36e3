"""The skill library: five parameterized skills over the atomic action space.

Every skill bundles a parameter spec, an applicability test, a one-tick
policy and a termination test. Policies only ever return actions for the
current tick; the executor asks again on the next tick.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .engine import (
    ActionType,
    AtomicAction,
    Direction,
    GameState,
    UnitKind,
    check_action,
)
from .pathing import manhattan, path_length
from .tactics import attack_or_approach, build_step, harvest_step, move_toward, nearest_enemy

UNIT_TYPES = (UnitKind.WORKER, UnitKind.LIGHT, UnitKind.HEAVY, UnitKind.RANGED)
BUILDING_TYPES = (UnitKind.BASE, UnitKind.BARRACK)
ENEMY_TYPES = UNIT_TYPES + BUILDING_TYPES

DOMAINS: dict[str, tuple] = {
    "unit_type": UNIT_TYPES,
    "building_type": BUILDING_TYPES,
    "direction": tuple(Direction),
    "enemy_type": ENEMY_TYPES,
}

_INT = re.compile(r"[+-]?\d+")


class SkillError(KeyError):
    pass


class ParamError(ValueError):
    pass


@dataclass(frozen=True)
class ParamSpec:
    """Ordered parameter domains; ``location`` consumes two integer tokens."""

    names: tuple[str, ...]

    def parse(self, tokens: list[str], width: int, height: int) -> tuple:
        values = []
        toks = list(tokens)
        for name in self.names:
            if name == "location":
                if len(toks) < 2 or not (_INT.fullmatch(toks[0]) and _INT.fullmatch(toks[1])):
                    raise ParamError(f"{name}: expected two integers")
                x, y = int(toks.pop(0)), int(toks.pop(0))
                if not (0 <= x < width and 0 <= y < height):
                    raise ParamError(f"{name}: ({x}, {y}) outside {width}x{height} map")
                values.append((x, y))
                continue
            if not toks:
                raise ParamError(f"missing parameter {name}")
            tok = toks.pop(0).lower()
            match = [v for v in DOMAINS[name] if v.label == tok]
            if not match:
                allowed = ", ".join(v.label for v in DOMAINS[name])
                raise ParamError(f"{name}: {tok!r} not in {{{allowed}}}")
            values.append(match[0])
        if toks:
            raise ParamError(f"unexpected extra parameters {toks}")
        return tuple(values)

    def format(self, theta: tuple) -> str:
        parts = []
        for name, value in zip(self.names, theta):
            if name == "location":
                parts.append(f"{value[0]}, {value[1]}")
            else:
                parts.append(value.label)
        return ", ".join(parts)

    def signature(self) -> str:
        return ", ".join("x, y" if n == "location" else n for n in self.names)


@dataclass
class Binding:
    units: list[int] = field(default_factory=list)
    # (unit id, tick) of a produce command emitted on behalf of the entry
    issued: tuple[int, int] | None = None
    # producer confirmed busy with that command
    started: bool = False


@dataclass
class PlanEntry:
    skill: str
    theta: tuple
    binding: Binding = field(default_factory=Binding)

    def line(self, registry: "SkillRegistry | None" = None) -> str:
        reg = registry or REGISTRY
        return f"[{self.skill}]({reg[self.skill].params.format(self.theta)})"

    def key(self) -> tuple:
        return (self.skill, self.theta)


Proposal = tuple[int, AtomicAction]


class ParameterizedSkill:
    name: str = ""
    params: ParamSpec = ParamSpec(())
    summary: str = ""

    @property
    def description(self) -> str:
        return f"[{self.name}] ({self.params.signature()}): {self.summary}"

    # subclasses override the four hooks below
    def candidates(self, state: GameState, player: int, theta: tuple) -> list:
        return []

    def bind(self, state: GameState, player: int, theta: tuple, binding: Binding, claimed) -> list[int]:
        """Keep still-eligible bound units, otherwise claim the best unclaimed candidate."""
        pool = [u for u in self.candidates(state, player, theta) if u.id not in claimed]
        ids = {u.id for u in pool}
        kept = [uid for uid in binding.units if uid in ids]
        if kept:
            return kept[:1]
        return [pool[0].id] if pool else []

    def applicable(self, state: GameState, player: int, theta: tuple, binding: Binding) -> bool:
        raise NotImplementedError

    def policy(self, state: GameState, player: int, theta: tuple, binding: Binding) -> list[Proposal]:
        raise NotImplementedError

    def terminated(self, state: GameState, player: int, theta: tuple, binding: Binding) -> bool:
        raise NotImplementedError

    def refresh(self, state: GameState, binding: Binding) -> None:
        """Reconcile bookkeeping after an engine step (default: nothing)."""


def _idle(state: GameState, uid: int):
    u = state.units.get(uid)
    return u if u is not None and u.busy is None else None


def _by_distance(units, origin):
    return sorted(units, key=lambda u: (manhattan(u.pos, origin), u.id))


class DeployUnit(ParameterizedSkill):
    name = "Deploy Unit"
    params = ParamSpec(("unit_type", "location"))
    summary = ('Move one unit of the specified type ("worker", "light", "heavy", or "ranged") '
               "to the location (x, y).")

    def candidates(self, state, player, theta):
        kind, loc = theta
        return _by_distance(state.units_of_kind(player, kind), loc)

    def applicable(self, state, player, theta, binding):
        if not binding.units:
            return False
        u = state.units[binding.units[0]]
        loc = theta[1]
        return u.pos == loc or path_length(state, u.pos, [loc]) is not None

    def policy(self, state, player, theta, binding):
        if not binding.units or self.terminated(state, player, theta, binding):
            return []
        u = _idle(state, binding.units[0])
        if u is None:
            return []
        a = move_toward(state, u, [theta[1]])
        return [] if a is None else [(u.id, a)]

    def terminated(self, state, player, theta, binding):
        if not binding.units:
            return False
        u = state.units.get(binding.units[0])
        return u is None or u.pos == theta[1]


class HarvestMineral(ParameterizedSkill):
    name = "Harvest Mineral"
    params = ParamSpec(("location",))
    summary = "Assign one worker to harvest resources from the mineral field located at (x, y)."

    def _field(self, state, theta):
        u = state.unit_at(*theta[0])
        return u if u is not None and u.kind == UnitKind.RESOURCE else None

    def candidates(self, state, player, theta):
        return _by_distance(state.units_of_kind(player, UnitKind.WORKER), theta[0])

    def applicable(self, state, player, theta, binding):
        return (
            self._field(state, theta) is not None
            and bool(binding.units)
            and bool(state.units_of_kind(player, UnitKind.BASE))
        )

    def policy(self, state, player, theta, binding):
        if not binding.units or self.terminated(state, player, theta, binding):
            return []
        u = _idle(state, binding.units[0])
        if u is None:
            return []
        a = harvest_step(state, u, self._field(state, theta))
        return [] if a is None else [(u.id, a)]

    def terminated(self, state, player, theta, binding):
        return (
            self._field(state, theta) is None
            or not state.units_of_kind(player, UnitKind.WORKER)
            or not state.units_of_kind(player, UnitKind.BASE)
        )


class BuildBuilding(ParameterizedSkill):
    name = "Build Building"
    params = ParamSpec(("building_type", "location"))
    summary = ('Use one worker to build a building of the specified type ("base" or "barrack") '
               "at the location (x, y).")

    def candidates(self, state, player, theta):
        return _by_distance(state.units_of_kind(player, UnitKind.WORKER), theta[1])

    def _under_construction(self, state, theta, binding):
        if not binding.units:
            return False
        u = state.units.get(binding.units[0])
        return (
            u is not None and u.busy is not None
            and u.busy.action.action_type == ActionType.PRODUCE
            and u.busy.target == theta[1]
        )

    def applicable(self, state, player, theta, binding):
        kind, loc = theta
        if self._under_construction(state, theta, binding):
            return True
        return (
            state.player_resources[player] >= state.stats[kind].cost
            and state.is_free(*loc)
            and bool(binding.units)
        )

    def policy(self, state, player, theta, binding):
        if not binding.units or self.terminated(state, player, theta, binding):
            return []
        u = _idle(state, binding.units[0])
        if u is None:
            return []
        a = build_step(state, u, theta[0], theta[1])
        return [] if a is None else [(u.id, a)]

    def terminated(self, state, player, theta, binding):
        kind, loc = theta
        b = state.unit_at(*loc)
        return b is not None and b.kind == kind and b.owner == player


class ProduceUnit(ParameterizedSkill):
    name = "Produce Unit"
    params = ParamSpec(("unit_type", "direction"))
    summary = ('Produce a unit of the specified type ("worker", "light", "heavy", or "ranged") '
               'in the specified direction ("north", "east", "south", or "west").')

    def candidates(self, state, player, theta):
        kind, d = theta
        producer = state.stats[kind].producible_by
        dx, dy = d.delta
        ready = [u for u in state.units_of_kind(player, producer) if state.is_free(u.x + dx, u.y + dy)]
        # idle producers first, then by id
        return sorted(ready, key=lambda u: (u.busy is not None, u.id))

    def bind(self, state, player, theta, binding, claimed):
        if binding.issued is not None:
            uid = binding.issued[0]
            return [uid] if uid in state.units and uid not in claimed else []
        return super().bind(state, player, theta, binding, claimed)

    def applicable(self, state, player, theta, binding):
        if binding.issued is not None:
            return bool(binding.units)
        return bool(binding.units) and state.player_resources[player] >= state.stats[theta[0]].cost

    def policy(self, state, player, theta, binding):
        if not binding.units or binding.issued is not None:
            return []
        u = _idle(state, binding.units[0])
        if u is None:
            return []
        kind, d = theta
        a = AtomicAction.produce(d, kind)
        return [(u.id, a)] if check_action(state, u, a) is None else []

    def refresh(self, state, binding):
        if binding.issued is None:
            return
        uid, tick = binding.issued
        u = state.units.get(uid)
        if u is None:
            return
        if u.busy is not None and u.busy.start == tick:
            binding.started = True
        elif u.completed != (tick, int(ActionType.PRODUCE)) and not binding.started:
            # command was dropped by the engine; allow a retry
            binding.issued = None

    def terminated(self, state, player, theta, binding):
        if binding.issued is None:
            return False
        uid, tick = binding.issued
        u = state.units.get(uid)
        if u is None:
            return True
        return u.completed == (tick, int(ActionType.PRODUCE))


class AttackEnemy(ParameterizedSkill):
    name = "Attack Enemy"
    params = ParamSpec(("unit_type", "enemy_type"))
    summary = ('Send all your units of the specified type ("worker", "light", "heavy", or "ranged") '
               'to attack the nearest enemy units of the specified type ("worker", "light", "heavy", '
               '"ranged", "base", or "barrack").')

    def candidates(self, state, player, theta):
        return sorted(state.units_of_kind(player, theta[0]), key=lambda u: u.id)

    def bind(self, state, player, theta, binding, claimed):
        return [u.id for u in self.candidates(state, player, theta) if u.id not in claimed]

    def applicable(self, state, player, theta, binding):
        return bool(binding.units) and bool(state.units_of_kind(1 - player, theta[1]))

    def policy(self, state, player, theta, binding):
        out = []
        for uid in binding.units:
            u = _idle(state, uid)
            if u is None:
                continue
            target = nearest_enemy(state, u, theta[1])
            if target is None:
                continue
            a = attack_or_approach(state, u, target)
            if a is not None:
                out.append((uid, a))
        return out

    def terminated(self, state, player, theta, binding):
        return not state.units_of_kind(1 - player, theta[1])


class SkillRegistry:
    def __init__(self, skills):
        self._skills = {}
        for s in skills:
            key = normalize_name(s.name)
            if key in self._skills:
                raise ValueError(f"duplicate skill {s.name!r}")
            self._skills[key] = s

    def __getitem__(self, name: str) -> ParameterizedSkill:
        try:
            return self._skills[normalize_name(name)]
        except KeyError:
            raise SkillError(f"unknown skill {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return normalize_name(name) in self._skills

    def __iter__(self):
        return iter(self._skills.values())

    def __len__(self) -> int:
        return len(self._skills)

    def names(self) -> list[str]:
        return [s.name for s in self]


def normalize_name(name: str) -> str:
    return " ".join(name.split()).lower()


REGISTRY = SkillRegistry([DeployUnit(), HarvestMineral(), BuildBuilding(), ProduceUnit(), AttackEnemy()])


# Function-style entry points ---------------------------------------------

def applicability(skill, theta, state, player, ledger=None, binding: Binding | None = None) -> bool:
    """Whether the skill can run now; units present in ``ledger`` count as claimed elsewhere."""
    sk = REGISTRY[skill] if isinstance(skill, str) else skill
    b = Binding() if binding is None else Binding(list(binding.units), binding.issued, binding.started)
    b.units = sk.bind(state, player, theta, b, set(ledger or ()))
    return sk.applicable(state, player, theta, b)


def policy_step(skill, theta, state, player, binding: Binding) -> list[Proposal]:
    sk = REGISTRY[skill] if isinstance(skill, str) else skill
    return sk.policy(state, player, theta, binding)


def termination(skill, theta, state, binding: Binding, player: int) -> bool:
    sk = REGISTRY[skill] if isinstance(skill, str) else skill
    return sk.terminated(state, player, theta, binding)


def describe_skills(registry: SkillRegistry = REGISTRY) -> str:
    return "\n".join(f"- {s.description}" for s in registry)
