"""Legality, the durative step function and terminal detection."""
from __future__ import annotations

from dataclasses import dataclass

from .state import GameState, InProgressAction, Unit
from .types import (
    ATTACK_REACH,
    DIRECTION_DELTAS,
    NEUTRAL,
    NOOP,
    ActionType,
    ActionVector,
    AtomicAction,
    Direction,
    UnitKind,
    attack_delta,
)


class EngineError(ValueError):
    pass


@dataclass(frozen=True)
class Event:
    kind: str
    unit: int | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {"kind": self.kind, "unit": self.unit, "detail": self.detail}

    @classmethod
    def from_dict(cls, d: dict) -> "Event":
        return cls(d["kind"], d.get("unit"), d.get("detail", ""))


@dataclass(frozen=True)
class Status:
    kind: str  # "ongoing" | "win" | "draw"
    winner: int | None = None

    @property
    def over(self) -> bool:
        return self.kind != "ongoing"

    def __str__(self) -> str:
        return f"win({self.winner})" if self.kind == "win" else self.kind


ONGOING = Status("ongoing")
DRAW = Status("draw")


def target_cell(unit: Unit, action: AtomicAction) -> tuple[int, int] | None:
    t = action.action_type
    if t == ActionType.NOOP:
        return None
    if t == ActionType.ATTACK:
        dx, dy = attack_delta(action.attack_offset)
    else:
        dx, dy = DIRECTION_DELTAS[Direction(action.direction)]
    return unit.x + dx, unit.y + dy


def in_attack_range(dx: int, dy: int, attack_range: int) -> bool:
    return (dx, dy) != (0, 0) and dx * dx + dy * dy <= attack_range * attack_range


def action_duration(state: GameState, unit: Unit, action: AtomicAction) -> int:
    s = state.stats[unit.kind]
    t = action.action_type
    if t == ActionType.MOVE:
        return s.move_time
    if t == ActionType.HARVEST:
        return s.harvest_time
    if t == ActionType.RETURN:
        return s.return_time
    if t == ActionType.PRODUCE:
        return state.stats[UnitKind(action.produce_kind)].build_time
    if t == ActionType.ATTACK:
        return s.attack_time
    return 0


def check_action(state: GameState, unit: Unit, action: AtomicAction, player: int | None = None) -> str | None:
    """Return why ``action`` cannot be issued to ``unit`` now, or None if it can."""
    if player is not None and unit.owner != player:
        return "unit not owned by player"
    if unit.owner == NEUTRAL:
        return "neutral units take no actions"
    if unit.busy is not None:
        return "unit busy"
    t = action.action_type
    if t == ActionType.NOOP:
        return None
    s = state.stats[unit.kind]
    tx, ty = target_cell(unit, action)
    if not state.in_bounds(tx, ty):
        return "target outside map"
    if t == ActionType.MOVE:
        if not s.can_move:
            return f"{unit.kind.label} cannot move"
        if not state.is_free(tx, ty):
            return "destination not free"
        return None
    if t == ActionType.HARVEST:
        if not s.can_harvest:
            return f"{unit.kind.label} cannot harvest"
        if unit.carried > 0:
            return "already carrying"
        other = state.unit_at(tx, ty)
        if other is None or other.kind != UnitKind.RESOURCE:
            return "no mineral field there"
        return None
    if t == ActionType.RETURN:
        if not s.can_harvest:
            return f"{unit.kind.label} cannot return"
        if unit.carried <= 0:
            return "nothing to return"
        other = state.unit_at(tx, ty)
        if other is None or other.kind != UnitKind.BASE or other.owner != unit.owner:
            return "no owned base there"
        return None
    if t == ActionType.PRODUCE:
        kind = UnitKind(action.produce_kind)
        if state.stats[kind].producible_by != unit.kind:
            return f"{unit.kind.label} cannot produce {kind.label}"
        if state.player_resources[unit.owner] < state.stats[kind].cost:
            return "insufficient resources"
        if not state.is_free(tx, ty):
            return "spawn cell not free"
        return None
    if t == ActionType.ATTACK:
        if not s.can_attack:
            return f"{unit.kind.label} cannot attack"
        dx, dy = tx - unit.x, ty - unit.y
        if not in_attack_range(dx, dy, s.attack_range):
            return "target out of range"
        other = state.unit_at(tx, ty)
        if other is None or other.owner not in (0, 1) or other.owner == unit.owner:
            return "no enemy at target"
        return None
    return "unknown action type"


def unit_legal_actions(state: GameState, unit: Unit) -> list[AtomicAction]:
    """All actions ``unit`` may be issued this tick (empty when busy or neutral)."""
    if unit.busy is not None or unit.owner == NEUTRAL:
        return []
    out = [NOOP]
    s = state.stats[unit.kind]
    neighbours = []
    for d, (dx, dy) in DIRECTION_DELTAS.items():
        nx, ny = unit.x + dx, unit.y + dy
        if state.in_bounds(nx, ny):
            neighbours.append((d, nx, ny, state.unit_at(nx, ny)))
    if s.can_move:
        out.extend(AtomicAction.move(d) for d, nx, ny, _ in neighbours if state.is_free(nx, ny))
    if s.can_harvest:
        if unit.carried == 0:
            out.extend(AtomicAction.harvest(d) for d, _, _, o in neighbours
                       if o is not None and o.kind == UnitKind.RESOURCE)
        else:
            out.extend(AtomicAction.ret(d) for d, _, _, o in neighbours
                       if o is not None and o.kind == UnitKind.BASE and o.owner == unit.owner)
    stock = state.player_resources[unit.owner]
    products = [k for k, ks in state.stats.items() if ks.producible_by == unit.kind and ks.cost <= stock]
    if products:
        for d, nx, ny, _ in neighbours:
            if state.is_free(nx, ny):
                out.extend(AtomicAction.produce(d, k) for k in sorted(products))
    if s.can_attack:
        r = s.attack_range
        for dy in range(-ATTACK_REACH, ATTACK_REACH + 1):
            for dx in range(-ATTACK_REACH, ATTACK_REACH + 1):
                if not in_attack_range(dx, dy, r):
                    continue
                other = state.unit_at(unit.x + dx, unit.y + dy) if state.in_bounds(unit.x + dx, unit.y + dy) else None
                if other is not None and other.owner in (0, 1) and other.owner != unit.owner:
                    out.append(AtomicAction.attack(dx, dy))
    return out


def legal_actions(state: GameState, player: int) -> set[tuple[int, AtomicAction]]:
    if player not in (0, 1):
        raise ValueError(f"player must be 0 or 1, got {player!r}")
    return {
        (u.id, a)
        for u in state.units.values()
        if u.owner == player
        for a in unit_legal_actions(state, u)
    }


def _issue(state: GameState, unit: Unit, action: AtomicAction) -> None:
    target = target_cell(unit, action)
    if action.action_type in (ActionType.MOVE, ActionType.PRODUCE):
        state.reserved[target] = unit.id
    if action.action_type == ActionType.PRODUCE:
        cost = state.stats[UnitKind(action.produce_kind)].cost
        state.player_resources[unit.owner] -= cost
        state.counters[unit.owner].resources_spent += cost
    duration = action_duration(state, unit, action)
    unit.busy = InProgressAction(action, state.tick, state.tick + duration, target)


def _kill(state: GameState, unit: Unit, events: list[Event]) -> None:
    state.resources_lost += unit.carried
    state.remove_unit(unit.id)
    events.append(Event("killed", unit.id, f"{unit.kind.label} of player {unit.owner} at {unit.pos}"))


def _complete(state: GameState, unit: Unit, events: list[Event]) -> None:
    job = unit.busy
    unit.busy = None
    t = job.action.action_type
    tx, ty = job.target
    if t == ActionType.MOVE:
        del state.reserved[job.target]
        del state.occupancy[unit.pos]
        unit.x, unit.y = tx, ty
        state.occupancy[unit.pos] = unit.id
    elif t == ActionType.PRODUCE:
        del state.reserved[job.target]
        kind = UnitKind(job.action.produce_kind)
        child = state.add_unit(kind, unit.owner, tx, ty)
        state.counters[unit.owner].unit_production += 1
        events.append(Event("spawned", child.id, f"{kind.label} of player {unit.owner} at {child.pos}"))
    elif t == ActionType.HARVEST:
        fld = state.unit_at(tx, ty)
        if fld is None or fld.kind != UnitKind.RESOURCE:
            events.append(Event("failed", unit.id, "mineral field gone"))
            return
        amount = min(state.stats[unit.kind].harvest_amount, fld.resources)
        fld.resources -= amount
        unit.carried += amount
        if fld.resources <= 0:
            state.remove_unit(fld.id)
            events.append(Event("exhausted", fld.id, f"mineral field at {fld.pos}"))
    elif t == ActionType.RETURN:
        base = state.unit_at(tx, ty)
        if base is None or base.kind != UnitKind.BASE or base.owner != unit.owner:
            events.append(Event("failed", unit.id, "base gone"))
            return
        state.player_resources[unit.owner] += unit.carried
        state.counters[unit.owner].resources_harvested += unit.carried
        events.append(Event("deposited", unit.id, f"{unit.carried} for player {unit.owner}"))
        unit.carried = 0
    elif t == ActionType.ATTACK:
        victim = state.unit_at(tx, ty)
        if victim is None or victim.owner not in (0, 1) or victim.owner == unit.owner:
            events.append(Event("missed", unit.id, f"no enemy at {(tx, ty)}"))
            return
        dmg = state.stats[unit.kind].attack_damage
        victim.hp -= dmg
        state.counters[unit.owner].damage_dealt += dmg
        state.counters[victim.owner].damage_taken += dmg
        if victim.hp <= 0:
            _kill(state, victim, events)
    unit.completed = (job.start, int(t))


def step(state: GameState, actions_p0: ActionVector, actions_p1: ActionVector) -> tuple[GameState, list[Event]]:
    """Advance one tick. The input state is left untouched.

    New commands are issued in ascending unit id order across both players,
    each target cell being reserved on issue, so the lower id wins any race
    for a cell. Illegal or conflicting commands are dropped with an event.
    Actions whose duration ends on the new tick then resolve, again by
    ascending unit id.
    """
    for p, vec in ((0, actions_p0), (1, actions_p1)):
        if (vec.width, vec.height) != (state.width, state.height):
            raise EngineError(
                f"player {p} action vector is {vec.width}x{vec.height}, board is {state.width}x{state.height}"
            )
    nxt = state.clone()
    events: list[Event] = []
    submissions = []
    for p, vec in ((0, actions_p0), (1, actions_p1)):
        for cell, action in vec.actions.items():
            y, x = divmod(cell, state.width)
            u = nxt.unit_at(x, y)
            if u is None:
                events.append(Event("dropped", None, f"player {p}: no unit at {(x, y)}"))
            elif u.owner != p:
                events.append(Event("dropped", u.id, f"player {p}: unit not owned"))
            else:
                submissions.append((u.id, action))
    submissions.sort(key=lambda s: s[0])
    claimed: set[tuple[int, int]] = set()
    for uid, action in submissions:
        u = nxt.units[uid]
        reason = check_action(nxt, u, action)
        if reason is not None:
            tgt = target_cell(u, action)
            kind = "conflict" if tgt in claimed else "dropped"
            events.append(Event(kind, uid, f"{action.describe()}: {reason}"))
            continue
        if action.action_type == ActionType.NOOP:
            continue
        _issue(nxt, u, action)
        if action.action_type in (ActionType.MOVE, ActionType.PRODUCE):
            claimed.add(u.busy.target)

    nxt.tick += 1
    due = sorted(uid for uid, u in nxt.units.items() if u.busy is not None and u.busy.end <= nxt.tick)
    for uid in due:
        u = nxt.units.get(uid)
        if u is not None and u.busy is not None:
            _complete(nxt, u, events)
    return nxt, events


def terminal_status(state: GameState, max_ticks: int) -> Status:
    alive = [False, False]
    for u in state.units.values():
        if u.owner in (0, 1):
            alive[u.owner] = True
    if alive[0] and not alive[1]:
        return Status("win", 0)
    if alive[1] and not alive[0]:
        return Status("win", 1)
    if not alive[0] and not alive[1]:
        return DRAW
    if state.tick >= max_ticks:
        return DRAW
    return ONGOING
