"""Single-unit behaviours shared by the skill policies and the scripted bots.

Each helper returns the action the unit should take *this tick*, or None
when it has nothing useful to do (already in place, or no path). The
caller re-asks every tick, so nothing here is cached across ticks.
"""
from __future__ import annotations

from .engine import (
    ATTACK_WINDOW,
    AtomicAction,
    GameState,
    Unit,
    UnitKind,
)
from .engine.rules import in_attack_range
from .pathing import adjacent_cells, direction_to, first_step, nearest

_REACH = ATTACK_WINDOW // 2


def move_toward(state: GameState, unit: Unit, goals) -> AtomicAction | None:
    d = first_step(state, unit.pos, goals)
    return None if d is None else AtomicAction.move(d)


def firing_cells(state: GameState, unit: Unit, target: Unit) -> list[tuple[int, int]]:
    """Cells from which ``unit`` could hit ``target``."""
    r = state.stats[unit.kind].attack_range
    cells = []
    for dy in range(-_REACH, _REACH + 1):
        for dx in range(-_REACH, _REACH + 1):
            if in_attack_range(dx, dy, r):
                cell = (target.x + dx, target.y + dy)
                if state.in_bounds(*cell):
                    cells.append(cell)
    return cells


def attack_or_approach(state: GameState, unit: Unit, target: Unit) -> AtomicAction | None:
    dx, dy = target.x - unit.x, target.y - unit.y
    if in_attack_range(dx, dy, state.stats[unit.kind].attack_range):
        return AtomicAction.attack(dx, dy)
    return move_toward(state, unit, firing_cells(state, unit, target))


def nearest_enemy(state: GameState, unit: Unit, kind: UnitKind | None = None) -> Unit | None:
    enemy = 1 - unit.owner
    return nearest(
        (u for u in state.units.values() if u.owner == enemy and (kind is None or u.kind == kind)),
        unit.pos,
    )


def harvest_step(state: GameState, worker: Unit, field: Unit | None) -> AtomicAction | None:
    """One step of the move, harvest, move, return loop.

    A loaded worker heads for its nearest base first; an empty one heads
    for ``field`` (skipped when None).
    """
    if worker.carried > 0:
        base = nearest(state.units_of_kind(worker.owner, UnitKind.BASE), worker.pos)
        if base is None:
            return None
        d = direction_to(worker.pos, base.pos)
        if d is not None:
            return AtomicAction.ret(d)
        return move_toward(state, worker, adjacent_cells(state, base.pos))
    if field is None:
        return None
    d = direction_to(worker.pos, field.pos)
    if d is not None:
        return AtomicAction.harvest(d)
    return move_toward(state, worker, adjacent_cells(state, field.pos))


def build_step(state: GameState, worker: Unit, kind: UnitKind, loc: tuple[int, int]) -> AtomicAction | None:
    """Walk next to ``loc`` then start producing ``kind`` onto it."""
    d = direction_to(worker.pos, loc)
    if d is not None:
        if state.is_free(*loc) and state.player_resources[worker.owner] >= state.stats[kind].cost:
            return AtomicAction.produce(d, kind)
        return None
    return move_toward(state, worker, adjacent_cells(state, loc))

