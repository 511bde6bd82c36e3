"""Scripted baseline opponents acting directly in the atomic action space."""
from __future__ import annotations

import random

from .engine import (
    ActionType,
    ActionVector,
    AtomicAction,
    NOOP,
    Direction,
    GameState,
    UnitKind,
    check_action,
    unit_legal_actions,
)
from .engine.rules import target_cell
from .pathing import adjacent_cells, nearest
from .tactics import attack_or_approach, build_step, harvest_step, nearest_enemy

BIASED_TYPES = (ActionType.ATTACK, ActionType.HARVEST, ActionType.RETURN)
BIAS = 5
# ticks a unit stays idle after drawing NOOP, as in the reference bot
NOOP_HOLD = 10


def action_weights(actions) -> list[int]:
    return [BIAS if a.action_type in BIASED_TYPES else 1 for a in actions]


def random_biased(
    state: GameState,
    player: int,
    rng: random.Random,
    holds: dict[int, int] | None = None,
) -> ActionVector:
    """Sample each idle unit's action, attack/harvest/return weighted x5.

    Drawing NOOP parks the unit for ``NOOP_HOLD`` ticks; ``holds`` carries
    those deadlines (unit id -> tick) between calls and is updated in place.
    A produce the stockpile can no longer cover after earlier picks this
    tick falls back to a held NOOP.
    """
    holds = {} if holds is None else holds
    vec = ActionVector.noop(state.width, state.height)
    budget = state.player_resources[player]
    for uid in sorted(u.id for u in state.units_of(player)):
        u = state.units[uid]
        if holds.get(uid, -1) > state.tick:
            continue
        actions = unit_legal_actions(state, u)
        if not actions:
            continue
        a = rng.choices(actions, weights=action_weights(actions))[0]
        if a.action_type == ActionType.PRODUCE:
            cost = state.stats[UnitKind(a.produce_kind)].cost
            if cost > budget:
                a = NOOP
            else:
                budget -= cost
        if a.action_type == ActionType.NOOP:
            holds[uid] = state.tick + NOOP_HOLD
        vec.set(u.x, u.y, a)
    for uid in [k for k in holds if k not in state.units]:
        del holds[uid]
    return vec


class _Orders:
    """Collects one command per unit while keeping cells and budget consistent."""

    def __init__(self, state: GameState, player: int):
        self.state = state
        self.vec = ActionVector.noop(state.width, state.height)
        self.budget = state.player_resources[player]
        self.targets: set[tuple[int, int]] = set()

    def give(self, unit, action: AtomicAction | None) -> bool:
        if action is None or unit.busy is not None:
            return False
        if check_action(self.state, unit, action) is not None:
            return False
        t = action.action_type
        cell = target_cell(unit, action)
        if t in (ActionType.MOVE, ActionType.PRODUCE):
            if cell in self.targets:
                return False
        if t == ActionType.PRODUCE:
            cost = self.state.stats[UnitKind(action.produce_kind)].cost
            if cost > self.budget:
                return False
            self.budget -= cost
        if t in (ActionType.MOVE, ActionType.PRODUCE):
            self.targets.add(cell)
        self.vec.set(unit.x, unit.y, action)
        return True


def _produce_anywhere(orders: _Orders, producer, kind: UnitKind) -> bool:
    for d in Direction:
        if orders.give(producer, AtomicAction.produce(d, kind)):
            return True
    return False


def _nearest_field(state: GameState, unit):
    return nearest(state.minerals(), unit.pos)


def worker_rush(state: GameState, player: int) -> ActionVector:
    """Bases train workers nonstop; the lowest-id worker harvests, the rest attack."""
    orders = _Orders(state, player)
    for base in sorted(state.units_of_kind(player, UnitKind.BASE), key=lambda u: u.id):
        if base.busy is None:
            _produce_anywhere(orders, base, UnitKind.WORKER)
    workers = sorted(state.units_of_kind(player, UnitKind.WORKER), key=lambda u: u.id)
    if workers:
        harvester, *fighters = workers
        orders.give(harvester, harvest_step(state, harvester, _nearest_field(state, harvester)))
        for w in fighters:
            target = nearest_enemy(state, w)
            if target is not None:
                orders.give(w, attack_or_approach(state, w, target))
    _fight(state, player, orders, (UnitKind.LIGHT, UnitKind.HEAVY, UnitKind.RANGED))
    return orders.vec


def barrack_site(state: GameState, base) -> tuple[int, int] | None:
    """First free cell next to ``base`` in north, east, south, west order."""
    for cell in adjacent_cells(state, base.pos):
        if state.is_free(*cell):
            return cell
    return None


def light_rush(state: GameState, player: int) -> ActionVector:
    """One harvesting worker, one barrack, then light units sent at the nearest enemy."""
    orders = _Orders(state, player)
    stats = state.stats
    workers = sorted(state.units_of_kind(player, UnitKind.WORKER), key=lambda u: u.id)
    bases = sorted(state.units_of_kind(player, UnitKind.BASE), key=lambda u: u.id)
    barracks = sorted(state.units_of_kind(player, UnitKind.BARRACK), key=lambda u: u.id)
    building = any(
        w.busy is not None
        and w.busy.action.action_type == ActionType.PRODUCE
        and w.busy.action.produce_kind == UnitKind.BARRACK
        for w in workers
    )

    for b in barracks:
        if b.busy is None:
            _produce_anywhere(orders, b, UnitKind.LIGHT)

    if not workers:
        for base in bases:
            if base.busy is None and _produce_anywhere(orders, base, UnitKind.WORKER):
                break
    else:
        harvester = workers[0]
        wants_barrack = (
            not barracks and not building and bases
            and orders.budget >= stats[UnitKind.BARRACK].cost
        )
        site = barrack_site(state, bases[0]) if wants_barrack else None
        if site is not None:
            orders.give(harvester, build_step(state, harvester, UnitKind.BARRACK, site))
        else:
            orders.give(harvester, harvest_step(state, harvester, _nearest_field(state, harvester)))

    _fight(state, player, orders, (UnitKind.LIGHT, UnitKind.HEAVY, UnitKind.RANGED))
    return orders.vec


def _fight(state, player, orders, kinds) -> None:
    for u in sorted((u for u in state.units_of(player) if u.kind in kinds), key=lambda u: u.id):
        target = nearest_enemy(state, u)
        if target is not None:
            orders.give(u, attack_or_approach(state, u, target))


def passive(state: GameState, player: int) -> ActionVector:
    return ActionVector.noop(state.width, state.height)


BOT_NAMES = ("RandomBiasedAI", "WorkerRush", "LightRush", "Passive")
