from __future__ import annotations

import math
import random
from collections import Counter

import pytest

from conftest import make_state
from skillrts.bots import (
    BIAS,
    BOT_NAMES,
    NOOP_HOLD,
    action_weights,
    barrack_site,
    light_rush,
    random_biased,
    worker_rush,
)
from skillrts.engine import (
    NOOP,
    ActionType,
    ActionVector,
    AtomicAction,
    Direction,
    UnitKind,
    legal_actions,
    load_map,
    step,
    terminal_status,
)

N, E, S, W = Direction.NORTH, Direction.EAST, Direction.SOUTH, Direction.WEST


def commands(state, vec):
    """{unit id: action} for the non-NOOP cells of ``vec``."""
    return {state.unit_at(x, y).id: a for (x, y), a in vec.items()}


def assert_legal(state, player, vec):
    legal = legal_actions(state, player)
    for uid, a in commands(state, vec).items():
        assert (uid, a) in legal


# -- RandomBiasedAI -------------------------------------------------------

def test_weights():
    acts = [NOOP, AtomicAction.move(E), AtomicAction.harvest(S), AtomicAction.attack(1, 0),
            AtomicAction.ret(N), AtomicAction.produce(N, UnitKind.WORKER)]
    assert action_weights(acts) == [1, 1, BIAS, BIAS, BIAS, 1]
    assert BIAS == 5


def test_sampling_frequencies_within_three_sigma():
    state = make_state(3, 3, [("worker", 0, 0, 0), ("resource", -1, 0, 1, 5)])
    rng = random.Random(2024)
    n = 100_000
    counts = Counter()
    for _ in range(n):
        counts[random_biased(state, 0, rng, {}).get(0, 0)] += 1
    expected = {NOOP: 1 / 7, AtomicAction.move(E): 1 / 7, AtomicAction.harvest(S): 5 / 7}
    assert set(counts) == set(expected)
    for action, p in expected.items():
        sigma = math.sqrt(n * p * (1 - p))
        assert abs(counts[action] - n * p) <= 3 * sigma, (action, counts[action])


def test_only_noop_available():
    boxed = make_state(1, 1, [("worker", 0, 0, 0)])
    assert random_biased(boxed, 0, random.Random(0)) == ActionVector.noop(1, 1)


def test_noop_holds_unit():
    state = make_state(3, 3, [("worker", 0, 0, 0), ("resource", -1, 0, 1, 5)])
    holds = {}
    rng = random.Random(0)
    while not holds:
        random_biased(state, 0, rng, holds)
    assert holds == {0: state.tick + NOOP_HOLD}
    # while held, the unit is left alone whatever the rng says
    for _ in range(50):
        assert random_biased(state, 0, rng, holds) == ActionVector.noop(3, 3)
    state.tick += NOOP_HOLD
    seen = {random_biased(state, 0, random.Random(s), dict(holds)).get(0, 0) for s in range(30)}
    assert seen - {NOOP}


def test_unaffordable_second_produce_falls_back_to_noop():
    # two bases with one resource: only one produce can be paid for
    state = make_state(5, 1, [("base", 0, 0, 0), ("base", 0, 4, 0)], resources=(1, 0))
    for seed in range(200):
        vec = random_biased(state, 0, random.Random(seed), {})
        produces = [a for _, a in vec.items() if a.action_type == ActionType.PRODUCE]
        assert len(produces) <= 1


def test_random_is_reproducible(initial):
    def run(seed):
        state, rng, holds, out = load_map("basesWorkers8x8"), random.Random(seed), {}, []
        for _ in range(200):
            vec = random_biased(state, 0, rng, holds)
            assert_legal(state, 0, vec)
            out.append(vec)
            state, _ = step(state, vec, ActionVector.noop(8, 8))
        return out

    assert run(3) == run(3)
    assert run(3) != run(4)


# -- WorkerRush -----------------------------------------------------------

def test_worker_rush_opening(initial):
    vec = worker_rush(initial, 0)
    cmd = commands(initial, vec)
    base = next(u for u in initial.units_of(0) if u.kind == UnitKind.BASE)
    worker = next(u for u in initial.units_of(0) if u.kind == UnitKind.WORKER)
    assert cmd[base.id] == AtomicAction.produce(N, UnitKind.WORKER)
    # worker at (1, 1) heads for the field at (0, 0): north is the first BFS step
    assert cmd[worker.id] == AtomicAction.move(N)
    assert_legal(initial, 0, vec)


def test_worker_rush_three_workers():
    state = make_state(6, 6, [("resource", -1, 0, 0), ("base", 0, 0, 2), ("worker", 0, 1, 0),
                              ("worker", 0, 2, 3), ("worker", 0, 3, 3), ("worker", 1, 5, 5),
                              ("base", 1, 5, 3)], resources=(0, 0))
    cmd = commands(state, worker_rush(state, 0))
    assert cmd[2] == AtomicAction.harvest(W)
    # 3 and 4 approach their nearest enemies (worker at (5,5), base at (5,3))
    assert cmd[3].action_type == ActionType.MOVE
    assert cmd[4] == AtomicAction.move(E)
    assert 1 not in cmd  # base cannot afford a worker


def test_worker_rush_no_enemies_fighters_idle():
    state = make_state(4, 4, [("resource", -1, 0, 0), ("base", 0, 0, 2), ("worker", 0, 1, 0),
                              ("worker", 0, 3, 3)])
    cmd = commands(state, worker_rush(state, 0))
    assert set(cmd) == {2}


# -- LightRush ------------------------------------------------------------

def test_light_rush_harvests_when_poor(initial):
    initial.player_resources[0] = 4
    cmd = commands(initial, light_rush(initial, 0))
    assert list(cmd.values()) == [AtomicAction.move(N)]
    assert all(a.action_type != ActionType.PRODUCE for a in cmd.values())


def test_light_rush_builds_barrack_north_of_base(initial):
    base = next(u for u in initial.units_of(0) if u.kind == UnitKind.BASE)
    assert barrack_site(initial, base) == (2, 0)
    cmd = commands(initial, light_rush(initial, 0))
    worker = next(u for u in initial.units_of(0) if u.kind == UnitKind.WORKER)
    # worker at (1, 1) walks to a cell next to (2, 0)
    assert cmd == {worker.id: AtomicAction.move(N)}


def test_light_rush_barrack_trains_lights():
    state = make_state(5, 5, [("barrack", 0, 2, 2), ("worker", 1, 4, 4)], resources=(5, 0))
    blocked = make_state(5, 5, [("barrack", 0, 2, 2), ("resource", -1, 2, 1), ("worker", 1, 4, 4)],
                         resources=(5, 0))
    assert commands(state, light_rush(state, 0)) == {0: AtomicAction.produce(N, UnitKind.LIGHT)}
    assert commands(blocked, light_rush(blocked, 0)) == {0: AtomicAction.produce(E, UnitKind.LIGHT)}


def test_light_rush_lights_attack():
    state = make_state(6, 6, [("light", 0, 0, 0), ("light", 0, 0, 5), ("worker", 1, 1, 0),
                              ("base", 1, 5, 5)])
    cmd = commands(state, light_rush(state, 0))
    assert cmd[0] == AtomicAction.attack(1, 0)
    assert cmd[1] == AtomicAction.move(E)


# -- whole matches --------------------------------------------------------

@pytest.mark.parametrize("p0, p1", [("WorkerRush", "LightRush"), ("LightRush", "random"), ("random", "WorkerRush")])
def test_bot_soak(p0, p1):
    rng = random.Random(11)
    holds = {}
    fns = {"WorkerRush": worker_rush, "LightRush": light_rush,
           "random": lambda s, p: random_biased(s, p, rng, holds)}
    state = load_map("basesWorkers8x8")
    while not terminal_status(state, 2000).over:
        vecs = [fns[p0](state, 0), fns[p1](state, 1)]
        for p in (0, 1):
            assert_legal(state, p, vecs[p])
        state, events = step(state, *vecs)
        cells = [u.pos for u in state.units.values()]
        assert len(cells) == len(set(cells))
        assert not [e for e in events if e.kind == "dropped"]
    assert state.tick <= 2000


def test_scripted_bots_are_deterministic():
    def run():
        state, hashes = load_map("basesWorkers8x8"), []
        while not terminal_status(state, 2000).over:
            state, _ = step(state, worker_rush(state, 0), light_rush(state, 1))
            hashes.append(state.state_hash())
        return hashes

    assert run() == run()


def test_bot_names():
    assert BOT_NAMES[:3] == ("RandomBiasedAI", "WorkerRush", "LightRush")
