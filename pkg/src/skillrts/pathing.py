"""Breadth-first pathing and nearest-unit selection on the grid."""
from __future__ import annotations

from collections import deque

from .engine import DIRECTION_DELTAS, GameState, Unit

# north, east, south, west
_ORDER = tuple(DIRECTION_DELTAS.items())


def manhattan(a: tuple[int, int], b: tuple[int, int]) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def nearest(units, origin: tuple[int, int]) -> Unit | None:
    """Closest unit by Manhattan distance; ties go to the lowest id."""
    best = None
    for u in units:
        key = (manhattan(u.pos, origin), u.id)
        if best is None or key < best[0]:
            best = (key, u)
    return None if best is None else best[1]


def first_step(state: GameState, start: tuple[int, int], goals) -> int | None:
    """Direction of the first move on a shortest path from ``start`` to any goal cell.

    Units and reserved cells block movement; goal cells themselves must be
    free to be entered. Returns None when ``start`` is a goal or no goal is
    reachable.
    """
    goals = set(goals)
    if not goals or start in goals:
        return None
    seen = {start}
    queue = deque()
    for d, (dx, dy) in _ORDER:
        cell = (start[0] + dx, start[1] + dy)
        if state.is_free(*cell):
            if cell in goals:
                return int(d)
            seen.add(cell)
            queue.append((cell, d))
    while queue:
        (x, y), d0 = queue.popleft()
        for _, (dx, dy) in _ORDER:
            cell = (x + dx, y + dy)
            if cell in seen or not state.is_free(*cell):
                continue
            if cell in goals:
                return int(d0)
            seen.add(cell)
            queue.append((cell, d0))
    return None


def path_length(state: GameState, start: tuple[int, int], goals) -> int | None:
    """Number of moves on a shortest path to any goal (0 if already there)."""
    goals = set(goals)
    if start in goals:
        return 0
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        (x, y), n = queue.popleft()
        for _, (dx, dy) in _ORDER:
            cell = (x + dx, y + dy)
            if cell in seen or not state.is_free(*cell):
                continue
            if cell in goals:
                return n + 1
            seen.add(cell)
            queue.append((cell, n + 1))
    return None


def adjacent_cells(state: GameState, pos: tuple[int, int]) -> list[tuple[int, int]]:
    return [
        (pos[0] + dx, pos[1] + dy)
        for _, (dx, dy) in _ORDER
        if state.in_bounds(pos[0] + dx, pos[1] + dy)
    ]


def direction_to(src: tuple[int, int], dst: tuple[int, int]) -> int | None:
    """Direction index from ``src`` to an orthogonally adjacent ``dst``."""
    for d, (dx, dy) in _ORDER:
        if (src[0] + dx, src[1] + dy) == dst:
            return int(d)
    return None
