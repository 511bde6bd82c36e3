"""Tensor and text views of a game state from one player's perspective."""
from __future__ import annotations

import json

import numpy as np

from .engine import GameState, UnitKind

# plane layout: hp(5) resources(5) owner(3) unit type(8) current action(6)
HP_PLANES = slice(0, 5)
RESOURCE_PLANES = slice(5, 10)
OWNER_PLANES = slice(10, 13)
TYPE_PLANES = slice(13, 21)
ACTION_PLANES = slice(21, 27)
GROUPS = (HP_PLANES, RESOURCE_PLANES, OWNER_PLANES, TYPE_PLANES, ACTION_PLANES)
N_PLANES = 27

OWNER_SELF, OWNER_NONE, OWNER_ENEMY = 0, 1, 2


def _bucket(v: int) -> int:
    return min(max(v, 0), 4)


def build_tensor(state: GameState, player: int) -> np.ndarray:
    """``(h, w, 27)`` one-hot planes; owner plane 0 is always ``player``."""
    obs = np.zeros((state.height, state.width, N_PLANES), dtype=np.uint8)
    obs[:, :, HP_PLANES.start] = 1
    obs[:, :, RESOURCE_PLANES.start] = 1
    obs[:, :, OWNER_PLANES.start + OWNER_NONE] = 1
    obs[:, :, TYPE_PLANES.start] = 1
    obs[:, :, ACTION_PLANES.start] = 1
    for u in state.units.values():
        cell = obs[u.y, u.x]
        cell[:] = 0
        cell[HP_PLANES.start + _bucket(u.hp)] = 1
        amount = u.resources if u.kind == UnitKind.RESOURCE else u.carried
        cell[RESOURCE_PLANES.start + _bucket(amount)] = 1
        if u.owner == player:
            owner = OWNER_SELF
        elif u.owner == 1 - player:
            owner = OWNER_ENEMY
        else:
            owner = OWNER_NONE
        cell[OWNER_PLANES.start + owner] = 1
        cell[TYPE_PLANES.start + 1 + int(u.kind)] = 1
        act = 0 if u.busy is None else int(u.busy.action.action_type)
        cell[ACTION_PLANES.start + act] = 1
    return obs


def decode_tensor(obs: np.ndarray) -> dict[tuple[int, int], dict]:
    """Per occupied cell: bucketed hp and resources, owner class, kind and action class."""
    out = {}
    for y, x in zip(*np.nonzero(obs[:, :, TYPE_PLANES.start] == 0)):
        cell = obs[y, x]
        out[(int(x), int(y))] = {
            "hp": int(np.argmax(cell[HP_PLANES])),
            "resources": int(np.argmax(cell[RESOURCE_PLANES])),
            "owner": int(np.argmax(cell[OWNER_PLANES])),
            "kind": UnitKind(int(np.argmax(cell[TYPE_PLANES])) - 1),
            "action": int(np.argmax(cell[ACTION_PLANES])),
        }
    return out


def tensor_records(obs: np.ndarray):
    """Line-delimited JSON records (one per nonempty cell) for debugging dumps."""
    for (x, y), rec in sorted(decode_tensor(obs).items(), key=lambda kv: (kv[0][1], kv[0][0])):
        planes = [int(i) for i in np.flatnonzero(obs[y, x])]
        yield json.dumps({"x": x, "y": y, "planes": planes, **{**rec, "kind": rec["kind"].label}})


SIDE_NAMES = ("BLUE", "RED")

FINAL_BATTLE_HINT = (
    "You have no resources left and no mineral fields remain: "
    "send every unit to attack enemy units and buildings."
)


def _unit_line(state: GameState, u) -> str:
    parts = [f"id={u.id}", u.kind.label, f"at ({u.x}, {u.y})", f"hp {u.hp}/{state.stats[u.kind].max_hp}"]
    if u.kind == UnitKind.WORKER:
        parts.append(f"carrying {u.carried}")
    if u.busy is None:
        parts.append("idle")
    else:
        parts.append(f"doing {u.busy.action.describe()} until tick {u.busy.end}")
    return "- " + ", ".join(parts)


def to_text(state: GameState, player: int) -> str:
    """Fixed sectioned rendering: header, minerals, own units, enemy units, hints."""
    enemy = 1 - player
    lines = [
        f"Tick: {state.tick}",
        f"Map size: {state.width}x{state.height} (x grows east, y grows south, origin top-left)",
        f"You are player {player} ({SIDE_NAMES[player]}).",
        f"Your resources: {state.player_resources[player]}",
        f"Enemy resources: {state.player_resources[enemy]}",
        "",
        "Mineral fields:",
    ]
    minerals = sorted(state.minerals(), key=lambda u: (u.y, u.x))
    if minerals:
        lines += [f"- ({u.x}, {u.y}) with {u.resources} resources left" for u in minerals]
    else:
        lines.append("- none")
    for title, owner in (("Your units:", player), ("Enemy units:", enemy)):
        lines += ["", title]
        units = sorted(state.units_of(owner), key=lambda u: u.id)
        lines += [_unit_line(state, u) for u in units] if units else ["- none"]
    lines += ["", "Hints:"]
    if state.player_resources[player] == 0 and not minerals:
        lines.append(f"- {FINAL_BATTLE_HINT}")
    else:
        lines.append("- none")
    return "\n".join(lines) + "\n"
