"""Enumerations and value types shared by the engine and everything above it."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum


class UnitKind(IntEnum):
    # Order matches the produce-type parameter of the action encoding.
    RESOURCE = 0
    BASE = 1
    BARRACK = 2
    WORKER = 3
    LIGHT = 4
    HEAVY = 5
    RANGED = 6

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, name: str) -> "UnitKind":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown unit kind {name!r}") from None


MOBILE_KINDS = (UnitKind.WORKER, UnitKind.LIGHT, UnitKind.HEAVY, UnitKind.RANGED)
BUILDING_KINDS = (UnitKind.BASE, UnitKind.BARRACK)


class ActionType(IntEnum):
    NOOP = 0
    MOVE = 1
    HARVEST = 2
    RETURN = 3
    PRODUCE = 4
    ATTACK = 5

    @property
    def label(self) -> str:
        return self.name.lower()


class Direction(IntEnum):
    NORTH = 0
    EAST = 1
    SOUTH = 2
    WEST = 3

    @property
    def label(self) -> str:
        return self.name.lower()

    @property
    def delta(self) -> tuple[int, int]:
        return DIRECTION_DELTAS[self]

    @classmethod
    def parse(cls, name: str) -> "Direction":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown direction {name!r}") from None


# (dx, dy) with origin top-left: north decreases y.
DIRECTION_DELTAS = {
    Direction.NORTH: (0, -1),
    Direction.EAST: (1, 0),
    Direction.SOUTH: (0, 1),
    Direction.WEST: (-1, 0),
}

NEUTRAL = -1
PLAYERS = (0, 1)

ATTACK_WINDOW = 7
ATTACK_REACH = ATTACK_WINDOW // 2


def attack_offset(dx: int, dy: int) -> int:
    """Index of relative cell (dx, dy) inside the 7x7 attack window."""
    if abs(dx) > ATTACK_REACH or abs(dy) > ATTACK_REACH:
        raise ValueError(f"offset ({dx}, {dy}) outside the attack window")
    return (dy + ATTACK_REACH) * ATTACK_WINDOW + (dx + ATTACK_REACH)


def attack_delta(offset: int) -> tuple[int, int]:
    if not 0 <= offset < ATTACK_WINDOW * ATTACK_WINDOW:
        raise ValueError(f"attack offset {offset} out of range")
    dy, dx = divmod(offset, ATTACK_WINDOW)
    return dx - ATTACK_REACH, dy - ATTACK_REACH


@dataclass(frozen=True)
class AtomicAction:
    """One unit's command for one tick.

    Fields that do not apply to ``action_type`` must stay zero, so two
    actions compare equal exactly when their encodings do.
    """

    action_type: ActionType = ActionType.NOOP
    direction: int = 0
    produce_kind: int = 0
    attack_offset: int = 0

    def __post_init__(self):
        t = ActionType(self.action_type)
        object.__setattr__(self, "action_type", t)
        if not 0 <= self.direction <= 3:
            raise ValueError(f"direction {self.direction} out of range")
        if not 0 <= self.produce_kind <= 6:
            raise ValueError(f"produce kind {self.produce_kind} out of range")
        if not 0 <= self.attack_offset < ATTACK_WINDOW * ATTACK_WINDOW:
            raise ValueError(f"attack offset {self.attack_offset} out of range")
        uses_dir = t in (ActionType.MOVE, ActionType.HARVEST, ActionType.RETURN, ActionType.PRODUCE)
        if (not uses_dir and self.direction) or (t != ActionType.PRODUCE and self.produce_kind) or (
            t != ActionType.ATTACK and self.attack_offset
        ):
            raise ValueError(f"parameters irrelevant to {t.label} must be zero: {self}")

    @classmethod
    def move(cls, d: int) -> "AtomicAction":
        return cls(ActionType.MOVE, direction=int(d))

    @classmethod
    def harvest(cls, d: int) -> "AtomicAction":
        return cls(ActionType.HARVEST, direction=int(d))

    @classmethod
    def ret(cls, d: int) -> "AtomicAction":
        return cls(ActionType.RETURN, direction=int(d))

    @classmethod
    def produce(cls, d: int, kind: int) -> "AtomicAction":
        return cls(ActionType.PRODUCE, direction=int(d), produce_kind=int(kind))

    @classmethod
    def attack(cls, dx: int, dy: int) -> "AtomicAction":
        return cls(ActionType.ATTACK, attack_offset=attack_offset(dx, dy))

    def to_row(self) -> list[int]:
        """Pre-one-hot 7-component row: type, move, harvest, return, produce dir, produce type, attack."""
        row = [int(self.action_type), 0, 0, 0, 0, 0, 0]
        t = self.action_type
        if t == ActionType.MOVE:
            row[1] = self.direction
        elif t == ActionType.HARVEST:
            row[2] = self.direction
        elif t == ActionType.RETURN:
            row[3] = self.direction
        elif t == ActionType.PRODUCE:
            row[4] = self.direction
            row[5] = self.produce_kind
        elif t == ActionType.ATTACK:
            row[6] = self.attack_offset
        return row

    @classmethod
    def from_row(cls, row) -> "AtomicAction":
        t, mv, hv, rt, pd, pk, at = (int(v) for v in row)
        t = ActionType(t)
        # irrelevant slots must be zero for the row to be canonical
        expected_zero = {
            ActionType.NOOP: (mv, hv, rt, pd, pk, at),
            ActionType.MOVE: (hv, rt, pd, pk, at),
            ActionType.HARVEST: (mv, rt, pd, pk, at),
            ActionType.RETURN: (mv, hv, pd, pk, at),
            ActionType.PRODUCE: (mv, hv, rt, at),
            ActionType.ATTACK: (mv, hv, rt, pd, pk),
        }[t]
        if any(expected_zero):
            raise ValueError(f"non-canonical action row {list(row)}")
        if t == ActionType.MOVE:
            return cls.move(mv)
        if t == ActionType.HARVEST:
            return cls.harvest(hv)
        if t == ActionType.RETURN:
            return cls.ret(rt)
        if t == ActionType.PRODUCE:
            return cls.produce(pd, pk)
        if t == ActionType.ATTACK:
            return cls(ActionType.ATTACK, attack_offset=at)
        return NOOP

    def describe(self) -> str:
        t = self.action_type
        if t == ActionType.NOOP:
            return "noop"
        if t == ActionType.PRODUCE:
            return f"produce {UnitKind(self.produce_kind).label} {Direction(self.direction).label}"
        if t == ActionType.ATTACK:
            dx, dy = attack_delta(self.attack_offset)
            return f"attack ({dx:+d}, {dy:+d})"
        return f"{t.label} {Direction(self.direction).label}"


NOOP = AtomicAction()


@dataclass
class ActionVector:
    """Per-cell action assignment for one player on a ``width`` x ``height`` board.

    Only non-NOOP cells are stored; cell index is ``y * width + x``.
    """

    width: int
    height: int
    actions: dict[int, AtomicAction] = field(default_factory=dict)

    def __post_init__(self):
        self.actions = {c: a for c, a in self.actions.items() if a != NOOP}
        for c in self.actions:
            if not 0 <= c < self.width * self.height:
                raise ValueError(f"cell {c} outside {self.width}x{self.height} board")

    @classmethod
    def noop(cls, width: int, height: int) -> "ActionVector":
        return cls(width, height)

    def cell(self, x: int, y: int) -> int:
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise ValueError(f"({x}, {y}) outside {self.width}x{self.height} board")
        return y * self.width + x

    def set(self, x: int, y: int, action: AtomicAction) -> None:
        c = self.cell(x, y)
        if action == NOOP:
            self.actions.pop(c, None)
        else:
            self.actions[c] = action

    def get(self, x: int, y: int) -> AtomicAction:
        return self.actions.get(self.cell(x, y), NOOP)

    def items(self):
        """Yield ``((x, y), action)`` for non-NOOP cells in row-major order."""
        for c in sorted(self.actions):
            y, x = divmod(c, self.width)
            yield (x, y), self.actions[c]

    def rows(self) -> list[list[int]]:
        out = [[0] * 7 for _ in range(self.width * self.height)]
        for c, a in self.actions.items():
            out[c] = a.to_row()
        return out

    def sparse_rows(self) -> dict[int, list[int]]:
        return {c: self.actions[c].to_row() for c in sorted(self.actions)}

    @classmethod
    def from_sparse_rows(cls, width: int, height: int, rows: dict) -> "ActionVector":
        return cls(width, height, {int(c): AtomicAction.from_row(r) for c, r in rows.items()})

    def __len__(self) -> int:
        return len(self.actions)


@dataclass(frozen=True)
class UnitStats:
    kind: UnitKind
    max_hp: int
    cost: int = 0
    build_time: int = 0
    move_time: int = 0
    harvest_time: int = 0
    return_time: int = 0
    attack_time: int = 0
    attack_damage: int = 0
    attack_range: int = 0
    harvest_amount: int = 0
    producible_by: UnitKind | None = None

    @property
    def can_move(self) -> bool:
        return self.move_time > 0

    @property
    def can_attack(self) -> bool:
        return self.attack_time > 0 and self.attack_range > 0

    @property
    def can_harvest(self) -> bool:
        return self.harvest_time > 0 and self.harvest_amount > 0


@dataclass
class MatchCounters:
    resources_harvested: int = 0
    resources_spent: int = 0
    unit_production: int = 0
    damage_dealt: int = 0
    damage_taken: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "resources_harvested": self.resources_harvested,
            "resources_spent": self.resources_spent,
            "unit_production": self.unit_production,
            "damage_dealt": self.damage_dealt,
            "damage_taken": self.damage_taken,
        }

    def copy(self) -> "MatchCounters":
        return MatchCounters(**self.as_dict())
