"""Game state, unit stats loading and the map file format."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import yaml

from .types import NEUTRAL, AtomicAction, MatchCounters, UnitKind, UnitStats

MAP_FORMAT = "skillrts-map"
MAP_VERSION = 1

StatsTable = dict[UnitKind, UnitStats]


class MapError(ValueError):
    pass


class StatsError(ValueError):
    pass


def _data_path(*parts: str):
    node = resources.files("skillrts").joinpath("data")
    for part in parts:
        node = node.joinpath(part)
    return node


def load_stats(path: str | Path | None = None) -> StatsTable:
    """Load a unit stats table; the bundled reference table when ``path`` is None."""
    if path is None:
        text = _data_path("unit_stats.yaml").read_text()
    else:
        text = Path(path).read_text()
    return parse_stats(yaml.safe_load(text))


def parse_stats(doc: dict) -> StatsTable:
    """Validate a stats document (``{"kinds": {name: fields}}``) into a table."""
    if not isinstance(doc, dict) or not isinstance(doc.get("kinds"), dict):
        raise StatsError("stats document needs a 'kinds' mapping")
    table: StatsTable = {}
    for name, spec in doc["kinds"].items():
        kind = UnitKind.parse(name)
        spec = dict(spec or {})
        producer = spec.pop("producible_by", None)
        try:
            stats = UnitStats(
                kind=kind,
                producible_by=UnitKind.parse(producer) if producer else None,
                **spec,
            )
        except TypeError as exc:
            raise StatsError(f"bad stats for {name}: {exc}") from None
        _check_stats(stats)
        table[kind] = stats
    missing = set(UnitKind) - set(table)
    if missing:
        raise StatsError(f"stats missing kinds: {sorted(k.label for k in missing)}")
    return table


def dump_stats(table: StatsTable) -> dict:
    """Inverse of :func:`parse_stats`; fields equal to their defaults are kept."""
    kinds = {}
    for kind in sorted(table, key=int):
        entry = dict(vars(table[kind]))
        entry.pop("kind")
        producer = entry.pop("producible_by")
        if producer is not None:
            entry["producible_by"] = producer.label
        kinds[kind.label] = entry
    return {"version": 1, "kinds": kinds}


def _check_stats(s: UnitStats) -> None:
    if s.max_hp < 1:
        raise StatsError(f"{s.kind.label}: max_hp must be >= 1")
    if s.cost < 0:
        raise StatsError(f"{s.kind.label}: cost must be >= 0")
    for name in ("build_time", "move_time", "harvest_time", "return_time", "attack_time"):
        if getattr(s, name) < 0:
            raise StatsError(f"{s.kind.label}: {name} must be >= 0")
    if s.producible_by is not None and s.build_time < 1:
        raise StatsError(f"{s.kind.label}: producible kinds need build_time >= 1")
    if s.attack_time > 0 and not 1 <= s.attack_range <= 3:
        raise StatsError(f"{s.kind.label}: attack_range must lie in [1, 3]")
    if s.harvest_time > 0 and s.return_time < 1:
        raise StatsError(f"{s.kind.label}: harvesters need return_time >= 1")


@dataclass
class InProgressAction:
    action: AtomicAction
    start: int
    end: int
    # cell the action acts on (move destination, produce spawn cell, ...)
    target: tuple[int, int] | None = None


@dataclass
class Unit:
    id: int
    kind: UnitKind
    owner: int
    x: int
    y: int
    hp: int
    carried: int = 0
    resources: int = 0
    busy: InProgressAction | None = None
    # (start tick, action type) of the last action that ran to completion
    completed: tuple[int, int] | None = None

    @property
    def pos(self) -> tuple[int, int]:
        return (self.x, self.y)

    def copy(self) -> "Unit":
        return Unit(
            self.id, self.kind, self.owner, self.x, self.y, self.hp,
            self.carried, self.resources, self.busy, self.completed,
        )

    def key(self) -> tuple:
        b = self.busy
        busy = None if b is None else (tuple(b.action.to_row()), b.start, b.end, b.target)
        return (self.id, int(self.kind), self.owner, self.x, self.y, self.hp,
                self.carried, self.resources, busy, self.completed)


@dataclass
class GameState:
    width: int
    height: int
    units: dict[int, Unit]
    player_resources: list[int]
    stats: StatsTable
    tick: int = 0
    counters: list[MatchCounters] = field(default_factory=lambda: [MatchCounters(), MatchCounters()])
    next_id: int = 0
    # carried resources destroyed together with a dying worker
    resources_lost: int = 0
    occupancy: dict[tuple[int, int], int] = field(default_factory=dict)
    reserved: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.occupancy:
            for u in self.units.values():
                if u.pos in self.occupancy:
                    raise MapError(f"units {self.occupancy[u.pos]} and {u.id} share cell {u.pos}")
                self.occupancy[u.pos] = u.id
        self.next_id = max(self.next_id, max(self.units, default=-1) + 1)

    # -- queries -----------------------------------------------------------
    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def unit_at(self, x: int, y: int) -> Unit | None:
        uid = self.occupancy.get((x, y))
        return None if uid is None else self.units[uid]

    def is_free(self, x: int, y: int) -> bool:
        """In bounds, unoccupied, and not reserved by an in-progress move or produce."""
        return (
            0 <= x < self.width
            and 0 <= y < self.height
            and (x, y) not in self.occupancy
            and (x, y) not in self.reserved
        )

    def units_of(self, player: int) -> list[Unit]:
        return [u for u in self.units.values() if u.owner == player]

    def units_of_kind(self, player: int, kind: UnitKind) -> list[Unit]:
        return [u for u in self.units.values() if u.owner == player and u.kind == kind]

    def minerals(self) -> list[Unit]:
        return [u for u in self.units.values() if u.kind == UnitKind.RESOURCE]

    def field_total(self) -> int:
        return sum(u.resources for u in self.minerals())

    def carried_total(self) -> int:
        return sum(u.carried for u in self.units.values())

    # -- mutation helpers used by the engine ---------------------------------
    def add_unit(self, kind: UnitKind, owner: int, x: int, y: int, *, hp: int | None = None,
                 resources: int = 0, carried: int = 0) -> Unit:
        if (x, y) in self.occupancy:
            raise MapError(f"cell ({x}, {y}) already occupied")
        u = Unit(self.next_id, kind, owner, x, y, self.stats[kind].max_hp if hp is None else hp,
                 carried=carried, resources=resources)
        self.units[u.id] = u
        self.occupancy[u.pos] = u.id
        self.next_id += 1
        return u

    def remove_unit(self, uid: int) -> Unit:
        u = self.units.pop(uid)
        del self.occupancy[u.pos]
        if u.busy is not None and u.busy.target is not None and self.reserved.get(u.busy.target) == uid:
            del self.reserved[u.busy.target]
        return u

    def clone(self) -> "GameState":
        units = {uid: u.copy() for uid, u in self.units.items()}
        return GameState(
            self.width, self.height, units, list(self.player_resources), self.stats,
            tick=self.tick,
            counters=[c.copy() for c in self.counters],
            next_id=self.next_id,
            resources_lost=self.resources_lost,
            occupancy=dict(self.occupancy),
            reserved=dict(self.reserved),
        )

    def state_hash(self) -> str:
        payload = repr((
            self.tick, self.width, self.height, tuple(self.player_resources),
            tuple(tuple(c.as_dict().values()) for c in self.counters),
            self.resources_lost,
            tuple(self.units[uid].key() for uid in sorted(self.units)),
        ))
        return hashlib.sha256(payload.encode()).hexdigest()[:32]


def load_map(document: dict | str | Path, stats: StatsTable | None = None) -> GameState:
    """Build a tick-0 state from a map document (dict) or a JSON map file.

    A bare name such as ``"basesWorkers8x8"`` resolves to a bundled map.
    """
    if not isinstance(document, dict):
        document = read_map_document(document)
    if stats is None:
        stats = load_stats()
    doc = document
    if doc.get("format", MAP_FORMAT) != MAP_FORMAT:
        raise MapError(f"not a {MAP_FORMAT} document: format={doc.get('format')!r}")
    if doc.get("version", MAP_VERSION) != MAP_VERSION:
        raise MapError(f"unsupported map version {doc.get('version')!r}")
    try:
        w, h = int(doc["width"]), int(doc["height"])
    except (KeyError, TypeError, ValueError):
        raise MapError("map needs integer 'width' and 'height'") from None
    if w < 2 or h < 2:
        raise MapError(f"map must be at least 2x2, got {w}x{h}")
    stock = doc.get("resources", [0, 0])
    if not (isinstance(stock, list) and len(stock) == 2 and all(isinstance(v, int) and v >= 0 for v in stock)):
        raise MapError("'resources' must be two nonnegative integers")

    state = GameState(w, h, {}, list(stock), stats)
    for i, spec in enumerate(doc.get("units", [])):
        try:
            kind = UnitKind.parse(spec["kind"])
            x, y = int(spec["x"]), int(spec["y"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MapError(f"unit #{i}: {exc}") from None
        if not state.in_bounds(x, y):
            raise MapError(f"unit #{i} at ({x}, {y}) outside {w}x{h} map")
        if kind == UnitKind.RESOURCE:
            owner = NEUTRAL
            amount = int(spec.get("resources", 0))
            if amount < 1:
                raise MapError(f"unit #{i}: mineral field needs resources >= 1")
        else:
            owner = spec.get("owner")
            if owner not in (0, 1):
                raise MapError(f"unit #{i}: owner must be 0 or 1, got {owner!r}")
            amount = 0
        hp = int(spec.get("hp", stats[kind].max_hp))
        if not 0 < hp <= stats[kind].max_hp:
            raise MapError(f"unit #{i}: hp {hp} outside (0, {stats[kind].max_hp}]")
        if (x, y) in state.occupancy:
            raise MapError(f"unit #{i} overlaps another unit at ({x}, {y})")
        state.add_unit(kind, owner, x, y, hp=hp, resources=amount)
    return state


def read_map_document(source: str | Path) -> dict:
    path = Path(source)
    if not path.exists() and not path.suffix:
        bundled = _data_path("maps", f"{source}.json")
        if bundled.is_file():
            return json.loads(bundled.read_text())
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise MapError(f"map file not found: {source}") from None
    except json.JSONDecodeError as exc:
        raise MapError(f"malformed map file {source}: {exc}") from None


def dump_map(state: GameState, name: str = "") -> dict:
    """Serialize a state's units and stockpiles as a map document (drops in-progress actions)."""
    units = []
    for u in sorted(state.units.values(), key=lambda u: u.id):
        entry = {"kind": u.kind.label, "x": u.x, "y": u.y}
        if u.kind == UnitKind.RESOURCE:
            entry["resources"] = u.resources
        else:
            entry["owner"] = u.owner
            if u.hp != state.stats[u.kind].max_hp:
                entry["hp"] = u.hp
        units.append(entry)
    doc = {"format": MAP_FORMAT, "version": MAP_VERSION, "width": state.width,
           "height": state.height, "resources": list(state.player_resources), "units": units}
    if name:
        doc["name"] = name
    return doc
