"""Deterministic two-player grid RTS engine."""
from .encoding import (
    CELL_WIDTH,
    GROUP_SIZES,
    EncodingError,
    decode_action_vector,
    encode_action_vector,
    one_hot_rows,
    vector_rows,
)
from .rules import (
    DRAW,
    ONGOING,
    EngineError,
    Event,
    Status,
    action_duration,
    check_action,
    legal_actions,
    step,
    target_cell,
    terminal_status,
    unit_legal_actions,
)
from .state import (
    GameState,
    InProgressAction,
    MapError,
    StatsError,
    StatsTable,
    Unit,
    dump_map,
    dump_stats,
    load_map,
    load_stats,
    parse_stats,
    read_map_document,
)
from .types import (
    ATTACK_WINDOW,
    DIRECTION_DELTAS,
    MOBILE_KINDS,
    NEUTRAL,
    NOOP,
    ActionType,
    ActionVector,
    AtomicAction,
    Direction,
    MatchCounters,
    UnitKind,
    UnitStats,
    attack_delta,
    attack_offset,
)

DEFAULT_MAX_TICKS = 2000

__all__ = [name for name in dir() if not name.startswith("_")]
