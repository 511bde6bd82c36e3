"""Per-match rates, combat efficiency and win scoring."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .match import MatchResult

# CER when the player took no damage at all
CER_INFINITE = math.inf


class MetricsError(ValueError):
    pass


@dataclass(frozen=True)
class PlayerMetrics:
    rhr: float  # resources harvested per 100 ticks
    rur: float  # resources spent per 100 ticks
    upr: float  # units produced per 100 ticks
    cer: float  # damage dealt / damage taken, CER_INFINITE if nothing taken
    damage_dealt: int

    @property
    def cer_finite(self) -> bool:
        return math.isfinite(self.cer)

    def to_dict(self) -> dict:
        return {"RHR": self.rhr, "RUR": self.rur, "UPR": self.upr,
                "CER": self.cer if self.cer_finite else "inf", "damage_dealt": self.damage_dealt}


def compute_metrics(result: MatchResult) -> tuple[PlayerMetrics, PlayerMetrics]:
    if result.game_time <= 0:
        raise MetricsError("rate metrics are undefined for a match with game_time 0")
    out = []
    for c in result.counters:
        t = result.game_time
        cer = c.damage_dealt / c.damage_taken if c.damage_taken > 0 else CER_INFINITE
        out.append(PlayerMetrics(
            rhr=c.resources_harvested / t * 100,
            rur=c.resources_spent / t * 100,
            upr=c.unit_production / t * 100,
            cer=cer,
            damage_dealt=c.damage_dealt,
        ))
    return tuple(out)


def score(result: MatchResult, side: int) -> int:
    """+1 for a win, 0 for a draw, -1 for a loss."""
    if side not in (0, 1):
        raise ValueError(f"side must be 0 or 1, got {side!r}")
    if result.winner is None:
        return 0
    return 1 if result.winner == side else -1
