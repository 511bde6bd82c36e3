"""Match loop, tournaments, metrics, replays and the knowledge probe."""
from __future__ import annotations

from .agents import Agent, AgentError, AgentSpec, BotAgent, PlanningEvent, PlapAgent, RandomAgent, make_agent
from .match import MatchConfig, MatchConfigError, MatchResult, run_match
from .metrics import CER_INFINITE, MetricsError, PlayerMetrics, compute_metrics, score
from .qa import QAError, QAResult, Question, first_number, grade, load_questions, qa_probe
from .replay import Replay, ReplayError, ReplayWriter, VerifyReport, load_replay, verify_replay, write_replay
from .tournament import (
    LeaderboardRow,
    ScheduledMatch,
    TournamentConfig,
    TournamentError,
    TournamentResult,
    format_leaderboard,
    leaderboard,
    match_seed,
    run_tournament,
    schedule_tournament,
)

__all__ = [name for name in dir() if not name.startswith("_")]
