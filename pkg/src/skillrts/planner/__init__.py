"""Language-model skill planner: prompt construction, querying and plan parsing."""
from __future__ import annotations

from .client import ChatClient, LLMPlanner, MockPlanner, Planner, PlannerError
from .parser import (
    MAX_PLAN_ENTRIES,
    LineVerdict,
    RawResponse,
    extract_region,
    format_plan,
    parse_line,
    parse_plan,
    parse_response,
)
from .prompt import (
    API_KEY_ENV,
    BASE_URL_ENV,
    MODEL_ENV,
    PLAN_END,
    PLAN_START,
    VARIANTS,
    PlannerConfig,
    PlannerConfigError,
    PromptDocument,
    build_prompt,
    game_manual,
)


def query(cfg: PlannerConfig, prompt: PromptDocument, planner: Planner | None = None,
          tick: int = 0) -> RawResponse:
    """Ask ``planner`` (an endpoint client built from ``cfg`` by default) for a plan."""
    if planner is None:
        planner = LLMPlanner(cfg)
    return RawResponse(planner.respond(prompt, tick))


__all__ = [
    "API_KEY_ENV", "BASE_URL_ENV", "MODEL_ENV", "MAX_PLAN_ENTRIES", "PLAN_END", "PLAN_START",
    "VARIANTS", "ChatClient", "LLMPlanner", "LineVerdict", "MockPlanner", "Planner",
    "PlannerConfig", "PlannerConfigError", "PlannerError", "PromptDocument", "RawResponse",
    "build_prompt", "extract_region", "format_plan", "game_manual", "parse_line", "parse_plan",
    "parse_response", "query",
]
