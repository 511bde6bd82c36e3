"""Chat-completion transport plus an offline scripted planner."""
from __future__ import annotations

import json
import logging
import time
from pathlib import Path
from typing import Callable, Protocol

import httpx
import yaml

from .prompt import PlannerConfig, PromptDocument

log = logging.getLogger(__name__)

RETRY_STATUS = frozenset({408, 409, 425, 429, 500, 502, 503, 504})
AUTH_STATUS = frozenset({401, 403})


class PlannerError(RuntimeError):
    """The planner could not produce a response (auth failure, retries exhausted, bad payload)."""


class Planner(Protocol):
    def respond(self, prompt: PromptDocument, tick: int) -> str: ...


class ChatClient:
    """Minimal synchronous chat-completions client with exponential backoff.

    Transient failures (transport errors, 429 and 5xx) are retried up to
    ``max_attempts`` times, sleeping ``backoff * 2**attempt`` seconds in
    between. Authentication failures are raised at once. One instance may
    be shared by several threads.
    """

    def __init__(self, base_url: str, api_key: str | None = None, *, timeout: float = 60.0,
                 max_attempts: int = 4, backoff: float = 1.0,
                 transport: httpx.BaseTransport | None = None,
                 sleep: Callable[[float], None] = time.sleep):
        if not base_url:
            raise PlannerError("no endpoint base URL configured")
        headers = {"Content-Type": "application/json"}
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        self.url = base_url.rstrip("/") + "/chat/completions"
        self.max_attempts = max_attempts
        self.backoff = backoff
        self._sleep = sleep
        self._http = httpx.Client(timeout=timeout, headers=headers, transport=transport)
        self.attempts = 0

    def close(self) -> None:
        self._http.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def complete(self, messages: list[dict], *, model: str, temperature: float, max_tokens: int) -> str:
        payload = {"model": model, "messages": messages,
                   "temperature": temperature, "max_tokens": max_tokens}
        last = "no attempt made"
        for attempt in range(self.max_attempts):
            self.attempts += 1
            try:
                resp = self._http.post(self.url, json=payload)
            except httpx.TransportError as exc:
                last = f"transport error: {exc!r}"
            else:
                if resp.status_code in AUTH_STATUS:
                    raise PlannerError(f"authentication rejected (HTTP {resp.status_code})")
                if resp.status_code == 200:
                    return _content(resp)
                if resp.status_code not in RETRY_STATUS:
                    raise PlannerError(f"HTTP {resp.status_code}: {resp.text[:200]}")
                last = f"HTTP {resp.status_code}"
            if attempt + 1 < self.max_attempts:
                delay = self.backoff * 2 ** attempt
                log.warning("planner request failed (%s); retrying in %.1fs", last, delay)
                self._sleep(delay)
        raise PlannerError(f"gave up after {self.max_attempts} attempts: {last}")


def _content(resp: httpx.Response) -> str:
    try:
        body = resp.json()
        content = body["choices"][0]["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise PlannerError(f"malformed completion payload: {exc!r}") from None
    return content if isinstance(content, str) else ""


class LLMPlanner:
    """Sends each prompt to a chat-completion endpoint described by a config."""

    def __init__(self, cfg: PlannerConfig, client: ChatClient | None = None):
        self.cfg = cfg
        if client is None:
            client = ChatClient(cfg.resolved_base_url() or "", cfg.api_key(), timeout=cfg.timeout,
                                max_attempts=cfg.max_attempts, backoff=cfg.backoff)
        self.client = client

    def respond(self, prompt: PromptDocument, tick: int) -> str:
        return self.client.complete(prompt.messages(), model=self.cfg.resolved_model(),
                                    temperature=self.cfg.temperature, max_tokens=self.cfg.max_tokens)


class MockPlanner:
    """Scripted responses keyed by tick; the latest key not after ``tick`` wins."""

    def __init__(self, script: dict[int, str] | str):
        if isinstance(script, str):
            script = {0: script}
        if not script:
            raise ValueError("mock script is empty")
        self.script = {int(k): str(v) for k, v in script.items()}
        self.calls: list[int] = []

    def respond(self, prompt: PromptDocument, tick: int) -> str:
        self.calls.append(tick)
        keys = [k for k in self.script if k <= tick]
        return self.script[max(keys)] if keys else ""

    @classmethod
    def from_file(cls, path: str | Path) -> "MockPlanner":
        """Plain text (used at every tick) or a YAML/JSON mapping of tick to text."""
        p = Path(path)
        text = p.read_text()
        if p.suffix in (".yaml", ".yml", ".json"):
            doc = json.loads(text) if p.suffix == ".json" else yaml.safe_load(text)
            if not isinstance(doc, dict):
                raise ValueError(f"{p}: expected a mapping of tick to plan text")
            return cls(doc)
        return cls(text)
