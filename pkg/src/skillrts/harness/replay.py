"""Append-only JSONL match replays and their re-simulation check.

Layout: one ``header`` record (map document, stats table, agents), one
``tick`` record per engine step (both action vectors as sparse rows,
events, post-step state hash) and a closing ``result`` record.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..engine import ActionVector, load_map, parse_stats, step

REPLAY_FORMAT = "skillrts-replay"
REPLAY_VERSION = 1


class ReplayError(ValueError):
    def __init__(self, message: str, last_tick: int | None = None):
        suffix = "" if last_tick is None else f" (last valid tick {last_tick})"
        super().__init__(message + suffix)
        self.last_tick = last_tick


class ReplayWriter:
    """Writes records as they happen; each line is flushed immediately."""

    def __init__(self, path: str | Path, header: dict):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = self.path.open("w", encoding="utf-8")
        self._write({"type": "header", "format": REPLAY_FORMAT, "version": REPLAY_VERSION, **header})

    def _write(self, record: dict) -> None:
        self._fh.write(json.dumps(record, separators=(",", ":")) + "\n")
        self._fh.flush()

    def tick(self, tick: int, actions: tuple[ActionVector, ActionVector], events, state_hash: str,
             trace: list | None = None) -> None:
        record = {
            "type": "tick",
            "tick": tick,
            "actions": [a.sparse_rows() for a in actions],
            "events": [e.to_dict() for e in events],
            "hash": state_hash,
        }
        if trace:
            record["trace"] = trace
        self._write(record)

    def result(self, record: dict) -> None:
        self._write({"type": "result", **record})

    def close(self) -> None:
        if not self._fh.closed:
            self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


@dataclass
class Replay:
    header: dict
    ticks: list[dict] = field(default_factory=list)
    result: dict | None = None

    @property
    def hashes(self) -> list[str]:
        return [t["hash"] for t in self.ticks]


def write_replay(path: str | Path, replay: Replay) -> Path:
    """Serialize an in-memory replay (the match loop streams instead)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps({"type": "header", "format": REPLAY_FORMAT,
                             "version": REPLAY_VERSION, **_strip(replay.header)}) + "\n")
        for t in replay.ticks:
            fh.write(json.dumps({"type": "tick", **_strip(t)}) + "\n")
        if replay.result is not None:
            fh.write(json.dumps({"type": "result", **_strip(replay.result)}) + "\n")
    return path


def _strip(record: dict) -> dict:
    return {k: v for k, v in record.items() if k not in ("type", "format", "version")}


def load_replay(path: str | Path) -> Replay:
    """Parse a replay; a malformed or truncated file raises :class:`ReplayError`."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except FileNotFoundError:
        raise ReplayError(f"replay not found: {path}") from None
    if not lines:
        raise ReplayError(f"{path}: empty replay")
    replay = None
    last = None
    for n, line in enumerate(lines, 1):
        try:
            rec = json.loads(line)
        except json.JSONDecodeError:
            raise ReplayError(f"{path}:{n}: corrupt record", last) from None
        kind = rec.get("type") if isinstance(rec, dict) else None
        if n == 1:
            if kind != "header" or rec.get("format") != REPLAY_FORMAT:
                raise ReplayError(f"{path}: missing replay header")
            if rec.get("version") != REPLAY_VERSION:
                raise ReplayError(f"{path}: unsupported replay version {rec.get('version')!r}")
            replay = Replay(header=rec)
            continue
        if replay.result is not None:
            raise ReplayError(f"{path}:{n}: record after result", last)
        if kind == "tick":
            expected = 0 if last is None else last + 1
            if rec.get("tick") != expected or "hash" not in rec or "actions" not in rec:
                raise ReplayError(f"{path}:{n}: bad tick record (expected tick {expected})", last)
            replay.ticks.append(rec)
            last = rec["tick"]
        elif kind == "result":
            replay.result = rec
        else:
            raise ReplayError(f"{path}:{n}: unknown record type {kind!r}", last)
    if replay.result is None:
        raise ReplayError(f"{path}: truncated, no result record", last)
    return replay


@dataclass
class VerifyReport:
    ok: bool
    ticks: int
    mismatch_tick: int | None = None
    message: str = ""
    final_counters: list[dict] = field(default_factory=list)


def verify_replay(replay: Replay | str | Path) -> VerifyReport:
    """Re-simulate the recorded action streams and compare every state hash."""
    if not isinstance(replay, Replay):
        replay = load_replay(replay)
    header = replay.header
    stats = parse_stats(header["stats"]) if "stats" in header else None
    state = load_map(header["map"], stats)
    if header.get("initial_hash") not in (None, state.state_hash()):
        return VerifyReport(False, 0, 0, "initial state differs from header")
    for rec in replay.ticks:
        vecs = [ActionVector.from_sparse_rows(state.width, state.height, rows) for rows in rec["actions"]]
        state, _ = step(state, vecs[0], vecs[1])
        if state.state_hash() != rec["hash"]:
            return VerifyReport(False, rec["tick"], rec["tick"], f"state hash mismatch after tick {rec['tick']}")
    counters = [c.as_dict() for c in state.counters]
    result = replay.result or {}
    if "counters" in result and result["counters"] != counters:
        return VerifyReport(False, len(replay.ticks), None, "final counters differ from result record", counters)
    if result.get("game_time", state.tick) != state.tick:
        return VerifyReport(False, len(replay.ticks), None, "game_time differs from re-simulated tick", counters)
    return VerifyReport(True, len(replay.ticks), None, "ok", counters)
