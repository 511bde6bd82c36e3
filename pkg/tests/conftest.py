from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from skillrts.engine import GameState, UnitKind, load_map, load_stats


@pytest.fixture(scope="session")
def stats():
    return load_stats()


def make_state(width: int, height: int, units, resources=(0, 0), stats=None) -> GameState:
    """Small hand-built board; ``units`` holds (kind, owner, x, y[, amount]) tuples.

    For minerals ``amount`` is the field size, for workers the carried load.
    """
    state = GameState(width, height, {}, list(resources), stats or load_stats())
    for spec in units:
        kind, owner, x, y, *rest = spec
        kind = UnitKind.parse(kind) if isinstance(kind, str) else kind
        amount = rest[0] if rest else 0
        if kind == UnitKind.RESOURCE:
            state.add_unit(kind, -1, x, y, resources=amount or 10)
        else:
            state.add_unit(kind, owner, x, y, carried=amount)
    return state


@pytest.fixture
def initial():
    return load_map("basesWorkers8x8")


class _StubHandler(BaseHTTPRequestHandler):
    def do_POST(self):  # noqa: N802
        srv = self.server
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        srv.requests.append({"path": self.path, "body": body, "auth": self.headers.get("Authorization")})
        status, content = srv.script.pop(0) if srv.script else srv.fallback
        payload = json.dumps({"choices": [{"message": {"role": "assistant", "content": content}}]}
                             if status == 200 else {"error": {"message": content}}).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args):
        pass


@pytest.fixture
def stub_server():
    """Start a local chat-completion stub replying with scripted (status, content) pairs.

    Calling the fixture returns (base URL, server); the last pair repeats forever.
    """
    servers = []

    def start(script):
        srv = ThreadingHTTPServer(("127.0.0.1", 0), _StubHandler)
        srv.script = list(script)
        srv.fallback = script[-1]
        srv.requests = []
        threading.Thread(target=srv.serve_forever, daemon=True).start()
        servers.append(srv)
        return f"http://127.0.0.1:{srv.server_address[1]}/v1", srv

    yield start
    for srv in servers:
        srv.shutdown()
        srv.server_close()


# -- acceptance summary ----------------------------------------------------
# Tests marked ``criterion(number, title)`` get one PASS/FAIL/SKIP line in
# the terminal summary; details attached with ``record_property("detail", ...)``
# are appended to the line.

_criteria: dict[str, tuple[int, str]] = {}
_outcomes: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): numbered acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criteria[item.nodeid] = (m.args[0], m.args[1])


def pytest_runtest_logreport(report):
    if report.nodeid not in _criteria:
        return
    detail = dict(report.user_properties).get("detail", "")
    if report.skipped:
        reason = report.longrepr[2] if isinstance(report.longrepr, tuple) else ""
        _outcomes[report.nodeid] = ("SKIP", reason.removeprefix("Skipped: "))
    elif report.failed:
        _outcomes[report.nodeid] = ("FAIL", detail)
    elif report.when == "call":
        _outcomes[report.nodeid] = ("PASS", detail)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (num, title) in sorted(_criteria.items(), key=lambda kv: kv[1][0]):
        status, detail = _outcomes.get(nodeid, ("NOT RUN", ""))
        line = f"[{status:>4}] {num:>2}. {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
