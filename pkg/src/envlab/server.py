"""HTTP JSON service: analytic endpoints plus interactive play sessions.

Endpoints:
  GET  /api/catalog                      density families
  POST /api/eval                         one BenefitReport (+ bounded strategy)
  POST /api/table                        CSV benefit sweep
  POST /api/roots                        exchange-condition roots
  POST /api/session                      create a seeded session
  POST /api/session/{id}/deal            draw the next play, reveal y
  POST /api/session/{id}/decide          record switch/stay, reveal z and b
  GET  /api/session/{id}/history         full play list and running totals

Sessions live in memory; every decided play may additionally be
appended to a JSONL log from which totals can be replayed.  Analytic
endpoints are stateless; each session serializes its own mutations
with a per-session lock.  A static directory (the browser console)
can be mounted at /.
"""

from __future__ import annotations

import json
import re
import threading
import uuid
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from .benefit import Bounds, expected_benefit, find_exchange_roots, strategy
from .catalog import catalog_entries, catalog_lookup
from .density import Density, DensitySpec, build_density, spec_of
from .errors import EnvelopeError
from .host import Play, Process, run_play
from .rng import SplitMix64
from .tables import make_grid, render_csv


class ApiError(Exception):
    def __init__(self, status: int, message: str) -> None:
        super().__init__(message)
        self.status = status
        self.message = message


def resolve_density(payload, params=None) -> Density:
    """Accept a catalog name or an inline DensitySpec object."""
    if isinstance(payload, str):
        return catalog_lookup(payload, params or {})
    if isinstance(payload, dict):
        if params:
            raise ApiError(400, "give params inside the density spec object")
        return build_density(DensitySpec.from_dict(payload))
    raise ApiError(400, "density must be a catalog name or a spec object")


def _require(body: dict, key: str):
    if key not in body:
        raise ApiError(400, f"missing field {key!r}")
    return body[key]


def _number(body: dict, key: str, default=None) -> Optional[float]:
    value = body.get(key, default)
    if value is default and default is None and key not in body:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ApiError(400, f"field {key!r} must be a number")
    return float(value)


@dataclass
class PlayRecord:
    index: int
    play: Play
    action: str
    realized_gain: float
    recommendation: dict

    def to_dict(self) -> dict:
        return {
            "play_index": self.index,
            "y": self.play.y,
            "z": self.play.z,
            "b": self.play.b,
            "action": self.action,
            "realized_gain": self.realized_gain,
            "recommendation": self.recommendation,
        }


class GameSession:
    """One interactive game; mutations are single-writer via a lock."""

    def __init__(
        self,
        sid: str,
        spec: DensitySpec,
        density: Density,
        process: Process,
        seed: int,
        blind: bool,
        coach: bool,
    ) -> None:
        self.id = sid
        self.spec = spec
        self.density = density
        self.process = process
        self.seed = seed
        self.blind = blind
        self.coach = coach
        self.rng = SplitMix64(seed)
        self.plays: list[PlayRecord] = []
        self.pending: Optional[Play] = None
        self.lock = threading.Lock()

    def describe(self) -> dict:
        return {
            "id": self.id,
            "density": self.spec.to_dict(),
            "process": self.process.value,
            "seed": self.seed,
            "blind": self.blind,
            "coach": self.coach,
        }

    def _recommendation(self, y: float) -> dict:
        report = expected_benefit(self.density, self.process, y)
        return {
            "decision": report.decision.value,
            "expected_benefit": report.expected_benefit if report.attainable else None,
            "attainable": report.attainable,
        }

    def deal(self) -> dict:
        with self.lock:
            if self.pending is not None:
                raise ApiError(409, "an undecided play exists; decide it first")
            self.pending = run_play(self.density, self.process, self.rng)
            out = {
                "play_index": len(self.plays),
                "y": None if self.blind else self.pending.y,
            }
            if self.coach:
                out["recommendation"] = self._recommendation(self.pending.y)
            return out

    def decide(self, play_index: int, action: str) -> dict:
        if action not in ("switch", "stay"):
            raise ApiError(400, "action must be 'switch' or 'stay'")
        with self.lock:
            if self.pending is None:
                raise ApiError(409, "no undecided play; deal first")
            if play_index != len(self.plays):
                raise ApiError(400, f"play_index {play_index} is not the pending play")
            play = self.pending
            record = PlayRecord(
                index=play_index,
                play=play,
                action=action,
                realized_gain=play.b if action == "switch" else 0.0,
                recommendation=self._recommendation(play.y),
            )
            self.plays.append(record)
            self.pending = None
            out = record.to_dict()
            out["totals"] = self._totals()
            return out

    def _totals(self) -> dict:
        user = always = optimal = 0.0
        for rec in self.plays:
            user += rec.realized_gain
            always += rec.play.b
            if rec.recommendation["decision"] == "switch":
                optimal += rec.play.b
        return {
            "plays": len(self.plays),
            "user": user,
            "always_switch": always,
            "never_switch": 0.0,
            "analytic_optimal": optimal,
        }

    def totals(self) -> dict:
        with self.lock:
            return self._totals()

    def history(self) -> dict:
        with self.lock:
            out = self.describe()
            out["plays"] = [rec.to_dict() for rec in self.plays]
            out["totals"] = self._totals()
            return out


@dataclass
class SessionStore:
    sessions: dict = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def add(self, session: GameSession) -> None:
        with self.lock:
            self.sessions[session.id] = session

    def get(self, sid: str) -> GameSession:
        with self.lock:
            session = self.sessions.get(sid)
        if session is None:
            raise ApiError(404, f"unknown session {sid!r}")
        return session


class DecisionLog:
    """Append-only JSONL log of decided plays."""

    def __init__(self, path: Path) -> None:
        self.path = Path(path)
        self.lock = threading.Lock()

    def append(self, record: dict) -> None:
        line = json.dumps(record)
        with self.lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")


def replay_log(path) -> dict[str, dict]:
    """Recompute per-session totals from a decision log.

    Records are replayed in file order, which is play order per
    session, so float accumulation matches the live server's totals.
    """
    out: dict[str, dict] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            sid = rec["session"]
            state = out.setdefault(
                sid,
                {"plays": 0, "user": 0.0, "always_switch": 0.0, "never_switch": 0.0,
                 "analytic_optimal": 0.0},
            )
            state["plays"] += 1
            state["user"] += rec["realized_gain"]
            state["always_switch"] += rec["b"]
            if rec["recommendation_decision"] == "switch":
                state["analytic_optimal"] += rec["b"]
    return out


_SESSION_PATH = re.compile(r"^/api/session/([^/]+)/(deal|decide|history)$")

_MIME = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


class EnvelopeHTTPServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, *, log_path=None, ui_dir=None, quiet=True):
        super().__init__(address, _Handler)
        self.store = SessionStore()
        self.decision_log = DecisionLog(log_path) if log_path else None
        self.ui_dir = Path(ui_dir).resolve() if ui_dir else None
        self.quiet = quiet


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    # -- plumbing ---------------------------------------------------------
    def log_message(self, fmt, *args):  # noqa: A003 - stdlib signature
        if not self.server.quiet:
            super().log_message(fmt, *args)

    def _send(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_json(self, status: int, obj) -> None:
        self._send(status, json.dumps(obj).encode(), "application/json")

    def _read_json(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            body = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ApiError(400, f"invalid JSON body: {exc}") from exc
        if not isinstance(body, dict):
            raise ApiError(400, "request body must be a JSON object")
        return body

    def _guarded(self, fn) -> None:
        try:
            fn()
        except ApiError as exc:
            self._send_json(exc.status, {"error": exc.message})
        except (EnvelopeError, ValueError) as exc:
            self._send_json(400, {"error": str(exc)})
        except Exception as exc:  # pragma: no cover - defensive
            self._send_json(500, {"error": f"internal error: {exc}"})

    # -- routing ----------------------------------------------------------
    def do_GET(self) -> None:  # noqa: N802 - stdlib casing
        self._guarded(self._route_get)

    def do_POST(self) -> None:  # noqa: N802 - stdlib casing
        self._guarded(self._route_post)

    def _route_get(self) -> None:
        path = self.path.split("?", 1)[0]
        if path == "/api/catalog":
            self._send_json(200, {"densities": catalog_entries()})
            return
        match = _SESSION_PATH.match(path)
        if match and match.group(2) == "history":
            session = self.server.store.get(match.group(1))
            self._send_json(200, session.history())
            return
        if path.startswith("/api/"):
            raise ApiError(404, f"no such endpoint {path!r}")
        self._serve_static(path)

    def _route_post(self) -> None:
        path = self.path.split("?", 1)[0]
        if path == "/api/eval":
            self._api_eval()
        elif path == "/api/table":
            self._api_table()
        elif path == "/api/roots":
            self._api_roots()
        elif path == "/api/session":
            self._api_create_session()
        else:
            match = _SESSION_PATH.match(path)
            if not match or match.group(2) == "history":
                raise ApiError(404, f"no such endpoint {path!r}")
            session = self.server.store.get(match.group(1))
            if match.group(2) == "deal":
                # deal takes no arguments, but the body must still be
                # drained or it corrupts the next keep-alive request
                self._read_json()
                self._send_json(200, session.deal())
            else:
                body = self._read_json()
                index = body.get("play_index")
                if not isinstance(index, int) or isinstance(index, bool):
                    raise ApiError(400, "play_index must be an integer")
                action = _require(body, "action")
                out = session.decide(index, action)
                if self.server.decision_log is not None:
                    self.server.decision_log.append(
                        {
                            "session": session.id,
                            "seed": session.seed,
                            "density": session.spec.to_dict(),
                            "process": session.process.value,
                            "play_index": out["play_index"],
                            "y": out["y"],
                            "z": out["z"],
                            "b": out["b"],
                            "action": out["action"],
                            "realized_gain": out["realized_gain"],
                            "recommendation_decision": out["recommendation"]["decision"],
                        }
                    )
                self._send_json(200, out)

    # -- analytic endpoints -------------------------------------------------
    def _api_eval(self) -> None:
        body = self._read_json()
        density = resolve_density(_require(body, "density"), body.get("params"))
        process = Process.parse(_require(body, "process"))
        y = _number(body, "y")
        if y is None:
            raise ApiError(400, "missing field 'y'")
        report = expected_benefit(density, process, y)
        out = {
            "density": density.name,
            "process": process.value,
            "report": report.to_dict(),
            "strategy": None,
        }
        bounds_body = body.get("bounds")
        if bounds_body is not None:
            if not isinstance(bounds_body, dict):
                raise ApiError(400, "bounds must be an object")
            bounds = Bounds(_number(bounds_body, "x_l"), _number(bounds_body, "x_u"))
            decision, value = strategy(density, process, bounds, y)
            out["strategy"] = {"decision": decision.value, "value": value}
        self._send_json(200, out)

    def _api_table(self) -> None:
        body = self._read_json()
        density = resolve_density(_require(body, "density"), body.get("params"))
        process = Process.parse(_require(body, "process"))
        count = body.get("count")
        if not isinstance(count, int) or isinstance(count, bool):
            raise ApiError(400, "count must be an integer")
        grid = make_grid(
            float(_require(body, "start")), float(_require(body, "stop")),
            count, body.get("scale", "linear"),
        )
        self._send(200, render_csv(density, process, grid).encode(), "text/csv; charset=utf-8")

    def _api_roots(self) -> None:
        body = self._read_json()
        density = resolve_density(_require(body, "density"), body.get("params"))
        process = Process.parse(_require(body, "process"))
        lo = _number(body, "lo")
        hi = _number(body, "hi")
        if lo is None or hi is None:
            raise ApiError(400, "missing 'lo' or 'hi'")
        tol = _number(body, "tol") or 1e-9
        cells = body.get("cells", 4096)
        if not isinstance(cells, int) or isinstance(cells, bool):
            raise ApiError(400, "cells must be an integer")
        from .benefit import exchange_condition

        roots = find_exchange_roots(density, process, (lo, hi), tol=tol, cells=cells)
        self._send_json(
            200,
            {"roots": [{"y": r, "abs_e": abs(exchange_condition(density, process, r))} for r in roots]},
        )

    def _api_create_session(self) -> None:
        body = self._read_json()
        density_payload = _require(body, "density")
        if isinstance(density_payload, str):
            density = catalog_lookup(density_payload, body.get("params") or {})
        else:
            density = resolve_density(density_payload)
        spec = spec_of(density)
        process = Process.parse(_require(body, "process"))
        seed = body.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ApiError(400, "seed must be an integer")
        blind = bool(body.get("blind", False))
        coach = bool(body.get("coach", False))
        if not density.proper or density.sampler is None:
            raise ApiError(400, f"density {density.name!r} cannot be played: no sampler")
        session = GameSession(
            sid=uuid.uuid4().hex[:12],
            spec=spec,
            density=density,
            process=process,
            seed=seed,
            blind=blind,
            coach=coach,
        )
        self.server.store.add(session)
        self._send_json(201, session.describe())

    # -- static console -----------------------------------------------------
    def _serve_static(self, path: str) -> None:
        root = self.server.ui_dir
        if root is None:
            raise ApiError(404, "no console bundle mounted; use the /api endpoints")
        rel = path.lstrip("/") or "index.html"
        target = (root / rel).resolve()
        if root not in target.parents and target != root:
            raise ApiError(404, "not found")
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            raise ApiError(404, f"no such file {rel!r}")
        mime = _MIME.get(target.suffix, "application/octet-stream")
        self._send(200, target.read_bytes(), mime)


def build_server(
    host: str = "127.0.0.1",
    port: int = 8000,
    *,
    log_path=None,
    ui_dir=None,
    quiet: bool = True,
) -> EnvelopeHTTPServer:
    """Bind the service; raises OSError if the address is taken."""
    return EnvelopeHTTPServer((host, port), log_path=log_path, ui_dir=ui_dir, quiet=quiet)
