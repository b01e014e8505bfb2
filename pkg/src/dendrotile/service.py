"""HTTP session service behind the interactive tiler.

One server hosts one rule set and any number of independent sessions,
each a hex-ball board plus a growing patch.  The invariant the endpoints
defend: a session's patch is always verify_patch-clean.  A placement is
committed only if the would-be patch verifies; otherwise the client gets
a 409 whose body names every violated clause, including the cycle cells
for a would-be male-joint cycle.

State lives in memory.  With a sessions directory each mutation also
writes the session's patch document to disk, and existing documents are
picked up again on startup (undo history does not survive a restart).
"""

from __future__ import annotations

import json
import threading
import uuid
from datetime import datetime, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import parse_qs, urlparse

from .dendrite import motif_graph
from .hexgrid import Region
from .render import STYLES, RenderStyle, render_svg, render_tile
from .ruleset import RuleSet, TileState, canonical_json
from .solver import Patch, legal_states, verify_patch

MAX_BOARD_RADIUS = 12
DEFAULT_BOARD_RADIUS = 4


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class HttpError(Exception):
    def __init__(self, status: int, message: str, **extra):
        self.status = status
        self.body = {"error": message, **extra}
        super().__init__(message)


class Session:
    """A board, its patch, and the undo history of committed placements."""

    def __init__(self, sid: str, patch: Patch):
        self.id = sid
        self.patch = patch
        self.undo_stack: list = []
        self.revision = 0
        self.created = _now()
        self.modified = self.created
        self.lock = threading.Lock()

    def snapshot(self) -> dict:
        return {
            "session": {
                "id": self.id,
                "ruleset": self.patch.ruleset.name,
                "revision": self.revision,
                "undo_depth": len(self.undo_stack),
                "created": self.created,
                "modified": self.modified,
            },
            "patch": self.patch.to_doc(),
        }


class TilerService:
    def __init__(self, rs: RuleSet, sessions_dir: Optional[str] = None):
        self.ruleset = rs
        self.sessions: dict[str, Session] = {}
        self.registry_lock = threading.Lock()
        self.sessions_dir = Path(sessions_dir) if sessions_dir else None
        if self.sessions_dir is not None:
            self.sessions_dir.mkdir(parents=True, exist_ok=True)
            self._load_persisted()

    def _load_persisted(self) -> None:
        for path in sorted(self.sessions_dir.glob("*.json")):
            try:
                doc = json.loads(path.read_text("utf-8"))
                patch = Patch.from_doc(doc, self.ruleset)
            except (ValueError, OSError):
                continue
            self.sessions[path.stem] = Session(path.stem, patch)

    def _persist(self, session: Session) -> None:
        if self.sessions_dir is None:
            return
        path = self.sessions_dir / f"{session.id}.json"
        path.write_bytes(session.patch.canonical_bytes())

    # -- handlers ---------------------------------------------------------

    def create_session(self, body: dict) -> dict:
        radius = body.get("radius", DEFAULT_BOARD_RADIUS)
        if not isinstance(radius, int) or not 0 <= radius <= MAX_BOARD_RADIUS:
            raise HttpError(400, f"radius must be 0..{MAX_BOARD_RADIUS}")
        sid = uuid.uuid4().hex[:12]
        session = Session(sid, Patch(self.ruleset, Region.hex(radius), {}))
        with self.registry_lock:
            self.sessions[sid] = session
        self._persist(session)
        return session.snapshot()

    def get_session(self, sid: str) -> Session:
        with self.registry_lock:
            session = self.sessions.get(sid)
        if session is None:
            raise HttpError(404, f"no session {sid!r}")
        return session

    def legal(self, session: Session, query: dict) -> dict:
        cell = _cell_from_query(query)
        with session.lock:
            try:
                states = legal_states(session.patch, cell)
            except ValueError as err:
                raise HttpError(400, str(err)) from None
            return {"cell": list(cell),
                    "states": [_state_doc(s) for s in states]}

    def place(self, session: Session, body: dict) -> dict:
        cell, state = _placement_from_body(body, self.ruleset)
        with session.lock:
            patch = session.patch
            if cell not in patch.region:
                raise HttpError(409, "cell outside the board",
                                violations=[{"clause": "region",
                                             "cells": [list(cell)]}])
            if cell in patch.assignment:
                raise HttpError(409, "cell already occupied",
                                violations=[{"clause": "occupied",
                                             "cells": [list(cell)]}])
            candidate = patch.copy()
            candidate.assignment[cell] = state
            violations = verify_patch(candidate)
            if violations:
                raise HttpError(409, "placement violates the matching rules",
                                violations=violations)
            session.patch = candidate
            session.undo_stack.append(cell)
            session.revision += 1
            session.modified = _now()
            self._persist(session)
            return session.snapshot()

    def undo(self, session: Session) -> dict:
        with session.lock:
            if not session.undo_stack:
                raise HttpError(409, "nothing to undo")
            cell = session.undo_stack.pop()
            patch = session.patch.copy()
            del patch.assignment[cell]
            session.patch = patch
            session.revision += 1
            session.modified = _now()
            self._persist(session)
            return session.snapshot()

    def hint(self, session: Session) -> dict:
        with session.lock:
            g = motif_graph(session.patch)
            targets = set(g.out.values())
            cells = [c for c in g.nodes if c not in targets]
            return {"cells": [list(c) for c in sorted(cells)]}

    def render_session(self, session: Session, query: dict) -> str:
        style = _style_from_query(query)
        with session.lock:
            return render_svg(session.patch, self.ruleset, style)

    def render_one_tile(self, query: dict) -> str:
        style = _style_from_query(query)
        variant = _single(query, "variant")
        chirality = _single(query, "chirality", "R")
        try:
            orientation = int(_single(query, "orientation", "0"))
        except ValueError:
            raise HttpError(400, "orientation must be an integer") from None
        state = TileState(variant, orientation, chirality)
        try:
            return render_tile(state, self.ruleset, style)
        except ValueError as err:
            raise HttpError(400, str(err)) from None


def _single(query: dict, key: str, default: Optional[str] = None) -> str:
    values = query.get(key)
    if not values:
        if default is not None:
            return default
        raise HttpError(400, f"missing query parameter {key!r}")
    return values[0]


def _cell_from_query(query: dict) -> tuple:
    try:
        return (int(_single(query, "q")), int(_single(query, "r")))
    except ValueError:
        raise HttpError(400, "q and r must be integers") from None


def _style_from_query(query: dict) -> RenderStyle:
    name = _single(query, "style", "outline")
    if name not in STYLES:
        raise HttpError(400, f"unknown style {name!r}; choose from {STYLES}")
    return RenderStyle(name)


def _state_doc(s: TileState) -> dict:
    return {"variant": s.variant, "orientation": s.orientation,
            "chirality": s.chirality}


def _placement_from_body(body: dict, rs: RuleSet):
    try:
        q, r = int(body["q"]), int(body["r"])
        sd = body["state"]
        state = TileState(str(sd["variant"]), int(sd["orientation"]),
                          str(sd["chirality"]))
    except (KeyError, TypeError, ValueError):
        raise HttpError(400, "body must carry q, r and a state "
                             "{variant, orientation, chirality}") from None
    if state not in rs.enumerate_states():
        raise HttpError(400, f"{tuple(state)} is not a state of rule set "
                             f"{rs.name!r}")
    return (q, r), state


class _Handler(BaseHTTPRequestHandler):
    service: TilerService  # set by create_server

    protocol_version = "HTTP/1.1"

    # silence per-request stderr logging
    def log_message(self, fmt, *args):
        pass

    def _send(self, status: int, payload, content_type="application/json"):
        if isinstance(payload, str):
            data = payload.encode("utf-8")
        else:
            data = canonical_json(payload)
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            body = json.loads(raw)
        except json.JSONDecodeError:
            raise HttpError(400, "body is not valid JSON") from None
        if not isinstance(body, dict):
            raise HttpError(400, "body must be an object")
        return body

    def _route(self, method: str) -> None:
        svc = self.service
        url = urlparse(self.path)
        query = parse_qs(url.query)
        parts = [p for p in url.path.split("/") if p]
        try:
            if method == "POST" and parts == ["sessions"]:
                self._send(201, svc.create_session(self._body()))
                return
            if parts and parts[0] == "sessions" and len(parts) >= 2:
                session = svc.get_session(parts[1])
                tail = parts[2:]
                if method == "GET" and not tail:
                    with session.lock:
                        self._send(200, session.snapshot())
                    return
                if method == "GET" and tail == ["legal"]:
                    self._send(200, svc.legal(session, query))
                    return
                if method == "POST" and tail == ["place"]:
                    self._send(200, svc.place(session, self._body()))
                    return
                if method == "POST" and tail == ["undo"]:
                    self._send(200, svc.undo(session))
                    return
                if method == "GET" and tail == ["hint"]:
                    self._send(200, svc.hint(session))
                    return
                if method == "GET" and tail == ["render.svg"]:
                    self._send(200, svc.render_session(session, query),
                               "image/svg+xml")
                    return
            if method == "GET" and parts == ["tiles", "render.svg"]:
                self._send(200, svc.render_one_tile(query), "image/svg+xml")
                return
            if method == "GET" and parts == ["ruleset"]:
                self._send(200, svc.ruleset.to_doc())
                return
            raise HttpError(404, f"no route {method} {url.path}")
        except HttpError as err:
            self._send(err.status, err.body)

    def do_GET(self):
        self._route("GET")

    def do_POST(self):
        self._route("POST")


def create_server(rs: RuleSet, port: int = 0,
                  sessions_dir: Optional[str] = None) -> ThreadingHTTPServer:
    """A ready-to-run server; port 0 picks a free port (see server_address)."""
    service = TilerService(rs, sessions_dir)
    handler = type("BoundHandler", (_Handler,), {"service": service})
    server = ThreadingHTTPServer(("127.0.0.1", port), handler)
    server.service = service
    return server
