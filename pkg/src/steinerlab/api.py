"""HTTP session service for interactive clients.

Endpoints:
    POST   /sessions                  create from a terminal list or file text
    GET    /sessions/{id}             full render model
    POST   /sessions/{id}/actions     apply one action, returns state + report
    DELETE /sessions/{id}

The state document inside every response is exactly the headless export
of the session, so scripted clients can be replay-checked byte for byte;
only the session id is service-side. Actions on one session are applied
under a lock (single writer); reads see the last committed state.

With a snapshot directory configured, the terminals and the action log
are persisted after every step and an unknown id is replayed from disk,
which makes long supervised sessions resumable across restarts.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Literal

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, model_validator

from . import session as sess
from .errors import (
    EmptyUndoStack,
    InvalidAction,
    NotConnectedYet,
    ParseError,
    SteinerlabError,
    TooFewPoints,
)
from .fileio import read_terminals, session_document
from .geometry import Point

_CONFLICTS = (InvalidAction, EmptyUndoStack, NotConnectedYet)


class CreateSessionRequest(BaseModel):
    terminals: list[tuple[float, float]] | None = None
    file_text: str | None = None

    @model_validator(mode="after")
    def _one_source(self) -> "CreateSessionRequest":
        if (self.terminals is None) == (self.file_text is None):
            raise ValueError("provide exactly one of terminals or file_text")
        return self


class ActionRequest(BaseModel):
    kind: Literal[
        "omit_points",
        "full_stretch",
        "full_tree_all",
        "fermat_join",
        "polygonal_edge",
        "undo",
        "finish",
    ]
    indices: list[int] | None = None
    first: int | None = None
    last: int | None = None
    refs: list[int] | None = None

    def to_action(self) -> sess.Action:
        if self.kind == "omit_points":
            if not self.indices:
                raise InvalidAction("omit_points needs indices")
            return sess.OmitPoints(tuple(self.indices))
        if self.kind == "full_stretch":
            if self.first is None or self.last is None:
                raise InvalidAction("full_stretch needs first and last")
            return sess.FullStretch(self.first, self.last)
        if self.kind == "full_tree_all":
            return sess.FullTreeAll()
        if self.kind == "fermat_join":
            if not self.refs or len(self.refs) != 3:
                raise InvalidAction("fermat_join needs exactly three refs")
            return sess.FermatJoin((self.refs[0], self.refs[1], self.refs[2]))
        if self.kind == "polygonal_edge":
            if not self.refs or len(self.refs) < 2:
                raise InvalidAction("polygonal_edge needs at least two refs")
            return sess.PolygonalEdge(tuple(self.refs))
        if self.kind == "undo":
            return sess.Undo()
        return sess.Finish()


@dataclass
class _Entry:
    session: sess.Session
    terminals: list[list[float]]
    actions: list[dict[str, Any]] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    def __init__(self, snapshot_dir: str | None = None):
        self._entries: dict[str, _Entry] = {}
        self._registry_lock = threading.Lock()
        self._snapshot_dir = Path(snapshot_dir) if snapshot_dir else None
        if self._snapshot_dir:
            self._snapshot_dir.mkdir(parents=True, exist_ok=True)

    def create(self, pts: list[Point]) -> tuple[str, _Entry]:
        sid = uuid.uuid4().hex
        entry = _Entry(
            session=sess.new_session(pts),
            terminals=[[p.x, p.y] for p in pts],
        )
        with self._registry_lock:
            self._entries[sid] = entry
        self._snapshot(sid, entry)
        return sid, entry

    def get(self, sid: str) -> _Entry | None:
        with self._registry_lock:
            entry = self._entries.get(sid)
        if entry is None:
            entry = self._restore(sid)
        return entry

    def delete(self, sid: str) -> bool:
        with self._registry_lock:
            found = self._entries.pop(sid, None) is not None
        if self._snapshot_dir:
            path = self._snapshot_dir / f"{sid}.json"
            if path.exists():
                path.unlink()
                found = True
        return found

    def record_action(self, sid: str, entry: _Entry, wire: dict[str, Any]) -> None:
        entry.actions.append(wire)
        self._snapshot(sid, entry)

    def _snapshot(self, sid: str, entry: _Entry) -> None:
        if not self._snapshot_dir:
            return
        doc = {"terminals": entry.terminals, "actions": entry.actions}
        (self._snapshot_dir / f"{sid}.json").write_text(
            json.dumps(doc, indent=2) + "\n", encoding="utf-8"
        )

    def _restore(self, sid: str) -> _Entry | None:
        if not self._snapshot_dir:
            return None
        path = self._snapshot_dir / f"{sid}.json"
        if not path.exists():
            return None
        doc = json.loads(path.read_text(encoding="utf-8"))
        pts = [Point(x, y) for x, y in doc["terminals"]]
        state = sess.new_session(pts)
        for wire in doc["actions"]:
            state, _ = sess.apply(state, ActionRequest(**wire).to_action())
        entry = _Entry(session=state, terminals=doc["terminals"], actions=list(doc["actions"]))
        with self._registry_lock:
            self._entries[sid] = entry
        return entry


def _error(status: int, name: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": name, "detail": detail})


def create_app(snapshot_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="steinerlab session service")
    store = SessionStore(snapshot_dir)
    app.state.store = store

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        try:
            if req.terminals is not None:
                pts = [Point(x, y) for x, y in req.terminals]
            else:
                pts = read_terminals(req.file_text or "")
            sid, entry = store.create(pts)
        except (ParseError, TooFewPoints, ValueError) as exc:
            return _error(422, type(exc).__name__, str(exc))
        return {"session_id": sid, "state": session_document(entry.session)}

    @app.get("/sessions/{sid}")
    def get_state(sid: str):
        entry = store.get(sid)
        if entry is None:
            return _error(404, "UnknownSession", f"no session {sid}")
        return {"session_id": sid, "state": session_document(entry.session)}

    @app.post("/sessions/{sid}/actions")
    def post_action(sid: str, req: ActionRequest):
        entry = store.get(sid)
        if entry is None:
            return _error(404, "UnknownSession", f"no session {sid}")
        with entry.lock:
            try:
                action = req.to_action()
                new_state, report = sess.apply(entry.session, action)
            except _CONFLICTS as exc:
                return _error(409, type(exc).__name__, str(exc))
            except SteinerlabError as exc:
                return _error(422, type(exc).__name__, str(exc))
            entry.session = new_state
            store.record_action(sid, entry, req.model_dump(exclude_none=True))
        return {
            "session_id": sid,
            "state": session_document(new_state),
            "report": asdict(report),
        }

    @app.delete("/sessions/{sid}", status_code=204)
    def delete_session(sid: str):
        if not store.delete(sid):
            return _error(404, "UnknownSession", f"no session {sid}")
        return None

    return app


app = create_app()
