"""JSON-over-HTTP service: named sessions holding a surface with its
flip history, plus compute endpoints mirroring the CLI pipelines."""

from __future__ import annotations

import json
import threading
import uuid
from collections import OrderedDict
from pathlib import Path as FsPath
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .algebra import ginzburg
from .errors import CapExceeded, DgonlabError
from .mutation import mutate_qsp, surface_mutate
from .qsp import algebra_to_json, build_qsp, qsp_to_json
from .reduce import verify_commute
from .surface import (
    MarkedSurfaceComplex,
    flip,
    surface_from_json,
    surface_to_json,
    validate,
)

MAX_SESSIONS = 64


class SurfaceModel(BaseModel):
    d: int
    faces: list[list[dict]]


class FlipRequest(BaseModel):
    arc: str


class MutateRequest(BaseModel):
    vertex: str
    mode: str = Field(default="surface", pattern="^(surface|oppermann)$")


class VerifyRequest(BaseModel):
    arc: str
    mode: str = Field(default="sign-relaxed", pattern="^(strict|sign-relaxed|support)$")


class Session:
    def __init__(self, sid: str, surface: MarkedSurfaceComplex):
        self.id = sid
        self.history: list[dict] = []  # {action, arc, snapshot-json}
        self.lock = threading.Lock()
        self._surface = surface
        self._views: dict | None = None

    @property
    def surface(self) -> MarkedSurfaceComplex:
        return self._surface

    @surface.setter
    def surface(self, value: MarkedSurfaceComplex) -> None:
        self._surface = value
        self._views = None

    def views(self) -> dict:
        """QsP and Ginzburg views, cached until the surface changes."""
        if self._views is None:
            quiver, w = build_qsp(self._surface)
            self._views = {
                "surface": surface_to_json(self._surface),
                "report": validate(self._surface).to_json(),
                "qsp": qsp_to_json(quiver, w),
                "ginzburg": algebra_to_json(ginzburg(quiver, w)),
            }
        return self._views

    def state(self) -> dict:
        return {
            "id": self.id,
            **self.views(),
            "history": [
                {"action": h["action"], "arc": h["arc"]} for h in self.history
            ],
        }


class SessionStore:
    def __init__(self, state_dir: Optional[str] = None):
        self.sessions: OrderedDict[str, Session] = OrderedDict()
        self.lock = threading.Lock()
        self.state_dir = FsPath(state_dir) if state_dir else None
        if self.state_dir:
            self.state_dir.mkdir(parents=True, exist_ok=True)

    def create(self, surface: MarkedSurfaceComplex) -> Session:
        sid = uuid.uuid4().hex[:12]
        session = Session(sid, surface)
        with self.lock:
            self.sessions[sid] = session
            while len(self.sessions) > MAX_SESSIONS:
                self.sessions.popitem(last=False)
        self._snapshot(session)
        return session

    def get(self, sid: str) -> Session:
        with self.lock:
            session = self.sessions.get(sid)
            if session is None:
                raise HTTPException(
                    404, detail={"code": "unknown-session", "message": sid, "context": {}}
                )
            self.sessions.move_to_end(sid)
            return session

    def _snapshot(self, session: Session) -> None:
        if self.state_dir:
            path = self.state_dir / f"{session.id}.json"
            path.write_text(
                json.dumps(surface_to_json(session.surface), indent=2, sort_keys=True),
                encoding="utf-8",
            )


def _error_response(exc: DgonlabError, status: int) -> JSONResponse:
    return JSONResponse(status_code=status, content=exc.to_json())


def create_app(state_dir: Optional[str] = None, frontend: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="dgonlab", version="0.1.0")
    store = SessionStore(state_dir)
    app.state.store = store

    @app.exception_handler(DgonlabError)
    async def handle_domain_error(_request, exc: DgonlabError):
        status = 413 if isinstance(exc, CapExceeded) else 400
        return _error_response(exc, status)

    @app.post("/sessions", status_code=201)
    def create_session(surface: SurfaceModel):
        try:
            complex_ = surface_from_json(surface.model_dump())
            report = validate(complex_)
        except DgonlabError as exc:
            raise HTTPException(400, detail=exc.to_json())
        session = store.create(complex_)
        return {"id": session.id, "report": report.to_json()}

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        session = store.get(sid)
        with session.lock:
            return session.state()

    @app.get("/sessions/{sid}/qsp")
    def get_qsp(sid: str):
        session = store.get(sid)
        with session.lock:
            return session.views()["qsp"]

    @app.post("/sessions/{sid}/flip")
    def flip_arc(sid: str, body: FlipRequest):
        session = store.get(sid)
        with session.lock:
            try:
                flipped = flip(session.surface, body.arc)
            except DgonlabError as exc:
                raise HTTPException(409, detail=exc.to_json())
            session.history.append(
                {
                    "action": "flip",
                    "arc": body.arc,
                    "snapshot": surface_to_json(session.surface),
                }
            )
            session.surface = flipped
            store._snapshot(session)
            return session.state()

    @app.post("/sessions/{sid}/undo")
    def undo(sid: str):
        session = store.get(sid)
        with session.lock:
            if not session.history:
                raise HTTPException(
                    409,
                    detail={"code": "nothing-to-undo", "message": "history empty", "context": {}},
                )
            last = session.history.pop()
            session.surface = surface_from_json(last["snapshot"])
            store._snapshot(session)
            return session.state()

    @app.post("/sessions/{sid}/mutate")
    def mutate(sid: str, body: MutateRequest):
        session = store.get(sid)
        with session.lock:
            try:
                quiver, w = build_qsp(session.surface)
                if body.mode == "oppermann":
                    qm, wm = mutate_qsp(quiver, w, body.vertex)
                    return qsp_to_json(qm, wm)
                qp, wp, pairs = surface_mutate(quiver, w, body.vertex)
                data = qsp_to_json(qp, wp)
                data["superfluous_pairs"] = [list(p) for p in pairs]
                return data
            except DgonlabError as exc:
                raise HTTPException(409, detail=exc.to_json())

    @app.post("/sessions/{sid}/verify")
    def verify(sid: str, body: VerifyRequest):
        session = store.get(sid)
        with session.lock:
            try:
                return verify_commute(session.surface, body.arc, body.mode)
            except CapExceeded as exc:
                raise HTTPException(413, detail=exc.to_json())
            except DgonlabError as exc:
                raise HTTPException(409, detail=exc.to_json())

    if frontend:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend, html=True), name="explorer")

    return app
