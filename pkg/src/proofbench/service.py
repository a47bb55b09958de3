"""HTTP/JSON API over workbench sessions, for the web UI and remote scripts.

Condition violations surface as message entries in a 200 state view, the
same way the UI's Messages pane reports them; only transport problems
(unknown session, stale revision, malformed body) are HTTP errors.
Sessions use optimistic concurrency: every mutating request carries the
revision it was computed against and conflicts are rejected with 409.
"""

from __future__ import annotations

import threading
import uuid
from pathlib import Path
from typing import Union

import uvicorn
from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, RedirectResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .pomodel import PogFile, load_pog
from .provers import ProverConfig, discover_provers, run_portfolio
from .replay import ABORT_ON_ERROR, replay as run_replay
from .script import ScriptError, parse_script
from .session import CommandError, Workbench, current_lemma
from .views import portfolio_view, prover_view, replay_view, state_view


class SessionNotFound(KeyError):
    pass


class StaleRevision(Exception):
    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"stale revision {got}, session is at {expected}")


class _Session:
    def __init__(self, session_id: str, workbench: Workbench):
        self.id = session_id
        self.workbench = workbench
        self.revision = 0
        self.messages: list[dict] = []
        self.lock = threading.Lock()

    def say(self, kind: str, text: str) -> None:
        self.messages.append({"kind": kind, "text": text})


class WorkbenchService:
    """Session registry plus the operations behind each endpoint."""

    def __init__(self, pog: PogFile, registry: list[ProverConfig]):
        self.pog = pog
        self.registry = registry
        self.sessions: dict[str, _Session] = {}
        self.proved: set[str] = set()
        self._lock = threading.Lock()

    def pos_listing(self) -> list[dict]:
        return [
            {"name": po.name, "group": po.group.value, "proved": po.name in self.proved}
            for po in self.pog.pos
        ]

    def create_session(self, po_name: str) -> _Session:
        try:
            index = self.pog.po_index(po_name)
        except KeyError:
            raise SessionNotFound(f"unknown proof obligation: {po_name}") from None
        wb = Workbench(self.pog)
        wb.open_index(index)
        session = _Session(uuid.uuid4().hex, wb)
        with self._lock:
            self.sessions[session.id] = session
        return session

    def get(self, session_id: str) -> _Session:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise SessionNotFound(f"unknown session: {session_id}") from None

    def view(self, session: _Session) -> dict:
        state = session.workbench.session
        assert state is not None
        view = state_view(state)
        view["session_id"] = session.id
        view["revision"] = session.revision
        view["messages"] = list(session.messages)
        view["po"]["index"] = session.workbench.index
        view["po"]["count"] = len(self.pog.pos)
        view["po"]["proved"] = state.po.name in self.proved
        return view

    def apply_command_text(self, session_id: str, revision: int, text: str) -> dict:
        """Run the commands in ``text`` against the session, serialized."""
        session = self.get(session_id)
        with session.lock:
            if revision != session.revision:
                raise StaleRevision(session.revision, revision)
            try:
                commands = parse_script(text).commands
            except ScriptError as exc:
                session.say("error", str(exc))
                return self.view(session)
            for cmd in commands:
                if cmd.name == "pr":
                    self._prove_locked(session, stop_on_valid=False)
                    continue
                try:
                    changed, message = session.workbench.execute(cmd)
                except CommandError as exc:
                    session.say("error", str(exc))
                    break
                if changed:
                    session.revision += 1
                if message:
                    session.say("info", message)
            return self.view(session)

    def prove(self, session_id: str, stop_on_valid: bool) -> dict:
        session = self.get(session_id)
        with session.lock:
            return self._prove_locked(session, stop_on_valid)

    def _prove_locked(self, session: _Session, stop_on_valid: bool) -> dict:
        state = session.workbench.session
        assert state is not None
        result = run_portfolio(
            current_lemma(state), self.registry, stop_on_valid=stop_on_valid
        )
        summary = " ".join(f"{name}:{v.kind}" for name, v in result.verdicts)
        session.say(
            "info",
            f"provers on {state.po.name}: {summary} -> "
            f"{'valid' if result.overall_valid else 'not valid'}",
        )
        if result.overall_valid:
            self.proved.add(state.po.name)
            session.workbench.proved.add(state.po.name)
        return portfolio_view(result)

    def replay_report(self, script: str, selector: str, mode: str) -> dict:
        report = run_replay(
            script, self.pog, selector=selector, mode=mode, registry=self.registry
        )
        return replay_view(report)


class CreateSessionBody(BaseModel):
    po: str


class CommandBody(BaseModel):
    text: str
    revision: int


class ProveBody(BaseModel):
    stop_on_valid: bool = False


class ReplayBody(BaseModel):
    script: str
    selector: str = "*"
    mode: str = ABORT_ON_ERROR


def create_app(
    pog: PogFile,
    registry: list[ProverConfig],
    ui_dir: Union[str, Path, None] = None,
) -> FastAPI:
    app = FastAPI(title="proofbench", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    service = WorkbenchService(pog, registry)
    app.state.service = service

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.get("/pos")
    def list_pos() -> list[dict]:
        return service.pos_listing()

    @app.post("/sessions")
    def create_session(body: CreateSessionBody) -> dict:
        try:
            session = service.create_session(body.po)
        except SessionNotFound as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None
        return service.view(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        try:
            return service.view(service.get(session_id))
        except SessionNotFound as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None

    @app.post("/sessions/{session_id}/command")
    def post_command(session_id: str, body: CommandBody) -> dict:
        try:
            return service.apply_command_text(session_id, body.revision, body.text)
        except SessionNotFound as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None
        except StaleRevision as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from None

    @app.post("/sessions/{session_id}/prove")
    def post_prove(session_id: str, body: ProveBody) -> dict:
        try:
            return service.prove(session_id, body.stop_on_valid)
        except SessionNotFound as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None

    @app.get("/provers")
    def list_provers() -> list[dict]:
        return [prover_view(p) for p in service.registry]

    @app.post("/replay")
    def post_replay(body: ReplayBody) -> dict:
        try:
            return service.replay_report(body.script, body.selector, body.mode)
        except (ScriptError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

        @app.get("/")
        def index() -> RedirectResponse:
            return RedirectResponse(url="/ui/")

    return app


def serve(
    pog_path: Union[str, Path],
    registry_path: Union[str, Path, None] = None,
    host: str = "127.0.0.1",
    port: int = 8000,
    ui_dir: Union[str, Path, None] = None,
) -> None:
    """Load everything and block serving HTTP until shutdown."""
    pog = load_pog(pog_path)
    registry = discover_provers(registry_path)
    if ui_dir is None:
        bundled = Path(__file__).resolve().parent.parent.parent / "frontend" / "dist"
        ui_dir = bundled if bundled.is_dir() else None
    app = create_app(pog, registry, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
