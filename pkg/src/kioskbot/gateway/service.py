"""HTTP + WebSocket service for tablet clients.

One session per client, created over POST /session; controls arrive as
small JSON bodies and are acknowledged with 202 before their effects show
up on the event stream. The stream carries the robot event log as JSON
lines plus ModeChanged status records so the tablet can show confirmed
mode badges without any client-side dialogue logic.
"""

from __future__ import annotations

import asyncio
import time
import uuid

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import Response
from pydantic import BaseModel

from ..orchestrator import ButtonPress, PersonAppeared, PersonLost
from .config import AppConfig
from .runtime import SessionRuntime, Wiring, build_wiring

SESSION_GC_SECONDS = 60.0
_STREAM_POLL_SECONDS = 0.05


class UtteranceBody(BaseModel):
    text: str


class ButtonBody(BaseModel):
    button: str


class PresenceBody(BaseModel):
    present: bool


def create_app(config: AppConfig | Wiring) -> FastAPI:
    wiring = build_wiring(config) if isinstance(config, AppConfig) else config
    sessions: dict[str, SessionRuntime] = {}
    app = FastAPI(title="kiosk gateway")
    app.state.sessions = sessions  # introspection for tests and ops

    def _session(session_id: str) -> SessionRuntime:
        runtime = sessions.get(session_id)
        if runtime is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return runtime

    def _collect_garbage() -> None:
        now = time.time()
        for sid, runtime in list(sessions.items()):
            idle = runtime.state.phase.value == "idle"
            if idle and now - runtime.last_activity_wall > SESSION_GC_SECONDS:
                sessions.pop(sid, None)

    @app.post("/session", status_code=201)
    def create_session() -> dict:
        _collect_garbage()
        session_id = uuid.uuid4().hex[:12]
        sessions[session_id] = SessionRuntime(wiring, realtime=True)
        return {"session_id": session_id}

    @app.post("/session/{session_id}/utterance", status_code=202)
    def utterance(session_id: str, body: UtteranceBody) -> dict:
        runtime = _session(session_id)
        delivered = runtime.inject_transcript(body.text)
        return {"status": "accepted", "delivered": delivered}

    @app.post("/session/{session_id}/button", status_code=202)
    def button(session_id: str, body: ButtonBody) -> dict:
        runtime = _session(session_id)
        runtime.post(ButtonPress(body.button))
        return {"status": "accepted"}

    @app.post("/session/{session_id}/presence", status_code=202)
    def presence(session_id: str, body: PresenceBody) -> dict:
        runtime = _session(session_id)
        runtime.post(PersonAppeared() if body.present else PersonLost())
        return {"status": "accepted"}

    @app.websocket("/session/{session_id}/events")
    async def events(websocket: WebSocket, session_id: str) -> None:
        runtime = sessions.get(session_id)
        if runtime is None:
            await websocket.close(code=4404)
            return
        await websocket.accept()
        sent = 0
        try:
            while True:
                pending = runtime.stream[sent:]
                for line in pending:
                    await websocket.send_text(line)
                sent += len(pending)
                if not pending:
                    await asyncio.sleep(_STREAM_POLL_SECONDS)
        except WebSocketDisconnect:
            return

    @app.get("/session/{session_id}/log")
    def session_log(session_id: str) -> Response:
        runtime = _session(session_id)
        body = "".join(e.to_json_line() + "\n" for e in runtime.robot.log)
        return Response(content=body, media_type="application/x-ndjson")

    @app.get("/kb")
    def kb(term: str | None = None, lang: str | None = None) -> Response:
        if term is None or term == "":
            return Response(
                content=b'{"error":"missing term"}',
                status_code=400,
                media_type="application/json",
            )
        result = wiring.store.lookup(term, lang)
        return Response(content=result.to_json_bytes(), media_type="application/json")

    return app


def serve(config: AppConfig | Wiring, bind: str = "127.0.0.1:8080") -> None:
    import uvicorn

    host, _, port = bind.partition(":")
    uvicorn.run(create_app(config), host=host or "127.0.0.1", port=int(port or "8080"))
