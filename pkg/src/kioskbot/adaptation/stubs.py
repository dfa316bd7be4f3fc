"""In-process stub servers speaking the remote adaptation wire formats.

Used by tests and demo configurations: each stub applies the matching
offline engine behind the real HTTP shape, so a run against stubs should
behave exactly like a run with offline engines (only the provenance engine
ids differ). Failure injection (artificial delay, forced status codes)
exercises the clients' retry and deadline policy.
"""

from __future__ import annotations

import json
import threading
import time
from collections import deque
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .simplify import SimplifierLexicon, simplify_easy
from .translate import PhraseTable, translate_offline


class StubServer:
    """One-endpoint HTTP stub on an ephemeral localhost port."""

    def __init__(
        self,
        routes: dict,
        delay_s: float = 0.0,
        forced_statuses: list[int] | None = None,
    ):
        self.routes = routes
        self.delay_s = delay_s
        self.forced_statuses = deque(forced_statuses or [])
        self.request_count = 0
        self._lock = threading.Lock()

        stub = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self) -> None:  # noqa: N802 (stdlib naming)
                with stub._lock:
                    stub.request_count += 1
                    forced = stub.forced_statuses.popleft() if stub.forced_statuses else None
                if stub.delay_s:
                    time.sleep(stub.delay_s)
                if forced is not None:
                    self.send_response(forced)
                    self.end_headers()
                    return
                handler = stub.routes.get(self.path)
                if handler is None:
                    self.send_response(404)
                    self.end_headers()
                    return
                length = int(self.headers.get("Content-Length", "0"))
                payload = json.loads(self.rfile.read(length) or b"{}")
                body = json.dumps(handler(payload), ensure_ascii=False).encode("utf-8")
                self.send_response(200)
                self.send_header("Content-Type", "application/json; charset=utf-8")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def log_message(self, *args) -> None:
                pass

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    @property
    def base_url(self) -> str:
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> "StubServer":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()

    def __enter__(self) -> "StubServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()


def stub_simplifier_server(
    lexicon: SimplifierLexicon,
    delay_s: float = 0.0,
    forced_statuses: list[int] | None = None,
) -> StubServer:
    def handle(payload: dict) -> dict:
        result = simplify_easy(str(payload.get("text", "")), lexicon)
        return {"simplified_text": result.text}

    return StubServer({"/v1/simplify": handle}, delay_s, forced_statuses)


def stub_translator_server(
    table: PhraseTable,
    delay_s: float = 0.0,
    forced_statuses: list[int] | None = None,
) -> StubServer:
    def handle(payload: dict) -> dict:
        texts = payload.get("text", [])
        translated = [translate_offline(str(t), table).text for t in texts]
        return {"translations": [{"text": t} for t in translated]}

    return StubServer({"/v2/translate": handle}, delay_s, forced_statuses)
