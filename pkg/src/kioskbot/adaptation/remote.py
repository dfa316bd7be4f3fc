"""HTTP clients for hosted simplification and translation services.

Both clients share one policy: one retry on timeout or server error, a
total deadline of five seconds across attempts, and errors surfaced as
``RemoteError`` values carrying the failure kind and HTTP status. The wire
shapes match the hosted services they stand in for, so real endpoints can
be swapped in through configuration alone.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import httpx

from .types import AdaptedText, Step, UnsupportedLanguage


class RemoteError(Exception):
    """kind is one of "timeout", "unavailable", "http", "protocol"."""

    def __init__(self, kind: str, detail: str = "", status: int | None = None):
        self.kind = kind
        self.status = status
        msg = f"remote {kind}"
        if status is not None:
            msg += f" (HTTP {status})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


@dataclass(frozen=True)
class RemoteEndpoint:
    base_url: str
    attempt_timeout_s: float = 2.5
    total_deadline_s: float = 5.0
    retries: int = 1
    supported_targets: frozenset[str] = field(default_factory=lambda: frozenset({"da"}))


def _post_json(endpoint: RemoteEndpoint, path: str, payload: dict) -> dict:
    """POST with the shared retry/deadline policy; returns the parsed body."""
    deadline = time.monotonic() + endpoint.total_deadline_s
    last_error: RemoteError | None = None
    for _attempt in range(endpoint.retries + 1):
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            break
        timeout = min(endpoint.attempt_timeout_s, remaining)
        try:
            response = httpx.post(
                endpoint.base_url.rstrip("/") + path, json=payload, timeout=timeout
            )
        except httpx.TimeoutException:
            last_error = RemoteError("timeout", f"no reply within {timeout:.1f}s")
            continue
        except httpx.TransportError as exc:
            last_error = RemoteError("unavailable", str(exc))
            continue
        if response.status_code >= 500:
            last_error = RemoteError(
                "unavailable", "server error", status=response.status_code
            )
            continue
        if response.status_code >= 400:
            raise RemoteError("http", "rejected request", status=response.status_code)
        try:
            return response.json()
        except ValueError as exc:
            raise RemoteError("protocol", f"body is not JSON: {exc}") from exc
    assert last_error is not None
    raise last_error


class RemoteTranslator:
    engine_id = "remote-translator"

    def __init__(self, endpoint: RemoteEndpoint, source_language: str = "de"):
        self.endpoint = endpoint
        self.source_language = source_language

    def supported_targets(self) -> set[str]:
        return set(self.endpoint.supported_targets)

    def translate(self, text: str, source: str, target: str) -> AdaptedText:
        if target not in self.endpoint.supported_targets:
            raise UnsupportedLanguage(target, "not advertised by the translation endpoint")
        started = time.monotonic()
        body = _post_json(
            self.endpoint,
            "/v2/translate",
            {"text": [text], "target_lang": target.upper()},
        )
        try:
            translated = body["translations"][0]["text"]
        except (KeyError, IndexError, TypeError) as exc:
            raise RemoteError("protocol", f"unexpected body shape: {body!r}") from exc
        duration_ms = int((time.monotonic() - started) * 1000)
        return AdaptedText(
            text=str(translated),
            steps=(Step(self.engine_id, f"translate:{source}->{target}", duration_ms),),
            source_language=source,
            output_language=target,
        )


class RemoteSimplifier:
    """Hosted easy-language rewriting; the service accepts German only, so
    other input languages fail locally without a network call."""

    engine_id = "remote-simplifier"

    def __init__(self, endpoint: RemoteEndpoint):
        self.endpoint = endpoint

    def simplify(self, text: str, language: str) -> AdaptedText:
        if language != "de":
            raise UnsupportedLanguage(language, "hosted easy language supports German only")
        started = time.monotonic()
        body = _post_json(
            self.endpoint, "/v1/simplify", {"text": text, "input_language": "de"}
        )
        try:
            simplified = body["simplified_text"]
        except (KeyError, TypeError) as exc:
            raise RemoteError("protocol", f"unexpected body shape: {body!r}") from exc
        duration_ms = int((time.monotonic() - started) * 1000)
        return AdaptedText(
            text=str(simplified),
            steps=(Step(self.engine_id, "easy", duration_ms),),
            source_language="de",
            output_language="de",
        )


def translate_remote(text: str, target_language: str, endpoint: RemoteEndpoint) -> AdaptedText:
    return RemoteTranslator(endpoint).translate(text, "de", target_language)


def simplify_remote(text: str, endpoint: RemoteEndpoint, language: str = "de") -> AdaptedText:
    return RemoteSimplifier(endpoint).simplify(text, language)
