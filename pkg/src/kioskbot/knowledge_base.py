"""Term-keyed answer store with a JSON-over-HTTP lookup endpoint.

The store is a single JSON document loaded into memory and immutable
afterwards. Lookup matches the queried term against entry keywords by
normalized token equality; "no answer" is a normal response value, not an
error, because the dialogue treats it as a regular branch.

Wire format: ``GET /kb?term=<urlencoded>&lang=<tag>`` returns the same
bytes as ``KBResponse.to_json_bytes()`` for the equivalent in-process
lookup.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI
from fastapi.responses import Response

from .spotter import normalize


class LoadError(Exception):
    pass


@dataclass(frozen=True)
class KnowledgeEntry:
    id: str
    topic_key: str
    language: str
    answer_text: str
    keywords: tuple[str, ...]


@dataclass(frozen=True)
class KBResponse:
    term: str
    found: bool
    topic: str | None = None
    answer: str | None = None

    def to_dict(self) -> dict:
        doc: dict = {"term": self.term, "found": self.found}
        if self.found:
            doc["topic"] = self.topic
            doc["answer"] = self.answer
        return doc

    def to_json_bytes(self) -> bytes:
        # Stable field order and compact separators: the HTTP endpoint and
        # in-process lookups must produce byte-identical documents.
        return json.dumps(
            self.to_dict(), ensure_ascii=False, separators=(",", ":")
        ).encode("utf-8")


class KnowledgeStore:
    def __init__(self, entries: list[KnowledgeEntry]):
        self.entries = tuple(entries)
        # (normalized keyword tokens, language) -> entry
        self._index: dict[tuple[tuple[str, ...], str], KnowledgeEntry] = {}
        seen_topics: set[tuple[str, str]] = set()
        for entry in self.entries:
            if not entry.answer_text:
                raise LoadError(f"entry {entry.id!r} has empty answer_text")
            topic_lang = (entry.topic_key, entry.language)
            if topic_lang in seen_topics:
                raise LoadError(
                    f"duplicate topic_key {entry.topic_key!r} for language {entry.language!r}"
                )
            seen_topics.add(topic_lang)
            for keyword in entry.keywords:
                tokens = tuple(normalize(keyword))
                if not tokens:
                    raise LoadError(
                        f"keyword {keyword!r} of entry {entry.id!r} normalizes to nothing"
                    )
                self._index[(tokens, entry.language)] = entry

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, term: str, language: str | None = None) -> KBResponse:
        """Pure lookup; ``language=None`` matches entries of any language."""
        tokens = tuple(normalize(term))
        entry: KnowledgeEntry | None = None
        if tokens:
            if language is not None:
                entry = self._index.get((tokens, language))
            else:
                for (key_tokens, _lang), candidate in self._index.items():
                    if key_tokens == tokens:
                        entry = candidate
                        break
        if entry is None:
            return KBResponse(term=term, found=False)
        return KBResponse(
            term=term, found=True, topic=entry.topic_key, answer=entry.answer_text
        )


def load_store(path: str | Path) -> KnowledgeStore:
    path = Path(path)
    if not path.exists():
        raise LoadError(f"store file not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise LoadError(f"store file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("entries"), list):
        raise LoadError('store document must be {"entries": [...]}')
    entries = []
    for i, raw in enumerate(doc["entries"]):
        try:
            entries.append(
                KnowledgeEntry(
                    id=str(raw["id"]),
                    topic_key=str(raw["topic_key"]),
                    language=str(raw["language"]),
                    answer_text=str(raw["answer_text"]),
                    keywords=tuple(str(k) for k in raw["keywords"]),
                )
            )
        except (KeyError, TypeError) as exc:
            raise LoadError(f"entry {i} is malformed: {exc}") from exc
    return KnowledgeStore(entries)


def create_kb_app(store: KnowledgeStore) -> FastAPI:
    app = FastAPI(title="knowledge base")

    @app.get("/kb")
    def kb(term: str | None = None, lang: str | None = None) -> Response:
        if term is None or term == "":
            return Response(
                content=b'{"error":"missing term"}',
                status_code=400,
                media_type="application/json",
            )
        response = store.lookup(term, lang)
        return Response(
            content=response.to_json_bytes(), media_type="application/json"
        )

    return app


def serve_kb(store: KnowledgeStore, bind: str = "127.0.0.1:8100") -> None:
    """Serve the lookup endpoint until interrupted."""
    import uvicorn

    host, _, port = bind.partition(":")
    uvicorn.run(create_kb_app(store), host=host, port=int(port or "8100"), log_level="warning")
