"""Deterministic phrase-table translation.

A test double for a real translation API with the same adapter contract:
greedy longest-match over normalized tokens, uncovered tokens passed
through visibly wrapped in white brackets so nobody mistakes them for a
translation. Sentence-final punctuation is preserved.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from ..spotter import normalize
from .types import AdaptedText, Step, UnsupportedLanguage

ENGINE_ID = "phrase-translator"

MAX_SOURCE_PHRASE_TOKENS = 6

UNCOVERED_OPEN = "⟦"  # ⟦
UNCOVERED_CLOSE = "⟧"  # ⟧


@dataclass(frozen=True)
class PhraseTable:
    source_language: str
    target_language: str
    # normalized source token sequence -> target text
    entries: dict[tuple[str, ...], str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for tokens, target in self.entries.items():
            if len(tokens) > MAX_SOURCE_PHRASE_TOKENS:
                raise ValueError(
                    f"source phrase over {MAX_SOURCE_PHRASE_TOKENS} tokens: {' '.join(tokens)!r}"
                )
            if not target.strip():
                raise ValueError(f"empty target for source {' '.join(tokens)!r}")

    @classmethod
    def from_phrases(
        cls, source_language: str, target_language: str, phrases: dict[str, str]
    ) -> "PhraseTable":
        entries = {tuple(normalize(src)): dst for src, dst in phrases.items()}
        return cls(source_language, target_language, entries)

    @property
    def max_tokens(self) -> int:
        return max((len(k) for k in self.entries), default=1)


def load_phrase_table(path: str | Path) -> PhraseTable:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return PhraseTable.from_phrases(
        doc["source_language"], doc["target_language"], doc.get("entries", {})
    )


def translate_offline(text: str, table: PhraseTable) -> AdaptedText:
    started = time.monotonic()
    lines = [_translate_line(line, table) for line in text.split("\n")]
    output = "\n".join(lines)
    duration_ms = int((time.monotonic() - started) * 1000)
    mode = f"translate:{table.source_language}->{table.target_language}"
    return AdaptedText(
        text=output,
        steps=(Step(ENGINE_ID, mode, duration_ms),),
        source_language=table.source_language,
        output_language=table.target_language,
    )


def _translate_line(line: str, table: PhraseTable) -> str:
    out_parts: list[str] = []
    for sentence, terminator in _split_sentences(line):
        tokens = normalize(sentence)
        translated: list[str] = []
        i = 0
        while i < len(tokens):
            hit = None
            for length in range(min(table.max_tokens, len(tokens) - i), 0, -1):
                candidate = tuple(tokens[i : i + length])
                if candidate in table.entries:
                    hit = (table.entries[candidate], length)
                    break
            if hit is None:
                translated.append(f"{UNCOVERED_OPEN}{tokens[i]}{UNCOVERED_CLOSE}")
                i += 1
            else:
                translated.append(hit[0])
                i += hit[1]
        out_parts.append(" ".join(translated) + terminator)
    return " ".join(out_parts)


def _split_sentences(line: str) -> list[tuple[str, str]]:
    sentences: list[tuple[str, str]] = []
    current: list[str] = []
    for ch in line:
        if ch in ".!?":
            body = "".join(current).strip()
            if body:
                sentences.append((body, ch))
            current = []
        else:
            current.append(ch)
    tail = "".join(current).strip()
    if tail:
        sentences.append((tail, ""))
    return sentences


class PhraseTableTranslator:
    """Adapter-contract wrapper around one loaded phrase table."""

    engine_id = ENGINE_ID

    def __init__(self, table: PhraseTable):
        self.table = table

    def supported_targets(self) -> set[str]:
        return {self.table.target_language}

    def translate(self, text: str, source: str, target: str) -> AdaptedText:
        if source != self.table.source_language or target != self.table.target_language:
            raise UnsupportedLanguage(
                target, f"table covers {self.table.source_language}->{self.table.target_language}"
            )
        return translate_offline(text, self.table)
