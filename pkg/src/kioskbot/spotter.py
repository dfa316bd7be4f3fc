"""Keyword spotting over normalized token sequences.

Two recognition modes: strict full-utterance matching (the robot only
reacts when the phrase is said on its own) and embedded matching (the
phrase is found inside a longer sentence). Both operate on the same
vocabulary and the same normalization, so strict matches are always a
subset of embedded matches.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

# Hyphen-like characters split a word into separate tokens; all other
# punctuation is removed in place.
_HYPHENS = "-‐‑‒–—−"


def normalize(text: str) -> list[str]:
    """Lowercase, strip punctuation, split hyphenated words, collapse
    whitespace. Empty input yields an empty list."""
    out: list[str] = []
    for ch in text:
        if ch in _HYPHENS:
            out.append(" ")
        elif unicodedata.category(ch).startswith("P"):
            continue
        else:
            out.append(ch)
    return "".join(out).casefold().split()


@dataclass(frozen=True)
class MatchResult:
    topic_key: str
    matched_phrase: str
    token_span: tuple[int, int]  # [start, end) over the normalized utterance


class Vocabulary:
    """Normalized phrase -> topic key map, shared by both matching modes.

    Keys must be unique after normalization: the same normalized phrase may
    not map to two different topic keys.
    """

    def __init__(self) -> None:
        self._entries: dict[tuple[str, ...], tuple[str, str]] = {}
        self._max_len = 0

    def add(self, phrase: str, topic_key: str) -> None:
        tokens = tuple(normalize(phrase))
        if not tokens:
            raise ValueError(f"phrase normalizes to nothing: {phrase!r}")
        existing = self._entries.get(tokens)
        if existing is not None and existing[0] != topic_key:
            raise ValueError(
                f"phrase {phrase!r} already mapped to topic {existing[0]!r}"
            )
        self._entries[tokens] = (topic_key, phrase)
        self._max_len = max(self._max_len, len(tokens))

    @classmethod
    def from_phrases(cls, phrase_to_topic: dict[str, str]) -> "Vocabulary":
        vocab = cls()
        for phrase, key in phrase_to_topic.items():
            vocab.add(phrase, key)
        return vocab

    def __len__(self) -> int:
        return len(self._entries)

    def phrases(self) -> list[str]:
        return [original for _, original in self._entries.values()]

    def get(self, tokens: tuple[str, ...]) -> tuple[str, str] | None:
        return self._entries.get(tokens)

    @property
    def max_phrase_tokens(self) -> int:
        return self._max_len


def match_listen(utterance: str, vocab: Vocabulary) -> MatchResult | None:
    """Match only if the whole normalized utterance equals a vocabulary
    phrase."""
    tokens = tuple(normalize(utterance))
    if not tokens:
        return None
    hit = vocab.get(tokens)
    if hit is None:
        return None
    topic_key, original = hit
    return MatchResult(topic_key, original, (0, len(tokens)))


def match_chat(utterance: str, vocab: Vocabulary) -> MatchResult | None:
    """Find vocabulary phrases as contiguous token runs inside the
    utterance. The longest match wins; ties break to the leftmost start."""
    tokens = normalize(utterance)
    if not tokens:
        return None
    best: MatchResult | None = None
    n = len(tokens)
    for start in range(n):
        longest = min(vocab.max_phrase_tokens, n - start)
        for length in range(longest, 0, -1):
            if best is not None and length <= _span_len(best):
                break
            window = tuple(tokens[start : start + length])
            hit = vocab.get(window)
            if hit is not None:
                topic_key, original = hit
                best = MatchResult(topic_key, original, (start, start + length))
                break
    return best


def _span_len(m: MatchResult) -> int:
    return m.token_span[1] - m.token_span[0]
