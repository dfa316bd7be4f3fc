"""Shared value types of the adaptation pipeline."""

from __future__ import annotations

from dataclasses import dataclass


class UnsupportedLanguage(Exception):
    def __init__(self, language: str, reason: str = ""):
        self.language = language
        msg = f"language {language!r} not supported"
        super().__init__(f"{msg}: {reason}" if reason else msg)


@dataclass(frozen=True)
class AdaptationMode:
    """What the user asked for: easy language, another language, or both."""

    easy: bool = False
    target_language: str | None = None

    @property
    def is_identity(self) -> bool:
        return not self.easy and self.target_language is None


@dataclass(frozen=True)
class Step:
    """One provenance record: which engine ran, in which mode, how long."""

    engine_id: str
    mode: str
    duration_ms: int


@dataclass(frozen=True)
class AdaptedText:
    text: str
    steps: tuple[Step, ...]
    source_language: str
    output_language: str
