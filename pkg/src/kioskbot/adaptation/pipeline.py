"""Composition of adaptation engines behind one call.

Order is fixed: simplify first, then translate. The simplifier only
understands the source language, so running it after a translation would
starve it of supported input; translating last also means it works on
already short sentences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

from .types import AdaptationMode, AdaptedText


class Simplifier(Protocol):
    def simplify(self, text: str, language: str) -> AdaptedText: ...


class Translator(Protocol):
    def translate(self, text: str, source: str, target: str) -> AdaptedText: ...


class AdaptError(Exception):
    """Engine failure tagged with the pipeline step that raised it."""

    def __init__(self, step: str, cause: Exception):
        self.step = step
        self.cause = cause
        super().__init__(f"adaptation failed at step '{step}': {cause}")


@dataclass(frozen=True)
class EngineSet:
    simplifier: Simplifier | None = None
    translator: Translator | None = None
    source_language: str = "de"


def adapt(text: str, mode: AdaptationMode, engines: EngineSet) -> AdaptedText:
    source = engines.source_language
    if mode.is_identity:
        return AdaptedText(text=text, steps=(), source_language=source, output_language=source)

    current = text
    steps = []
    language = source

    if mode.easy:
        if engines.simplifier is None:
            raise AdaptError("simplify", RuntimeError("no simplifier configured"))
        try:
            result = engines.simplifier.simplify(current, language)
        except Exception as exc:
            raise AdaptError("simplify", exc) from exc
        current = result.text
        steps.extend(result.steps)

    target = mode.target_language
    if target is not None and target != language:
        if engines.translator is None:
            raise AdaptError("translate", RuntimeError("no translator configured"))
        try:
            result = engines.translator.translate(current, language, target)
        except Exception as exc:
            raise AdaptError("translate", exc) from exc
        current = result.text
        steps.extend(result.steps)
        language = target

    return AdaptedText(
        text=current,
        steps=tuple(steps),
        source_language=source,
        output_language=language,
    )
