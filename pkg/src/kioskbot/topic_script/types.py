"""AST for the dialogue topic DSL and the rendered utterance value.

A topic script bundles keyword concepts and rule -> response mappings for
one subject area. Response templates carry inline markup (pauses, rate and
pitch spans, random choices, variables, animation triggers) that rendering
turns into a flat ``Utterance``: plain text plus offset-addressed spans.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

PAUSE_MS_MAX = 10_000
PERCENT_MIN = 50
PERCENT_MAX = 200
MAX_NESTING_DEPTH = 3

# Characters with syntactic meaning in response text; literals may not
# contain them (there is no escape syntax, deliberately).
RESERVED_CHARS = "[]{}$^|"


@dataclass(frozen=True)
class Literal:
    text: str


@dataclass(frozen=True)
class VariableRef:
    name: str


@dataclass(frozen=True)
class Pause:
    ms: int


@dataclass(frozen=True)
class AnimationTrigger:
    group: str


@dataclass(frozen=True)
class RandomChoice:
    alternatives: tuple[tuple["Segment", ...], ...]


@dataclass(frozen=True)
class RateSpan:
    percent: int
    inner: tuple["Segment", ...]


@dataclass(frozen=True)
class PitchSpan:
    percent: int
    inner: tuple["Segment", ...]


Segment = Union[
    Literal, VariableRef, Pause, AnimationTrigger, RandomChoice, RateSpan, PitchSpan
]


@dataclass(frozen=True)
class ResponseTemplate:
    segments: tuple[Segment, ...]


@dataclass(frozen=True)
class ConceptRef:
    name: str


@dataclass(frozen=True)
class LiteralPhrase:
    text: str


@dataclass(frozen=True)
class Rule:
    pattern: ConceptRef | LiteralPhrase
    responses: tuple[ResponseTemplate, ...]


@dataclass(frozen=True)
class Concept:
    name: str
    phrases: tuple[str, ...]


@dataclass(frozen=True)
class TopicScript:
    name: str
    language: str
    concepts: tuple[Concept, ...] = field(default_factory=tuple)
    rules: tuple[Rule, ...] = field(default_factory=tuple)

    def concept_names(self) -> set[str]:
        return {c.name for c in self.concepts}


@dataclass(frozen=True)
class Span:
    """Markup over ``Utterance.plain_text``: [start, end) offsets.

    ``kind`` is one of "pause" (zero-width, value in ms), "rate" or
    "pitch" (value in percent).
    """

    start: int
    end: int
    kind: str
    value: int


@dataclass(frozen=True)
class Utterance:
    plain_text: str
    spans: tuple[Span, ...] = ()
    animation_triggers: tuple[tuple[int, str], ...] = ()
    language: str = "de"

    @classmethod
    def plain(cls, text: str, language: str) -> "Utterance":
        return cls(plain_text=text, spans=(), animation_triggers=(), language=language)

    def total_pause_ms(self) -> int:
        return sum(s.value for s in self.spans if s.kind == "pause")
