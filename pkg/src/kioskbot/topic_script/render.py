"""Turn a response template into a flat, speakable ``Utterance``.

Rendering is deterministic: random choices draw from a seeded splitmix
stream, so the same (template, bindings, seed) triple yields the same
utterance in every process. Markup becomes offset-addressed spans over the
plain text; animation triggers keep their text offset.
"""

from __future__ import annotations

from ..rng import SplitMix64
from .types import (
    AnimationTrigger,
    Literal,
    Pause,
    PitchSpan,
    RandomChoice,
    RateSpan,
    ResponseTemplate,
    Segment,
    Span,
    Utterance,
    VariableRef,
)


class UnboundVariable(Exception):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"no binding for variable '{name}'")


def render_response(
    template: ResponseTemplate,
    bindings: dict[str, str],
    seed: int,
    language: str = "de",
) -> Utterance:
    rng = SplitMix64(seed)
    parts: list[str] = []
    spans: list[Span] = []
    triggers: list[tuple[int, str]] = []
    length = _render_into(template.segments, bindings, rng, parts, spans, triggers, 0)
    plain_text = "".join(parts)
    assert len(plain_text) == length
    return Utterance(
        plain_text=plain_text,
        spans=tuple(spans),
        animation_triggers=tuple(triggers),
        language=language,
    )


def _render_into(
    segments: tuple[Segment, ...],
    bindings: dict[str, str],
    rng: SplitMix64,
    parts: list[str],
    spans: list[Span],
    triggers: list[tuple[int, str]],
    pos: int,
) -> int:
    for seg in segments:
        if isinstance(seg, Literal):
            parts.append(seg.text)
            pos += len(seg.text)
        elif isinstance(seg, VariableRef):
            if seg.name not in bindings:
                raise UnboundVariable(seg.name)
            value = bindings[seg.name]
            parts.append(value)
            pos += len(value)
        elif isinstance(seg, Pause):
            spans.append(Span(start=pos, end=pos, kind="pause", value=seg.ms))
        elif isinstance(seg, RandomChoice):
            index = rng.choice_index(len(seg.alternatives))
            pos = _render_into(
                seg.alternatives[index], bindings, rng, parts, spans, triggers, pos
            )
        elif isinstance(seg, (RateSpan, PitchSpan)):
            start = pos
            pos = _render_into(seg.inner, bindings, rng, parts, spans, triggers, pos)
            kind = "rate" if isinstance(seg, RateSpan) else "pitch"
            spans.append(Span(start=start, end=pos, kind=kind, value=seg.percent))
        elif isinstance(seg, AnimationTrigger):
            triggers.append((pos, seg.group))
        else:
            raise TypeError(f"unknown segment {seg!r}")
    return pos
