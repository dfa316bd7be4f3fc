"""Canonical text form of a topic script.

``parse_topic(serialize_topic(s))`` is structurally equal to ``s`` for any
script that satisfies the validator (in particular: literals free of
reserved characters and trimmed at container boundaries).
"""

from __future__ import annotations

from .types import (
    AnimationTrigger,
    Concept,
    Literal,
    LiteralPhrase,
    Pause,
    PitchSpan,
    RandomChoice,
    RateSpan,
    Rule,
    Segment,
    TopicScript,
    VariableRef,
)


def serialize_topic(script: TopicScript) -> str:
    lines = [f"topic: ~{script.name}", f"language: {script.language}"]
    if script.concepts:
        lines.append("")
        for concept in script.concepts:
            lines.append(_concept_line(concept))
    if script.rules:
        lines.append("")
        for rule in script.rules:
            lines.extend(_rule_lines(rule))
    return "\n".join(lines) + "\n"


def _concept_line(concept: Concept) -> str:
    items = []
    for phrase in concept.phrases:
        items.append(f'"{phrase}"' if " " in phrase else phrase)
    return f"concept:({concept.name}) [{' '.join(items)}]"


def _rule_lines(rule: Rule) -> list[str]:
    if isinstance(rule.pattern, LiteralPhrase):
        head = f"u:({rule.pattern.text})"
    else:
        head = f"u:(~{rule.pattern.name})"
    return [f"{head} {serialize_segments(template.segments)}" for template in rule.responses]


def serialize_segments(segments: tuple[Segment, ...]) -> str:
    parts: list[str] = []
    for seg in segments:
        if isinstance(seg, Literal):
            parts.append(seg.text)
        elif isinstance(seg, VariableRef):
            parts.append(f"${seg.name}")
        elif isinstance(seg, Pause):
            parts.append(f"{{pause:{seg.ms}}}")
        elif isinstance(seg, RandomChoice):
            alts = " | ".join(serialize_segments(a) for a in seg.alternatives)
            parts.append(f"[{alts}]")
        elif isinstance(seg, RateSpan):
            parts.append(f"{{rate:{seg.percent}% {serialize_segments(seg.inner)}}}")
        elif isinstance(seg, PitchSpan):
            parts.append(f"{{pitch:{seg.percent}% {serialize_segments(seg.inner)}}}")
        elif isinstance(seg, AnimationTrigger):
            parts.append(f"^animate({seg.group})")
        else:
            raise TypeError(f"unknown segment {seg!r}")
    return "".join(parts)
