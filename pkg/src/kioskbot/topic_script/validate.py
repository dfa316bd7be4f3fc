"""Structural validation of topic script values built in code.

The parser enforces the same rules while reading DSL text; this checker
covers ASTs assembled by hand (tests, tooling) and returns every violation
instead of stopping at the first.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..spotter import normalize
from .types import (
    MAX_NESTING_DEPTH,
    PAUSE_MS_MAX,
    PERCENT_MAX,
    PERCENT_MIN,
    RESERVED_CHARS,
    AnimationTrigger,
    Literal,
    LiteralPhrase,
    Pause,
    PitchSpan,
    RandomChoice,
    RateSpan,
    Segment,
    TopicScript,
    VariableRef,
)


@dataclass(frozen=True)
class Issue:
    code: str
    message: str
    where: str


def validate(script: TopicScript) -> list[Issue]:
    """Empty list iff every invariant holds."""
    issues: list[Issue] = []

    if not script.language.strip():
        issues.append(Issue("EmptyLanguage", "language tag is empty", "header"))

    seen_names: set[str] = set()
    for concept in script.concepts:
        where = f"concept '{concept.name}'"
        if concept.name in seen_names:
            issues.append(Issue("DuplicateConcept", "concept name reused", where))
        seen_names.add(concept.name)
        if not concept.phrases:
            issues.append(Issue("EmptyConcept", "concept has no phrases", where))
        normalized: set[tuple[str, ...]] = set()
        for phrase in concept.phrases:
            tokens = tuple(normalize(phrase))
            if not tokens:
                issues.append(
                    Issue("EmptyPhrase", f"phrase {phrase!r} normalizes to nothing", where)
                )
            elif tokens in normalized:
                issues.append(
                    Issue("DuplicatePhrase", f"duplicate phrase {phrase!r}", where)
                )
            else:
                normalized.add(tokens)
            if len(phrase.split()) > 8:
                issues.append(
                    Issue("PhraseTooLong", f"phrase over 8 words: {phrase!r}", where)
                )

    declared = script.concept_names()
    for idx, rule in enumerate(script.rules, start=1):
        where = f"rule {idx}"
        pattern = rule.pattern
        if isinstance(pattern, LiteralPhrase):
            if not pattern.text.strip():
                issues.append(Issue("EmptyPattern", "literal phrase is empty", where))
        elif pattern.name not in declared:
            issues.append(
                Issue("UndefinedConcept", f"undefined concept '{pattern.name}'", where)
            )
        if not rule.responses:
            issues.append(Issue("EmptyRule", "rule has no responses", where))
        for ridx, template in enumerate(rule.responses, start=1):
            _check_segments(
                template.segments, depth=0, where=f"{where} response {ridx}", issues=issues
            )

    return issues


def _check_segments(
    segments: tuple[Segment, ...], depth: int, where: str, issues: list[Issue]
) -> None:
    for seg in segments:
        if isinstance(seg, Literal):
            bad = sorted(set(seg.text) & set(RESERVED_CHARS))
            if bad:
                issues.append(
                    Issue(
                        "ReservedCharacter",
                        f"literal contains reserved {''.join(bad)!r}",
                        where,
                    )
                )
        elif isinstance(seg, VariableRef):
            if not seg.name.isidentifier():
                issues.append(
                    Issue("BadVariableName", f"invalid variable name {seg.name!r}", where)
                )
        elif isinstance(seg, Pause):
            if not (0 <= seg.ms <= PAUSE_MS_MAX):
                issues.append(
                    Issue("PauseOutOfRange", f"pause of {seg.ms} ms", where)
                )
        elif isinstance(seg, RandomChoice):
            if len(seg.alternatives) < 2:
                issues.append(
                    Issue("DegenerateChoice", "random choice with fewer than 2 alternatives", where)
                )
            if depth + 1 > MAX_NESTING_DEPTH:
                issues.append(Issue("DeepNesting", "markup nested too deeply", where))
            else:
                for alt in seg.alternatives:
                    _check_segments(alt, depth + 1, where, issues)
        elif isinstance(seg, (RateSpan, PitchSpan)):
            kind = "rate" if isinstance(seg, RateSpan) else "pitch"
            if not (PERCENT_MIN <= seg.percent <= PERCENT_MAX):
                issues.append(
                    Issue(
                        f"{kind.capitalize()}OutOfRange",
                        f"{kind} of {seg.percent}%",
                        where,
                    )
                )
            if depth + 1 > MAX_NESTING_DEPTH:
                issues.append(Issue("DeepNesting", "markup nested too deeply", where))
            else:
                _check_segments(seg.inner, depth + 1, where, issues)
        elif isinstance(seg, AnimationTrigger):
            if not seg.group.isidentifier():
                issues.append(
                    Issue("BadAnimationGroup", f"invalid group name {seg.group!r}", where)
                )
    return None
