"""Shared test machinery: seeded generators and invariant checkers."""

from __future__ import annotations

import random
from collections import Counter

from kioskbot.adaptation.types import AdaptedText
from kioskbot.knowledge_base import KBResponse
from kioskbot.orchestrator import (
    AdaptationFailed,
    AdaptationReady,
    ButtonPress,
    Display,
    KBReady,
    PersonAppeared,
    PersonLost,
    Say,
    SessionState,
    SpeechDone,
    TimerFired,
    UserUtterance,
    handle_event,
)
from kioskbot.topic_script.types import (
    AnimationTrigger,
    Concept,
    ConceptRef,
    Literal,
    LiteralPhrase,
    Pause,
    PitchSpan,
    RandomChoice,
    RateSpan,
    ResponseTemplate,
    Rule,
    TopicScript,
    VariableRef,
)

# --- random event sequences for machine fuzzing -----------------------------

_UTTERANCE_POOL = (
    "I need a residence permit please",
    "wo bekomme ich einen personalausweis",
    "easy language please",
    "translation",
    "dansk tak",
    "hallo",
    "völlig unverständliches gemurmel",
    "",
    "arbeitserlaubnis",
    "wann geöffnet",
)

_BUTTON_POOL = ("easy", "translate", "lang:da", "lang:de", "lang:fr", "bogus")


def random_event(rng: random.Random, at_ms: int):
    kind = rng.randrange(9)
    if kind == 0:
        return PersonAppeared(at_ms=at_ms)
    if kind == 1:
        return PersonLost(at_ms=at_ms)
    if kind == 2:
        return UserUtterance(rng.choice(_UTTERANCE_POOL), at_ms=at_ms)
    if kind == 3:
        return ButtonPress(rng.choice(_BUTTON_POOL), at_ms=at_ms)
    if kind == 4:
        return TimerFired(rng.choice(("idle", "bogus")), at_ms=at_ms)
    if kind == 5:
        found = rng.random() < 0.7
        response = (
            KBResponse(term="x", found=True, topic="t", answer="Eine Antwort vom Amt.")
            if found
            else KBResponse(term="x", found=False)
        )
        return KBReady(response, at_ms=at_ms)
    if kind == 6:
        result = AdaptedText(
            text="Eine einfache Antwort.", steps=(), source_language="de",
            output_language="de",
        )
        return AdaptationReady(result, at_ms=at_ms)
    if kind == 7:
        return AdaptationFailed("boom", at_ms=at_ms)
    return SpeechDone(at_ms=at_ms)


def random_event_sequence(rng: random.Random, length: int) -> list:
    at_ms = 0
    events = []
    for _ in range(length):
        at_ms += rng.randrange(0, 4000)
        events.append(random_event(rng, at_ms))
    return events


def apply_events(state: SessionState, events, config) -> list[tuple[SessionState, list]]:
    """Run a sequence through the machine; returns (state, batch) per event."""
    out = []
    for event in events:
        state, commands = handle_event(state, event, config)
        out.append((state, commands))
    return out


def unpaired_says(commands) -> list[str]:
    """Texts of Say commands that lack a same-batch Display with equal
    text (1:1 pairing); empty when the redundancy invariant holds."""
    says = Counter(c.utterance.plain_text for c in commands if isinstance(c, Say))
    displays = Counter(c.text for c in commands if isinstance(c, Display))
    missing = says - displays
    return list(missing.elements())


# --- random topic scripts for round-trip testing ----------------------------

_WORDS = (
    "amt", "antrag", "bitte", "card", "danke", "formular", "hilfe",
    "moment", "pass", "permit", "termin", "warten",
)
_IDENTS = ("alpha", "beta", "gamma", "delta", "topic_a", "topic_b", "greet")


def _literal(rng: random.Random, after_variable: bool) -> Literal:
    words = rng.sample(_WORDS, rng.randint(1, 3))
    text = " ".join(words)
    if after_variable:
        text = " " + text  # keep the variable name from swallowing the literal
    if rng.random() < 0.3:
        text += rng.choice((".", "!", "?", ","))
    return Literal(text=text)


def _segments(rng: random.Random, depth: int, min_len: int = 1) -> tuple:
    segments = []
    length = rng.randint(min_len, 3)
    while len(segments) < length:
        previous = segments[-1] if segments else None
        choice = rng.randrange(7)
        if choice == 0 and depth < 3:
            segments.append(
                RandomChoice(
                    alternatives=tuple(
                        _segments(rng, depth + 1) for _ in range(rng.randint(2, 3))
                    )
                )
            )
        elif choice == 1 and depth < 3:
            segments.append(RateSpan(percent=rng.randint(50, 200), inner=_segments(rng, depth + 1)))
        elif choice == 2 and depth < 3:
            segments.append(PitchSpan(percent=rng.randint(50, 200), inner=_segments(rng, depth + 1)))
        elif choice == 3:
            segments.append(VariableRef(name=rng.choice(_IDENTS)))
        elif choice == 4:
            segments.append(Pause(ms=rng.randint(0, 10_000)))
        elif choice == 5:
            segments.append(AnimationTrigger(group=rng.choice(_IDENTS)))
        else:
            if isinstance(previous, Literal):
                continue  # adjacent literals would merge on reparse
            segments.append(_literal(rng, after_variable=isinstance(previous, VariableRef)))
    # Container boundaries are whitespace-trimmed by the parser; the
    # generator never emits edge whitespace, except after a variable, which
    # is illegal in first position anyway.
    if isinstance(segments[0], Literal) and segments[0].text.startswith(" "):
        segments[0] = Literal(text=segments[0].text.lstrip())
    return tuple(segments)


def generate_script(rng: random.Random) -> TopicScript:
    concepts = []
    used_names = set()
    for _ in range(rng.randint(0, 3)):
        name = rng.choice(_IDENTS)
        if name in used_names:
            continue
        used_names.add(name)
        phrases = []
        seen = set()
        for _ in range(rng.randint(1, 4)):
            phrase = " ".join(rng.sample(_WORDS, rng.randint(1, 3)))
            key = tuple(phrase.split())
            if key in seen:
                continue
            seen.add(key)
            phrases.append(phrase)
        concepts.append(Concept(name=name, phrases=tuple(phrases)))

    rules = []
    used_patterns = set()
    for concept in concepts:
        if rng.random() < 0.8:
            pattern = ConceptRef(name=concept.name)
            used_patterns.add(pattern)
            responses = tuple(
                ResponseTemplate(segments=_segments(rng, 0))
                for _ in range(rng.randint(1, 2))
            )
            rules.append(Rule(pattern=pattern, responses=responses))
    for _ in range(rng.randint(0, 2)):
        pattern = LiteralPhrase(text=" ".join(rng.sample(_WORDS, rng.randint(1, 3))))
        if pattern in used_patterns:
            continue
        used_patterns.add(pattern)
        rules.append(
            Rule(pattern=pattern, responses=(ResponseTemplate(segments=_segments(rng, 0)),))
        )

    return TopicScript(
        name=rng.choice(_IDENTS),
        language=rng.choice(("de", "da", "en")),
        concepts=tuple(concepts),
        rules=tuple(rules),
    )
