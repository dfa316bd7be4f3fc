from .types import (
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
    Segment,
    Span,
    TopicScript,
    Utterance,
    VariableRef,
)
from .parser import ParseError, parse_topic
from .render import UnboundVariable, render_response
from .serialize import serialize_topic
from .validate import Issue, validate

__all__ = [
    "AnimationTrigger",
    "Concept",
    "ConceptRef",
    "Issue",
    "Literal",
    "LiteralPhrase",
    "ParseError",
    "Pause",
    "PitchSpan",
    "RandomChoice",
    "RateSpan",
    "ResponseTemplate",
    "Rule",
    "Segment",
    "Span",
    "TopicScript",
    "UnboundVariable",
    "Utterance",
    "VariableRef",
    "parse_topic",
    "render_response",
    "serialize_topic",
    "validate",
]
