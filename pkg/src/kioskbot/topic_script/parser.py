"""Line-oriented parser for the topic DSL.

Grammar (one topic per file, ``#`` starts a full-line comment):

    topic: ~<name>
    language: <tag>
    concept:(<name>) ["<multi word phrase>" <word> ...]
    u:(~<conceptName>) <response>
    u:(<literal phrase>) <response>

Response syntax: plain text, ``$name`` variables, ``[alt | alt | ...]``
random choices, ``{pause:<ms>}``, ``{rate:<pct>% ...}`` and
``{pitch:<pct>% ...}`` spans, and ``^animate(<group>)`` triggers. Repeated
``u:`` lines with the same pattern accumulate responses on one rule.

The parser is strict: out-of-range markup values, duplicate concepts,
undefined concept references and malformed syntax all raise ``ParseError``
with the offending line and column rather than being repaired silently.
"""

from __future__ import annotations

import re

from ..spotter import normalize
from .types import (
    MAX_NESTING_DEPTH,
    PAUSE_MS_MAX,
    PERCENT_MAX,
    PERCENT_MIN,
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
    TopicScript,
    VariableRef,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(f"{message} ({where})")


_TOPIC_RE = re.compile(r"^topic:\s*~([A-Za-z_]\w*)\s*$")
_LANGUAGE_RE = re.compile(r"^language:\s*(\S+)\s*$")
_CONCEPT_RE = re.compile(r"^concept:\(([A-Za-z_]\w*)\)\s*\[(.*)\]\s*$")
_RULE_RE = re.compile(r"^u:\(([^)]+)\)\s?(.*)$")
_PHRASE_ITEM_RE = re.compile(r'"([^"]*)"|(\S+)')
_IDENT_RE = re.compile(r"[A-Za-z_]\w*")
_BRACE_HEAD_RE = re.compile(r"(pause|rate|pitch):(\d+)")
_ANIMATE_RE = re.compile(r"\^animate\(([A-Za-z_]\w*)\)")


def parse_topic(source: str) -> TopicScript:
    """Parse DSL text into a validated ``TopicScript``."""
    name: str | None = None
    language: str | None = None
    concepts: list[Concept] = []
    concept_lines: dict[str, int] = {}
    # Rules keyed by pattern so repeated u:(...) lines merge, in order.
    rule_order: list[ConceptRef | LiteralPhrase] = []
    rule_responses: dict[ConceptRef | LiteralPhrase, list[ResponseTemplate]] = {}
    rule_lines: dict[ConceptRef | LiteralPhrase, int] = {}

    for line_no, raw in enumerate(source.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue

        m = _TOPIC_RE.match(line)
        if m:
            if name is not None:
                raise ParseError("duplicate topic header", line_no)
            name = m.group(1)
            continue

        m = _LANGUAGE_RE.match(line)
        if m:
            if language is not None:
                raise ParseError("duplicate language header", line_no)
            language = m.group(1)
            continue

        m = _CONCEPT_RE.match(line)
        if m:
            cname, body = m.group(1), m.group(2)
            if cname in concept_lines:
                raise ParseError(f"duplicate concept '{cname}'", line_no)
            phrases = _parse_phrases(body, line_no)
            concepts.append(Concept(name=cname, phrases=tuple(phrases)))
            concept_lines[cname] = line_no
            continue

        m = _RULE_RE.match(line)
        if m:
            pattern_text, response_text = m.group(1).strip(), m.group(2).strip()
            pattern = _parse_pattern(pattern_text, line_no)
            if not response_text:
                raise ParseError("rule has no response", line_no)
            lead_ws = len(raw) - len(raw.lstrip())
            inner_ws = len(m.group(2)) - len(m.group(2).lstrip())
            offset = lead_ws + m.start(2) + inner_ws + 1
            segments = _ResponseParser(response_text, line_no, offset).parse()
            template = ResponseTemplate(segments=tuple(segments))
            if pattern not in rule_responses:
                rule_order.append(pattern)
                rule_responses[pattern] = []
                rule_lines[pattern] = line_no
            rule_responses[pattern].append(template)
            continue

        raise ParseError(f"unrecognized line: {line}", line_no)

    if name is None:
        raise ParseError("missing 'topic:' header", 1)
    if language is None:
        raise ParseError("missing 'language:' header", 1)

    declared = set(concept_lines)
    for pattern in rule_order:
        if isinstance(pattern, ConceptRef) and pattern.name not in declared:
            raise ParseError(
                f"undefined concept '{pattern.name}'", rule_lines[pattern]
            )

    for concept in concepts:
        seen: set[tuple[str, ...]] = set()
        for phrase in concept.phrases:
            tokens = tuple(normalize(phrase))
            if not tokens:
                raise ParseError(
                    f"phrase {phrase!r} in concept '{concept.name}' normalizes to nothing",
                    concept_lines[concept.name],
                )
            if tokens in seen:
                raise ParseError(
                    f"duplicate phrase {phrase!r} in concept '{concept.name}'",
                    concept_lines[concept.name],
                )
            seen.add(tokens)

    rules = tuple(
        Rule(pattern=p, responses=tuple(rule_responses[p])) for p in rule_order
    )
    return TopicScript(
        name=name, language=language, concepts=tuple(concepts), rules=rules
    )


def _parse_phrases(body: str, line_no: int) -> list[str]:
    phrases: list[str] = []
    pos = 0
    for m in _PHRASE_ITEM_RE.finditer(body):
        between = body[pos : m.start()]
        if between.strip():
            raise ParseError(f"malformed phrase list near {between.strip()!r}", line_no)
        quoted, bare = m.group(1), m.group(2)
        phrase = quoted if quoted is not None else bare
        if not phrase.strip():
            raise ParseError("empty phrase in concept", line_no)
        if len(phrase.split()) > 8:
            raise ParseError(f"phrase longer than 8 words: {phrase!r}", line_no)
        phrases.append(phrase)
        pos = m.end()
    if body[pos:].strip():
        raise ParseError(f"malformed phrase list near {body[pos:].strip()!r}", line_no)
    if not phrases:
        raise ParseError("concept has no phrases", line_no)
    return phrases


def _parse_pattern(text: str, line_no: int) -> ConceptRef | LiteralPhrase:
    if text.startswith("~"):
        ref = text[1:]
        if not _IDENT_RE.fullmatch(ref):
            raise ParseError(f"invalid concept reference '~{ref}'", line_no)
        return ConceptRef(name=ref)
    if not text:
        raise ParseError("empty rule pattern", line_no)
    return LiteralPhrase(text=text)


class _ResponseParser:
    """Recursive descent over one response string.

    Column numbers reported in errors are 1-based positions in the source
    line, so ``offset`` is where the response text starts on that line.
    """

    def __init__(self, text: str, line_no: int, offset: int):
        self.text = text
        self.line = line_no
        self.offset = offset
        self.pos = 0

    def parse(self) -> list[Segment]:
        segments = self._segments(depth=0, stop=None)
        if self.pos < len(self.text):
            self._fail(f"unexpected '{self.text[self.pos]}'")
        return segments

    def _fail(self, message: str) -> None:
        raise ParseError(message, self.line, self.offset + self.pos)

    def _segments(self, depth: int, stop: str | None) -> list[Segment]:
        segments: list[Segment] = []
        literal: list[str] = []

        def flush() -> None:
            if literal:
                segments.append(Literal(text="".join(literal)))
                literal.clear()

        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if stop and ch in stop:
                break
            if ch == "$":
                flush()
                segments.append(self._variable())
            elif ch == "[":
                flush()
                segments.append(self._choice(depth))
            elif ch == "{":
                flush()
                segments.append(self._brace(depth))
            elif ch == "^":
                flush()
                segments.append(self._animate())
            elif ch in "]}|":
                self._fail(f"unexpected '{ch}'")
            else:
                literal.append(ch)
                self.pos += 1
        flush()
        return segments

    def _variable(self) -> VariableRef:
        start = self.pos
        self.pos += 1  # "$"
        m = _IDENT_RE.match(self.text, self.pos)
        if not m:
            self.pos = start
            self._fail("'$' must be followed by a variable name")
        self.pos = m.end()
        return VariableRef(name=m.group(0))

    def _choice(self, depth: int) -> RandomChoice:
        if depth + 1 > MAX_NESTING_DEPTH:
            self._fail(f"nesting deeper than {MAX_NESTING_DEPTH}")
        self.pos += 1  # "["
        alternatives: list[tuple[Segment, ...]] = []
        while True:
            segs = self._segments(depth + 1, stop="|]")
            alternatives.append(tuple(_trim(segs)))
            if self.pos >= len(self.text):
                self._fail("unterminated '['")
            if self.text[self.pos] == "|":
                self.pos += 1
                continue
            self.pos += 1  # "]"
            break
        if len(alternatives) < 2:
            self._fail("random choice needs at least 2 alternatives")
        return RandomChoice(alternatives=tuple(alternatives))

    def _brace(self, depth: int) -> Segment:
        open_pos = self.pos
        self.pos += 1  # "{"
        m = _BRACE_HEAD_RE.match(self.text, self.pos)
        if not m:
            self.pos = open_pos
            self._fail("expected {pause:<ms>}, {rate:<pct>% ...} or {pitch:<pct>% ...}")
        kind, value = m.group(1), int(m.group(2))
        self.pos = m.end()
        if kind == "pause":
            if not self._eat("}"):
                self._fail("unterminated {pause:...}")
            if value > PAUSE_MS_MAX:
                self.pos = open_pos
                self._fail(f"pause above {PAUSE_MS_MAX} ms: {value}")
            return Pause(ms=value)
        # rate / pitch span: "{rate:NN% inner}"
        if not self._eat("%"):
            self._fail(f"'{kind}' value must end with '%'")
        if not (PERCENT_MIN <= value <= PERCENT_MAX):
            self.pos = open_pos
            self._fail(f"{kind} outside {PERCENT_MIN}-{PERCENT_MAX}%: {value}")
        if depth + 1 > MAX_NESTING_DEPTH:
            self._fail(f"nesting deeper than {MAX_NESTING_DEPTH}")
        inner = _trim(self._segments(depth + 1, stop="}"))
        if not self._eat("}"):
            self._fail(f"unterminated {{{kind}:...}}")
        span_cls = RateSpan if kind == "rate" else PitchSpan
        return span_cls(percent=value, inner=tuple(inner))

    def _animate(self) -> AnimationTrigger:
        m = _ANIMATE_RE.match(self.text, self.pos)
        if not m:
            self._fail("expected ^animate(<group>)")
        self.pos = m.end()
        return AnimationTrigger(group=m.group(1))

    def _eat(self, ch: str) -> bool:
        if self.pos < len(self.text) and self.text[self.pos] == ch:
            self.pos += 1
            return True
        return False


def _trim(segments: list[Segment]) -> list[Segment]:
    """Strip leading/trailing whitespace of the outermost literals so that
    serialization round-trips to the same AST."""
    out = list(segments)
    if out and isinstance(out[0], Literal):
        text = out[0].text.lstrip()
        if text:
            out[0] = Literal(text=text)
        else:
            out.pop(0)
    if out and isinstance(out[-1], Literal):
        text = out[-1].text.rstrip()
        if text:
            out[-1] = Literal(text=text)
        else:
            out.pop()
    return out
