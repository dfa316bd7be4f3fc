import random

import pytest

from kioskbot.topic_script import (
    AnimationTrigger,
    Concept,
    ConceptRef,
    Literal,
    LiteralPhrase,
    ParseError,
    Pause,
    PitchSpan,
    RandomChoice,
    RateSpan,
    ResponseTemplate,
    Rule,
    Span,
    TopicScript,
    UnboundVariable,
    VariableRef,
    parse_topic,
    render_response,
    serialize_topic,
    validate,
)
from helpers import generate_script

MINIMAL = "topic: ~greeting\nlanguage: de\n"


class TestParse:
    def test_minimal_header(self):
        script = parse_topic(MINIMAL)
        assert script == TopicScript(name="greeting", language="de")

    def test_concept_and_rule(self):
        source = (
            "topic: ~permits\n"
            "language: de\n"
            'concept:(permit) ["residence permit" permit]\n'
            "u:(~permit) Einen Moment bitte.\n"
        )
        script = parse_topic(source)
        assert script.concepts == (
            Concept(name="permit", phrases=("residence permit", "permit")),
        )
        assert script.rules == (
            Rule(
                pattern=ConceptRef(name="permit"),
                responses=(
                    ResponseTemplate(segments=(Literal(text="Einen Moment bitte."),)),
                ),
            ),
        )

    def test_undefined_concept_reference(self):
        source = MINIMAL + "u:(~visa) Moment.\n"
        with pytest.raises(ParseError) as excinfo:
            parse_topic(source)
        assert "undefined concept 'visa'" in str(excinfo.value)
        assert excinfo.value.line == 3

    def test_duplicate_concept(self):
        source = MINIMAL + "concept:(a) [x]\nconcept:(a) [y]\n"
        with pytest.raises(ParseError, match="duplicate concept"):
            parse_topic(source)

    def test_out_of_range_pause(self):
        with pytest.raises(ParseError, match="pause above"):
            parse_topic(MINIMAL + "u:(hi) wait {pause:10001} here\n")

    def test_out_of_range_rate(self):
        with pytest.raises(ParseError, match="rate outside"):
            parse_topic(MINIMAL + "u:(hi) {rate:201% zu schnell}\n")

    def test_nesting_too_deep(self):
        with pytest.raises(ParseError, match="nesting deeper"):
            parse_topic(MINIMAL + "u:(hi) [[[[a | b] | c] | d] | e]\n")

    def test_single_alternative_choice(self):
        with pytest.raises(ParseError, match="at least 2 alternatives"):
            parse_topic(MINIMAL + "u:(hi) [solo]\n")

    def test_comments_and_blank_lines_ignored(self):
        source = "# a comment\n\ntopic: ~x\n# another\nlanguage: de\n"
        assert parse_topic(source).name == "x"

    def test_error_carries_line_and_column(self):
        with pytest.raises(ParseError) as excinfo:
            parse_topic(MINIMAL + "u:(hi) ok } nope\n")
        assert excinfo.value.line == 3
        assert excinfo.value.column is not None

    def test_multiple_rule_lines_merge_by_pattern(self):
        source = MINIMAL + "u:(hi) Erste Antwort.\nu:(hi) Zweite Antwort.\n"
        script = parse_topic(source)
        assert len(script.rules) == 1
        assert len(script.rules[0].responses) == 2


class TestSerialize:
    def test_minimal_round_trip(self):
        script = parse_topic(MINIMAL)
        assert parse_topic(serialize_topic(script)) == script

    def test_pause_token_appears(self):
        script = parse_topic(MINIMAL + "u:(hi) warte {pause:300} kurz\n")
        assert "{pause:300}" in serialize_topic(script)
        assert parse_topic(serialize_topic(script)) == script

    def test_nested_choice_round_trip(self):
        source = MINIMAL + "u:(hi) [Guten [Tag | Morgen] | Hallo] $name\n"
        script = parse_topic(source)
        assert parse_topic(serialize_topic(script)) == script

    def test_fixture_scripts_round_trip(self, fixtures_dir):
        for path in sorted((fixtures_dir / "topics").glob("*.topic")):
            script = parse_topic(path.read_text(encoding="utf-8"))
            assert parse_topic(serialize_topic(script)) == script, path.name

    def test_generated_scripts_round_trip(self):
        rng = random.Random(42)
        for i in range(100):
            script = generate_script(rng)
            assert validate(script) == [], f"generator produced invalid script #{i}"
            assert parse_topic(serialize_topic(script)) == script, f"script #{i}"


class TestRender:
    def test_single_literal(self):
        template = ResponseTemplate(segments=(Literal(text="Hello"),))
        utterance = render_response(template, {}, seed=0)
        assert utterance.plain_text == "Hello"
        assert utterance.spans == ()

    def test_random_choice_enumeration(self):
        template = ResponseTemplate(
            segments=(
                RandomChoice(
                    alternatives=(
                        (Literal(text="Good day"),),
                        (Literal(text="Welcome"),),
                    )
                ),
            )
        )
        seen = {render_response(template, {}, seed=s).plain_text for s in range(10)}
        assert seen == {"Good day", "Welcome"}

    def test_pause_offset(self):
        template = ResponseTemplate(
            segments=(Literal(text="Wait"), Pause(ms=300), Literal(text=" please"))
        )
        utterance = render_response(template, {}, seed=0)
        assert utterance.plain_text == "Wait please"
        assert utterance.spans == (Span(start=4, end=4, kind="pause", value=300),)

    def test_variable_binding(self):
        template = ResponseTemplate(
            segments=(Literal(text="Guten Tag "), VariableRef(name="name"))
        )
        utterance = render_response(template, {"name": "Frau Meyer"}, seed=0)
        assert utterance.plain_text == "Guten Tag Frau Meyer"

    def test_unbound_variable(self):
        template = ResponseTemplate(segments=(VariableRef(name="name"),))
        with pytest.raises(UnboundVariable):
            render_response(template, {}, seed=0)

    def test_animation_trigger_offset(self):
        template = ResponseTemplate(
            segments=(Literal(text="Hallo"), AnimationTrigger(group="greeting"))
        )
        utterance = render_response(template, {}, seed=0)
        assert utterance.animation_triggers == ((5, "greeting"),)

    def test_markup_spans_cover_inner_text(self):
        template = ResponseTemplate(
            segments=(
                Literal(text="Bitte "),
                RateSpan(percent=80, inner=(Literal(text="langsam sprechen"),)),
            )
        )
        utterance = render_response(template, {}, seed=0)
        assert utterance.plain_text == "Bitte langsam sprechen"
        assert utterance.spans == (Span(start=6, end=22, kind="rate", value=80),)

    def test_deterministic_for_fixed_seed(self):
        rng = random.Random(3)
        for _ in range(25):
            script = generate_script(rng)
            for rule in script.rules:
                for template in rule.responses:
                    bindings = {"alpha": "A", "beta": "B", "gamma": "C", "delta": "D",
                                "topic_a": "T", "topic_b": "U", "greet": "G"}
                    first = render_response(template, bindings, seed=99)
                    second = render_response(template, bindings, seed=99)
                    assert first == second

    def test_spans_properly_nested(self):
        rng = random.Random(5)
        for _ in range(50):
            script = generate_script(rng)
            bindings = {name: "X" for name in
                        ("alpha", "beta", "gamma", "delta", "topic_a", "topic_b", "greet")}
            for rule in script.rules:
                for template in rule.responses:
                    utterance = render_response(template, bindings, seed=7)
                    for a in utterance.spans:
                        assert 0 <= a.start <= a.end <= len(utterance.plain_text)
                        for b in utterance.spans:
                            if a is b:
                                continue
                            # no partial overlap: disjoint or contained
                            assert (
                                a.end <= b.start
                                or b.end <= a.start
                                or (a.start <= b.start and b.end <= a.end)
                                or (b.start <= a.start and a.end <= b.end)
                            )


class TestValidate:
    def test_valid_script_has_no_issues(self):
        script = parse_topic(MINIMAL + 'concept:(a) [x]\nu:(~a) hallo\n')
        assert validate(script) == []

    def test_duplicate_phrase(self):
        script = TopicScript(
            name="x", language="de",
            concepts=(Concept(name="a", phrases=("Pass", "pass!")),),
        )
        assert any(i.code == "DuplicatePhrase" for i in validate(script))

    def test_degenerate_choice(self):
        script = TopicScript(
            name="x", language="de",
            rules=(
                Rule(
                    pattern=LiteralPhrase(text="hi"),
                    responses=(
                        ResponseTemplate(
                            segments=(RandomChoice(alternatives=((Literal(text="a"),),)),)
                        ),
                    ),
                ),
            ),
        )
        assert any(i.code == "DegenerateChoice" for i in validate(script))

    def test_undefined_concept(self):
        script = TopicScript(
            name="x", language="de",
            rules=(
                Rule(pattern=ConceptRef(name="ghost"),
                     responses=(ResponseTemplate(segments=(Literal(text="a"),)),)),
            ),
        )
        assert any(i.code == "UndefinedConcept" for i in validate(script))

    def test_reserved_character_flagged(self):
        script = TopicScript(
            name="x", language="de",
            rules=(
                Rule(pattern=LiteralPhrase(text="hi"),
                     responses=(ResponseTemplate(segments=(Literal(text="a | b"),)),)),
            ),
        )
        assert any(i.code == "ReservedCharacter" for i in validate(script))

    def test_out_of_range_values_flagged(self):
        script = TopicScript(
            name="x", language="de",
            rules=(
                Rule(
                    pattern=LiteralPhrase(text="hi"),
                    responses=(
                        ResponseTemplate(
                            segments=(
                                Pause(ms=20_000),
                                RateSpan(percent=300, inner=(Literal(text="a"),)),
                                PitchSpan(percent=10, inner=(Literal(text="b"),)),
                            )
                        ),
                    ),
                ),
            ),
        )
        codes = {i.code for i in validate(script)}
        assert {"PauseOutOfRange", "RateOutOfRange", "PitchOutOfRange"} <= codes
