"""Rule-based easy-language rewriting for German text.

Easy language (Leichte Sprache) asks for short sentences, common words,
and added explanations. This engine applies a configurable lexicon:

* sentences containing a split-conjunction are divided at it; after
  verb-final subordinators (weil, obwohl, wenn, ...) the clause-final verb
  is moved back to second position so the fragment reads as a main clause
* glossary terms are replaced, and a term's explanation sentence is
  inserted after its first use (once per text)
* long compounds are rewritten with an interpunct
* any sentence still over the word limit is split at commas, then chunked
* output carries one sentence per line

Everything is a pure function of (text, lexicon): applying the engine a
second time returns its own output unchanged.
"""

from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass, field
from pathlib import Path

from ..spotter import normalize
from .types import AdaptedText, Step, UnsupportedLanguage

ENGINE_ID = "rule-simplifier"

# Subordinating conjunctions that push the finite verb to clause-final
# position; fragments split after them need the verb moved forward again.
VERB_FINAL_CONJUNCTIONS = frozenset(
    {
        "weil",
        "obwohl",
        "wenn",
        "falls",
        "da",
        "dass",
        "damit",
        "bevor",
        "nachdem",
        "sobald",
        "solange",
    }
)

_ARTICLES = frozenset(
    {
        "der", "die", "das", "dem", "den", "des",
        "ein", "eine", "einen", "einem", "einer", "eines",
        "kein", "keine", "keinen", "keinem", "keiner",
        "mein", "meine", "meinen", "sein", "seine", "ihr", "ihre",
        "unser", "unsere", "dieser", "diese", "dieses", "viele", "alle",
    }
)

_PRONOUNS = frozenset({"ich", "du", "er", "sie", "es", "wir", "man"})

_SENTENCE_RE = re.compile(r"[^.!?\n]+[.!?]?")
_MIN_CLAUSE_WORDS = 2


@dataclass(frozen=True)
class SimplifierLexicon:
    split_conjunctions: tuple[str, ...] = ()
    # term -> (replacement, explanation sentence or None)
    glossary: dict[str, tuple[str, str | None]] = field(default_factory=dict)
    # compound -> interpunct form
    compound_splits: dict[str, str] = field(default_factory=dict)
    max_sentence_words: int = 12
    # conjunction -> text it is replaced with when a split happens ("" drops it)
    conjunction_replacements: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.max_sentence_words < 3:
            raise ValueError("max_sentence_words must be at least 3")
        keys = {k.lower() for k in self.glossary} | {k.lower() for k in self.compound_splits}
        for term, (replacement, _explanation) in self.glossary.items():
            if not replacement:
                raise ValueError(f"glossary replacement for {term!r} is empty")
            rkey = replacement.lower().replace("·", "")
            if rkey in keys and rkey != term.lower():
                # Chained replacements would make a second pass rewrite again.
                raise ValueError(
                    f"replacement for {term!r} is itself a lexicon key: {replacement!r}"
                )


def load_lexicon(path: str | Path) -> SimplifierLexicon:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    glossary = {
        term: (spec["replacement"], spec.get("explanation"))
        for term, spec in doc.get("glossary", {}).items()
    }
    return SimplifierLexicon(
        split_conjunctions=tuple(doc.get("split_conjunctions", ())),
        glossary=glossary,
        compound_splits=dict(doc.get("compound_splits", {})),
        max_sentence_words=int(doc.get("max_sentence_words", 12)),
        conjunction_replacements=dict(doc.get("conjunction_replacements", {})),
    )


def simplify_easy(text: str, lexicon: SimplifierLexicon) -> AdaptedText:
    """Rewrite ``text`` according to the lexicon; identity inputs pass
    through with an empty provenance list."""
    started = time.monotonic()
    output = _simplify_text(text, lexicon)
    if output == text:
        return AdaptedText(text=text, steps=(), source_language="de", output_language="de")
    duration_ms = int((time.monotonic() - started) * 1000)
    return AdaptedText(
        text=output,
        steps=(Step(ENGINE_ID, "easy", duration_ms),),
        source_language="de",
        output_language="de",
    )


class RuleSimplifier:
    """Adapter-contract wrapper; only German input is accepted."""

    engine_id = ENGINE_ID

    def __init__(self, lexicon: SimplifierLexicon, language: str = "de"):
        self.lexicon = lexicon
        self.language = language

    def simplify(self, text: str, language: str) -> AdaptedText:
        if language != self.language:
            raise UnsupportedLanguage(language, "easy-language rules exist for German only")
        return simplify_easy(text, self.lexicon)


def _simplify_text(text: str, lexicon: SimplifierLexicon) -> str:
    vocab = _LoweredLexicon(lexicon)
    out_sentences: list[str] = []
    explained: list[str] = []  # explanation sentences already emitted
    for sentence, terminator in _split_sentences(text):
        clauses = _split_clauses(sentence.split(), lexicon)
        for clause in clauses:
            clause, explanations = _apply_glossary(clause, vocab)
            chunks = _enforce_length(clause, lexicon.max_sentence_words)
            undivided = len(clauses) == 1 and len(chunks) == 1
            for chunk in chunks:
                # Only a sentence that was not divided keeps ? or !; divided
                # fragments all end as plain statements.
                end = terminator if undivided and terminator in "?!" else "."
                out_sentences.append(_finish_sentence(chunk, end))
            for explanation in explanations:
                # The glossary applies to explanation sentences too, so a
                # second pass reproduces them verbatim.
                applied_words, _ = _apply_glossary(explanation.split(), vocab)
                applied = " ".join(applied_words)
                if _contains_tokens(text, applied) or applied in explained:
                    continue
                explained.append(applied)
                for chunk in _enforce_length(applied_words, lexicon.max_sentence_words):
                    out_sentences.append(_finish_sentence(chunk, "."))
    return "\n".join(out_sentences)


def _split_sentences(text: str) -> list[tuple[str, str]]:
    sentences: list[tuple[str, str]] = []
    for m in _SENTENCE_RE.finditer(text):
        raw = m.group(0).strip()
        if not raw:
            continue
        terminator = raw[-1] if raw[-1] in ".!?" else "."
        body = raw.rstrip(".!?").strip()
        if body:
            sentences.append((body, terminator))
    return sentences


def _split_clauses(words: list[str], lexicon: SimplifierLexicon) -> list[list[str]]:
    """Recursively divide at the leftmost split-conjunction that leaves two
    viable clauses."""
    for i, word in enumerate(words):
        core = _strip_edge_punct(word).lower()
        if core not in lexicon.split_conjunctions:
            continue
        left = list(words[:i])
        right = words[i + 1 :]
        if len(left) < _MIN_CLAUSE_WORDS or len(right) < _MIN_CLAUSE_WORDS:
            continue
        left[-1] = left[-1].rstrip(",;")
        left = [w for w in left if w]
        replacement = lexicon.conjunction_replacements.get(core, "")
        if core in VERB_FINAL_CONJUNCTIONS:
            right = _front_final_verb(right)
        if replacement:
            right = [replacement, *right]
        return _split_clauses(left, lexicon) + _split_clauses(right, lexicon)
    return [words]


def _front_final_verb(words: list[str]) -> list[str]:
    """Move the clause-final verb of a verb-final subordinate clause to
    second position: "das Amt voll ist" -> "das Amt ist voll"."""
    if len(words) < 3:
        return words
    verb = words[-1]
    rest = words[:-1]
    head = 0
    if rest[0].lower() not in _PRONOUNS:
        while head < len(rest) - 1 and rest[head].lower() in _ARTICLES:
            head += 1
    return rest[: head + 1] + [verb] + rest[head + 1 :]


class _LoweredLexicon:
    def __init__(self, lexicon: SimplifierLexicon):
        self.glossary = {k.lower(): v for k, v in lexicon.glossary.items()}
        self.compounds = {k.lower(): v for k, v in lexicon.compound_splits.items()}


def _apply_glossary(words: list[str], vocab: _LoweredLexicon) -> tuple[list[str], list[str]]:
    """Replace glossary terms and compounds token by token; returns the new
    words plus explanation sentences for terms used in this clause."""
    out: list[str] = []
    explanations: list[str] = []
    for word in words:
        prefix, core, suffix = _split_edge_punct(word)
        key = core.lower().replace("·", "")
        if key in vocab.glossary:
            replacement, explanation = vocab.glossary[key]
            out.append(prefix + replacement + suffix)
            if explanation:
                explanations.append(explanation)
        elif key in vocab.compounds:
            out.append(prefix + vocab.compounds[key] + suffix)
        else:
            out.append(word)
    return out, explanations


def _enforce_length(words: list[str], max_words: int) -> list[list[str]]:
    if not words:
        return []
    if len(words) <= max_words:
        return [words]
    # Split at comma boundaries first, merging fragments that would be too
    # short; interior commas survive a merge so the text stays readable.
    fragments: list[list[str]] = []
    current: list[str] = []
    for word in words:
        current.append(word)
        if word.endswith((",", ";")):
            fragments.append(current)
            current = []
    if current:
        fragments.append(current)
    merged: list[list[str]] = []
    for fragment in fragments:
        if merged and (len(fragment) < _MIN_CLAUSE_WORDS or len(merged[-1]) < _MIN_CLAUSE_WORDS):
            merged[-1].extend(fragment)
        else:
            merged.append(fragment)
    out: list[list[str]] = []
    for fragment in merged:
        if len(fragment) <= max_words:
            out.append(fragment)
        else:
            out.extend(
                fragment[i : i + max_words] for i in range(0, len(fragment), max_words)
            )
    return out


def _finish_sentence(words: list[str], terminator: str) -> str:
    text = " ".join(words).strip()
    text = text.rstrip(".!?,;").rstrip()
    if text and text[0].islower():
        text = text[0].upper() + text[1:]
    return text + terminator


def _contains_tokens(haystack: str, needle: str) -> bool:
    hay = normalize(haystack)
    pin = normalize(needle)
    if not pin:
        return True
    for start in range(len(hay) - len(pin) + 1):
        if hay[start : start + len(pin)] == pin:
            return True
    return False


def _strip_edge_punct(word: str) -> str:
    return _split_edge_punct(word)[1]


_EDGE_PUNCT_RE = re.compile(r"^(\W*)(.*?)(\W*)$", re.UNICODE)


def _split_edge_punct(word: str) -> tuple[str, str, str]:
    m = _EDGE_PUNCT_RE.match(word)
    assert m is not None
    prefix, core, suffix = m.group(1), m.group(2), m.group(3)
    # Interpuncts belong to the word core, not to edge punctuation.
    return prefix, core, suffix
