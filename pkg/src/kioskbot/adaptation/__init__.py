from .types import AdaptationMode, AdaptedText, Step, UnsupportedLanguage
from .simplify import RuleSimplifier, SimplifierLexicon, load_lexicon, simplify_easy
from .translate import PhraseTable, PhraseTableTranslator, load_phrase_table, translate_offline
from .remote import (
    RemoteEndpoint,
    RemoteError,
    RemoteSimplifier,
    RemoteTranslator,
    simplify_remote,
    translate_remote,
)
from .pipeline import AdaptError, EngineSet, adapt

__all__ = [
    "AdaptError",
    "AdaptationMode",
    "AdaptedText",
    "EngineSet",
    "PhraseTable",
    "PhraseTableTranslator",
    "RemoteEndpoint",
    "RemoteError",
    "RemoteSimplifier",
    "RemoteTranslator",
    "RuleSimplifier",
    "SimplifierLexicon",
    "Step",
    "UnsupportedLanguage",
    "adapt",
    "load_lexicon",
    "load_phrase_table",
    "simplify_easy",
    "simplify_remote",
    "translate_offline",
    "translate_remote",
]
