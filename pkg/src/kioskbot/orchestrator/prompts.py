"""Per-language prompt catalog.

All of the robot's own phrases live in a JSON file, one block per language
tag, so wording is configuration rather than code.
"""

from __future__ import annotations

import json
from pathlib import Path

PROMPT_KEYS = (
    "greeting",
    "reprompt",
    "farewell",
    "not_understood",
    "confirm_easy",
    "confirm_translate",
    "language_unavailable",
)

PromptCatalog = dict[str, dict[str, str]]


def load_prompt_catalog(path: str | Path) -> PromptCatalog:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(doc, dict):
        raise ValueError("prompt catalog must map language tags to prompt sets")
    catalog: PromptCatalog = {}
    for lang, prompts in doc.items():
        missing = [key for key in PROMPT_KEYS if key not in prompts]
        if missing:
            raise ValueError(f"prompt catalog for {lang!r} misses {missing}")
        catalog[lang] = {key: str(prompts[key]) for key in PROMPT_KEYS}
    return catalog
