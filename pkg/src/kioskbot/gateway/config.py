"""Configuration file handling.

One JSON document wires the whole kiosk: where the knowledge store, topic
scripts, and prompt catalog live, which adaptation engines to use (offline
lexicon/phrase-table or remote endpoints), the installed voice packs,
animation groups, speech rate, and the idle timeout. Relative paths are
resolved against the config file's directory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

DEFAULT_MODE_KEYWORDS: dict[str, list[str]] = {
    "easy": ["easy language", "leichte sprache", "einfache sprache"],
    "translate": ["translation", "übersetzung", "übersetzen"],
    "lang:da": ["danish", "dänisch", "dansk"],
    "lang:de": ["german", "deutsch"],
}


@dataclass(frozen=True)
class EngineConfig:
    mode: str = "offline"  # "offline" | "remote"
    lexicon: Path | None = None
    phrase_table: Path | None = None
    simplifier_url: str | None = None
    translator_url: str | None = None
    attempt_timeout_s: float = 2.5
    total_deadline_s: float = 5.0


@dataclass(frozen=True)
class AppConfig:
    kb_store: Path
    topic_scripts: tuple[Path, ...]
    prompt_catalog: Path
    engines: EngineConfig
    voice_packs: frozenset[str] = frozenset({"de", "da"})
    animation_groups: dict[str, tuple[str, ...]] = field(default_factory=dict)
    cps: int = 15
    idle_ms: int = 10_000
    source_language: str = "de"
    default_target_language: str = "da"
    mode_keywords: dict[str, list[str]] = field(default_factory=lambda: dict(DEFAULT_MODE_KEYWORDS))
    rng_seed: int = 0


class ConfigError(Exception):
    pass


def load_config(path: str | Path) -> AppConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    base = path.parent

    def _resolve(p: str) -> Path:
        candidate = Path(p)
        return candidate if candidate.is_absolute() else base / candidate

    try:
        engines_doc = doc.get("engines", {})
        engines = EngineConfig(
            mode=engines_doc.get("mode", "offline"),
            lexicon=_resolve(engines_doc["lexicon"]) if engines_doc.get("lexicon") else None,
            phrase_table=(
                _resolve(engines_doc["phrase_table"]) if engines_doc.get("phrase_table") else None
            ),
            simplifier_url=engines_doc.get("simplifier_url"),
            translator_url=engines_doc.get("translator_url"),
            attempt_timeout_s=float(engines_doc.get("attempt_timeout_s", 2.5)),
            total_deadline_s=float(engines_doc.get("total_deadline_s", 5.0)),
        )
        config = AppConfig(
            kb_store=_resolve(doc["kb_store"]),
            topic_scripts=tuple(_resolve(p) for p in doc.get("topic_scripts", [])),
            prompt_catalog=_resolve(doc["prompt_catalog"]),
            engines=engines,
            voice_packs=frozenset(doc.get("voice_packs", ["de", "da"])),
            animation_groups={
                name: tuple(members)
                for name, members in doc.get("animation_groups", {}).items()
            },
            cps=int(doc.get("cps", 15)),
            idle_ms=int(doc.get("idle_ms", 10_000)),
            source_language=doc.get("source_language", "de"),
            default_target_language=doc.get("default_target_language", "da"),
            mode_keywords=doc.get("mode_keywords", dict(DEFAULT_MODE_KEYWORDS)),
            rng_seed=int(doc.get("rng_seed", 0)),
        )
    except KeyError as exc:
        raise ConfigError(f"config misses required field {exc}") from exc

    _check(config)
    return config


def _check(config: AppConfig) -> None:
    if config.idle_ms <= 0:
        raise ConfigError("idle_ms must be positive")
    if config.cps <= 0:
        raise ConfigError("cps must be positive")
    for attr in ("kb_store", "prompt_catalog"):
        p: Path = getattr(config, attr)
        if not p.exists():
            raise ConfigError(f"{attr} does not exist: {p}")
    for script in config.topic_scripts:
        if not script.exists():
            raise ConfigError(f"topic script does not exist: {script}")
    if config.engines.mode not in ("offline", "remote"):
        raise ConfigError(f"unknown engine mode {config.engines.mode!r}")
    if config.engines.mode == "offline":
        if config.engines.lexicon is None or config.engines.phrase_table is None:
            raise ConfigError("offline engines need 'lexicon' and 'phrase_table' paths")
    else:
        if not config.engines.simplifier_url or not config.engines.translator_url:
            raise ConfigError("remote engines need 'simplifier_url' and 'translator_url'")
    if config.engines.lexicon and not config.engines.lexicon.exists():
        raise ConfigError(f"lexicon does not exist: {config.engines.lexicon}")
    if config.engines.phrase_table and not config.engines.phrase_table.exists():
        raise ConfigError(f"phrase table does not exist: {config.engines.phrase_table}")
    if config.source_language not in config.voice_packs:
        raise ConfigError("source_language must have an installed voice pack")
