"""The session state machine.

``handle_event`` is a pure function: time arrives on the events, random
choices come from the seed carried in the state, and every effect leaves
as a command. Replaying the same event sequence therefore reproduces the
same command log byte for byte.

Conventions the transitions maintain:

* every ``Say`` is accompanied in the same batch by a ``Display`` with the
  identical plain text (the tablet mirrors all speech)
* mode keywords ("easy language", "translation", ...) are checked before
  topic matching, so a mode request never triggers a lookup
* the idle timer runs only while the machine is engaged or listening; the
  first expiry re-prompts, the second says goodbye and returns to idle
* at most one knowledge-base or adaptation request is in flight per
  session
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..adaptation.types import AdaptationMode
from ..rng import mix64
from ..spotter import Vocabulary, match_chat
from ..topic_script.render import render_response
from ..topic_script.types import ResponseTemplate, Utterance
from .prompts import PromptCatalog
from .types import (
    AdaptationFailed,
    AdaptationReady,
    Animate,
    AnimationGroups,
    ButtonPress,
    CancelTimer,
    Command,
    Display,
    InputEvent,
    KBReady,
    PersonAppeared,
    PersonLost,
    Phase,
    RequestAdaptation,
    RequestKB,
    Say,
    SessionState,
    SpeechDone,
    StartListening,
    StartTimer,
    StopListening,
    TimerFired,
    UserUtterance,
)

IDLE_TIMER = "idle"


class UnknownGroup(Exception):
    def __init__(self, group: str):
        self.group = group
        super().__init__(f"unknown animation group {group!r}")


class LanguageUnavailable(Exception):
    def __init__(self, language: str):
        self.language = language
        super().__init__(f"no voice pack installed for {language!r}")


@dataclass(frozen=True)
class TopicResponses:
    """Scripted acknowledgements for one topic: rendered and spoken before
    the knowledge base is asked."""

    language: str
    templates: tuple[ResponseTemplate, ...]


@dataclass(frozen=True)
class MachineConfig:
    prompts: PromptCatalog
    vocabulary: Vocabulary
    mode_keywords: Vocabulary
    animations: AnimationGroups
    voice_packs: frozenset[str]
    idle_ms: int = 10_000
    source_language: str = "de"
    default_target_language: str = "da"
    topic_responses: dict[str, TopicResponses] = field(default_factory=dict)


def select_animation(groups: AnimationGroups, group: str, seed: int) -> str:
    """Deterministic uniform pick within a group."""
    members = groups.groups.get(group)
    if members is None:
        raise UnknownGroup(group)
    return members[mix64(seed) % len(members)]


def handle_event(
    state: SessionState, event: InputEvent, config: MachineConfig
) -> tuple[SessionState, list[Command]]:
    if isinstance(event, PersonAppeared):
        return _on_person_appeared(state, event, config)
    if isinstance(event, PersonLost):
        return _on_person_lost(state)
    if isinstance(event, UserUtterance):
        return _on_utterance(state, event, config)
    if isinstance(event, ButtonPress):
        return _on_button(state, event, config)
    if isinstance(event, TimerFired):
        return _on_timer(state, event, config)
    if isinstance(event, KBReady):
        return _on_kb_ready(state, event, config)
    if isinstance(event, AdaptationReady):
        return _on_adaptation_ready(state, event, config)
    if isinstance(event, AdaptationFailed):
        return _on_adaptation_failed(state, config)
    if isinstance(event, SpeechDone):
        return _on_speech_done(state, event, config)
    return state, []


def set_output_language(
    state: SessionState,
    language: str,
    installed_packs: frozenset[str],
    config: MachineConfig,
) -> tuple[SessionState, list[Command], LanguageUnavailable | None]:
    """Switch the voice; fails without state change when no voice pack is
    installed for the requested language."""
    if language not in installed_packs:
        apology = _prompt(config, state.output_language, "language_unavailable")
        return state, _say(apology, state.output_language), LanguageUnavailable(language)
    if language == state.output_language:
        confirmation = _prompt(config, language, "confirm_translate")
        return state, _say(confirmation, language), None
    new_state = replace(state, output_language=language)
    confirmation = _prompt(config, language, "confirm_translate")
    return new_state, _say(confirmation, language), None


# --- transition handlers --------------------------------------------------


def _on_person_appeared(
    state: SessionState, event: PersonAppeared, config: MachineConfig
) -> tuple[SessionState, list[Command]]:
    if state.phase is not Phase.IDLE:
        return state, []
    source = config.source_language
    greeting = _prompt(config, source, "greeting")
    animation, seed = _pick_animation(config, "greeting", state.rng_seed)
    new_state = SessionState(
        phase=Phase.ENGAGED,
        mode=AdaptationMode(),
        output_language=source,
        source_language=source,
        idle_deadline=event.at_ms + config.idle_ms,
        idle_strikes=0,
        rng_seed=seed,
    )
    commands: list[Command] = [
        *_say(greeting, source),
        Animate(animation),
        StartListening(),
        StartTimer(IDLE_TIMER, config.idle_ms),
    ]
    return new_state, commands


def _on_person_lost(state: SessionState) -> tuple[SessionState, list[Command]]:
    if state.phase is Phase.IDLE:
        return state, []
    commands: list[Command] = []
    if state.idle_deadline is not None:
        commands.append(CancelTimer(IDLE_TIMER))
    if state.phase in (Phase.ENGAGED, Phase.LISTENING):
        commands.append(StopListening())
    return _to_idle(state), commands


def _on_utterance(
    state: SessionState, event: UserUtterance, config: MachineConfig
) -> tuple[SessionState, list[Command]]:
    if state.phase not in (Phase.ENGAGED, Phase.LISTENING):
        return state, []

    mode_hit = match_chat(event.text, config.mode_keywords)
    if mode_hit is not None:
        return _apply_mode_action(state, mode_hit.topic_key, event.at_ms, config)

    topic_hit = match_chat(event.text, config.vocabulary)
    if topic_hit is None:
        fallback = _prompt(config, state.output_language, "not_understood")
        return state, _say(fallback, state.output_language)

    commands: list[Command] = [CancelTimer(IDLE_TIMER), StopListening()]
    seed = state.rng_seed
    scripted = config.topic_responses.get(topic_hit.topic_key)
    if scripted is not None and scripted.templates:
        index = mix64(seed) % len(scripted.templates)
        utterance = render_response(
            scripted.templates[index],
            {"topic": topic_hit.matched_phrase},
            seed=seed + 1,
            language=scripted.language,
        )
        seed += 2
        utterance, seed = _resolve_triggers(utterance, config, seed)
        commands += [Say(utterance), Display(utterance.plain_text)]
    commands.append(RequestKB(topic_hit.matched_phrase))
    new_state = replace(
        state,
        phase=Phase.PROCESSING,
        current_topic=topic_hit.topic_key,
        idle_deadline=None,
        awaiting="kb",
        rng_seed=seed,
    )
    return new_state, commands


def _on_button(
    state: SessionState, event: ButtonPress, config: MachineConfig
) -> tuple[SessionState, list[Command]]:
    # Tablet buttons also work while the robot is speaking an answer; only
    # an idle robot or one with a request in flight ignores them.
    if state.phase not in (Phase.ENGAGED, Phase.LISTENING, Phase.SPEAKING):
        return state, []
    return _apply_mode_action(state, event.button, event.at_ms, config)


def _on_timer(
    state: SessionState, event: TimerFired, config: MachineConfig
) -> tuple[SessionState, list[Command]]:
    if event.timer_id != IDLE_TIMER or state.phase not in (Phase.ENGAGED, Phase.LISTENING):
        return state, []
    if state.idle_strikes == 0:
        reprompt = _prompt(config, state.output_language, "reprompt")
        animation, seed = _pick_animation(config, "question", state.rng_seed)
        new_state = replace(
            state,
            idle_strikes=1,
            idle_deadline=event.at_ms + config.idle_ms,
            rng_seed=seed,
        )
        commands: list[Command] = [
            *_say(reprompt, state.output_language),
            Animate(animation),
            StartTimer(IDLE_TIMER, config.idle_ms),
        ]
        return new_state, commands
    farewell = _prompt(config, state.output_language, "farewell")
    commands = [*_say(farewell, state.output_language), StopListening()]
    return _to_idle(state, idle_strikes=2), commands


def _on_kb_ready(
    state: SessionState, event: KBReady, config: MachineConfig
) -> tuple[SessionState, list[Command]]:
    if state.phase is not Phase.PROCESSING or state.awaiting != "kb":
        return state, []
    response = event.response
    if not response.found or response.answer is None:
        fallback = _prompt(config, state.output_language, "not_understood")
        new_state = replace(state, phase=Phase.SPEAKING, awaiting=None)
        return new_state, _say(fallback, state.output_language)
    if state.mode.is_identity:
        animation, seed = _pick_animation(config, "answer", state.rng_seed)
        new_state = replace(
            state, phase=Phase.SPEAKING, awaiting=None, rng_seed=seed
        )
        commands: list[Command] = [
            *_say(response.answer, state.source_language),
            Animate(animation),
        ]
        return new_state, commands
    new_state = replace(state, awaiting="adaptation", pending_answer=response.answer)
    return new_state, [RequestAdaptation(response.answer, state.mode)]


def _on_adaptation_ready(
    state: SessionState, event: AdaptationReady, config: MachineConfig
) -> tuple[SessionState, list[Command]]:
    if state.phase is not Phase.PROCESSING or state.awaiting != "adaptation":
        return state, []
    result = event.result
    animation, seed = _pick_animation(config, "answer", state.rng_seed)
    new_state = replace(
        state,
        phase=Phase.SPEAKING,
        awaiting=None,
        pending_answer=None,
        rng_seed=seed,
    )
    commands: list[Command] = [
        *_say(result.text, result.output_language),
        Animate(animation),
    ]
    return new_state, commands


def _on_adaptation_failed(
    state: SessionState, config: MachineConfig
) -> tuple[SessionState, list[Command]]:
    if state.phase is not Phase.PROCESSING or state.awaiting != "adaptation":
        return state, []
    # Degrade to the unadapted answer rather than losing the turn.
    text = state.pending_answer or _prompt(config, state.output_language, "not_understood")
    new_state = replace(state, phase=Phase.SPEAKING, awaiting=None, pending_answer=None)
    return new_state, _say(text, state.source_language)


def _on_speech_done(
    state: SessionState, event: SpeechDone, config: MachineConfig
) -> tuple[SessionState, list[Command]]:
    if state.phase is Phase.ENGAGED:
        return replace(state, phase=Phase.LISTENING), []
    if state.phase is Phase.SPEAKING:
        new_state = replace(
            state,
            phase=Phase.LISTENING,
            idle_deadline=event.at_ms + config.idle_ms,
        )
        return new_state, [StartListening(), StartTimer(IDLE_TIMER, config.idle_ms)]
    return state, []


# --- mode selection -------------------------------------------------------


def _apply_mode_action(
    state: SessionState, action: str, at_ms: int, config: MachineConfig
) -> tuple[SessionState, list[Command]]:
    # Mode changes count as user activity: restart the idle timer, but only
    # in phases that carry one (the deadline invariant stays intact when a
    # button arrives mid-speech).
    timer_active = state.idle_deadline is not None
    new_deadline = at_ms + config.idle_ms if timer_active else None
    timer_head: list[Command] = [CancelTimer(IDLE_TIMER)] if timer_active else []
    timer_tail: list[Command] = (
        [StartTimer(IDLE_TIMER, config.idle_ms)] if timer_active else []
    )

    if action == "easy":
        confirmation = _prompt(config, state.output_language, "confirm_easy")
        new_state = replace(
            state,
            mode=replace(state.mode, easy=True),
            idle_deadline=new_deadline,
            idle_strikes=0,
        )
        return new_state, [
            *timer_head,
            *_say(confirmation, state.output_language),
            *timer_tail,
        ]

    if action == "translate" or action.startswith("lang:"):
        target = (
            action.removeprefix("lang:") if action.startswith("lang:")
            else config.default_target_language
        )
        switched, commands, error = set_output_language(
            state, target, config.voice_packs, config
        )
        if error is not None:
            return state, commands
        mode_target = None if target == state.source_language else target
        new_state = replace(
            switched,
            mode=replace(switched.mode, target_language=mode_target),
            idle_deadline=new_deadline,
            idle_strikes=0,
        )
        return new_state, [*timer_head, *commands, *timer_tail]

    # Unknown button: not a transition.
    return state, []


# --- helpers --------------------------------------------------------------


def _say(text: str, language: str) -> list[Command]:
    utterance = Utterance.plain(text, language)
    return [Say(utterance), Display(utterance.plain_text)]


def _prompt(config: MachineConfig, language: str, key: str) -> str:
    block = config.prompts.get(language) or config.prompts[config.source_language]
    return block[key]


def _pick_animation(config: MachineConfig, group: str, seed: int) -> tuple[str, int]:
    return select_animation(config.animations, group, seed), seed + 1


def _resolve_triggers(
    utterance: Utterance, config: MachineConfig, seed: int
) -> tuple[Utterance, int]:
    """Replace group names in inline animation triggers with a seeded pick
    from the group; names that are no group pass through as-is."""
    if not utterance.animation_triggers:
        return utterance, seed
    resolved: list[tuple[int, str]] = []
    for offset, name in utterance.animation_triggers:
        if name in config.animations.groups:
            concrete, seed = _pick_animation(config, name, seed)
            resolved.append((offset, concrete))
        else:
            resolved.append((offset, name))
    return replace(utterance, animation_triggers=tuple(resolved)), seed


def _to_idle(state: SessionState, idle_strikes: int = 0) -> SessionState:
    return replace(
        state,
        phase=Phase.IDLE,
        idle_deadline=None,
        idle_strikes=idle_strikes,
        awaiting=None,
        pending_answer=None,
        current_topic=None,
    )
