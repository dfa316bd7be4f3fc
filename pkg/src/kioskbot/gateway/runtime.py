"""Session runtime: wires the pure state machine to the simulated robot,
the knowledge store, and the adaptation engines.

The machine stays pure; everything effectful lives here. Knowledge-base
and adaptation requests are answered by re-enqueuing result events, never
by calling back into the machine mid-batch. Time comes from an injected
clock: scenario runs drive a virtual clock deterministically through
``advance_to``/``drain``; the served mode uses the wall clock and
``threading.Timer``.
"""

from __future__ import annotations

import heapq
import itertools
import json
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

from ..adaptation import (
    AdaptError,
    EngineSet,
    PhraseTableTranslator,
    RemoteEndpoint,
    RemoteSimplifier,
    RemoteTranslator,
    RuleSimplifier,
    adapt,
    load_lexicon,
    load_phrase_table,
)
from ..knowledge_base import KnowledgeStore, load_store
from ..orchestrator import (
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
    MachineConfig,
    PersonAppeared,
    PersonLost,
    RequestAdaptation,
    RequestKB,
    Say,
    SessionState,
    SpeechDone,
    StartListening,
    StartTimer,
    StopListening,
    TimerFired,
    TopicResponses,
    UserUtterance,
    handle_event,
    load_prompt_catalog,
)
from ..spotter import Vocabulary, normalize
from ..topic_script import ConceptRef, parse_topic
from ..robot_sim import RobotEvent, SimulatedRobot, VoicePackSet, speech_duration_ms
from .config import AppConfig, ConfigError


class VirtualClock:
    def __init__(self, start_ms: int = 0):
        self._now = start_ms

    def now_ms(self) -> int:
        return self._now

    def set(self, t: int) -> None:
        if t < self._now:
            raise ValueError("virtual clock cannot go backwards")
        self._now = t


class RealClock:
    def __init__(self) -> None:
        self._t0 = time.monotonic()

    def now_ms(self) -> int:
        return int((time.monotonic() - self._t0) * 1000)


@dataclass(frozen=True)
class Wiring:
    """Everything built once from a config and shared by sessions."""

    config: AppConfig
    store: KnowledgeStore
    machine_config: MachineConfig
    engines: EngineSet


def build_wiring(config: AppConfig) -> Wiring:
    store = load_store(config.kb_store)

    vocabulary = Vocabulary()
    topic_responses: dict[str, TopicResponses] = {}
    for path in config.topic_scripts:
        script = parse_topic(path.read_text(encoding="utf-8"))
        if script.language not in config.voice_packs:
            raise ConfigError(
                f"topic script {path.name} is in {script.language!r}, no voice pack installed"
            )
        try:
            for concept in script.concepts:
                for phrase in concept.phrases:
                    vocabulary.add(phrase, concept.name)
            for rule in script.rules:
                if isinstance(rule.pattern, ConceptRef):
                    key = rule.pattern.name
                else:
                    key = "_".join(normalize(rule.pattern.text))
                    vocabulary.add(rule.pattern.text, key)
                topic_responses[key] = TopicResponses(script.language, rule.responses)
        except ValueError as exc:
            raise ConfigError(f"vocabulary conflict in {path.name}: {exc}") from exc
    try:
        for entry in store.entries:
            for keyword in entry.keywords:
                vocabulary.add(keyword, entry.topic_key)
    except ValueError as exc:
        raise ConfigError(f"vocabulary conflict in knowledge store: {exc}") from exc

    mode_keywords = Vocabulary()
    for action, phrases in config.mode_keywords.items():
        for phrase in phrases:
            mode_keywords.add(phrase, action)

    prompts = load_prompt_catalog(config.prompt_catalog)
    if config.source_language not in prompts:
        raise ConfigError(f"prompt catalog lacks source language {config.source_language!r}")

    machine_config = MachineConfig(
        prompts=prompts,
        vocabulary=vocabulary,
        mode_keywords=mode_keywords,
        animations=AnimationGroups(dict(config.animation_groups)),
        voice_packs=config.voice_packs,
        idle_ms=config.idle_ms,
        source_language=config.source_language,
        default_target_language=config.default_target_language,
        topic_responses=topic_responses,
    )

    engines = _build_engines(config)
    return Wiring(config=config, store=store, machine_config=machine_config, engines=engines)


def _build_engines(config: AppConfig) -> EngineSet:
    ec = config.engines
    if ec.mode == "offline":
        return EngineSet(
            simplifier=RuleSimplifier(load_lexicon(ec.lexicon)),
            translator=PhraseTableTranslator(load_phrase_table(ec.phrase_table)),
            source_language=config.source_language,
        )
    simplifier_endpoint = RemoteEndpoint(
        base_url=ec.simplifier_url,
        attempt_timeout_s=ec.attempt_timeout_s,
        total_deadline_s=ec.total_deadline_s,
    )
    translator_endpoint = RemoteEndpoint(
        base_url=ec.translator_url,
        attempt_timeout_s=ec.attempt_timeout_s,
        total_deadline_s=ec.total_deadline_s,
        supported_targets=frozenset({config.default_target_language}),
    )
    return EngineSet(
        simplifier=RemoteSimplifier(simplifier_endpoint),
        translator=RemoteTranslator(translator_endpoint, config.source_language),
        source_language=config.source_language,
    )


@dataclass(order=True)
class _Pending:
    at_ms: int
    seq: int
    fn: Callable[[], None] = field(compare=False)


class SessionRuntime:
    """One dialogue session end to end.

    ``realtime=False`` (scenario runs): nothing happens until the caller
    pumps time forward. ``realtime=True`` (served sessions): scheduled work
    fires on daemon timers and adaptation runs on a worker thread; all
    entry points serialize on one lock.
    """

    def __init__(self, wiring: Wiring, clock=None, realtime: bool = False):
        self.wiring = wiring
        self.clock = clock if clock is not None else (RealClock() if realtime else VirtualClock())
        self.realtime = realtime
        self.robot = SimulatedRobot(
            self.clock,
            VoicePackSet(frozenset(wiring.config.voice_packs)),
            cps=wiring.config.cps,
        )
        self.state = SessionState(
            source_language=wiring.config.source_language,
            output_language=wiring.config.source_language,
            rng_seed=wiring.config.rng_seed,
        )
        self.command_log: list[Command] = []
        self.event_trace: list[InputEvent] = []
        self.adaptations: list = []  # AdaptedText and AdaptError, in order
        self.stream: list[str] = []  # robot events + status records, as JSON lines
        self.last_activity_wall = time.time()
        self._seq = itertools.count()
        self._pending: list[_Pending] = []
        self._timer_generation: dict[str, int] = {}
        self._speech_busy_until = 0
        self._speech_outstanding = 0  # queued or playing Says
        self._lock = threading.RLock()
        self._executor = ThreadPoolExecutor(max_workers=2) if realtime else None

    # -- event entry points ------------------------------------------------

    def post(self, event: InputEvent) -> None:
        with self._lock:
            event = replace(event, at_ms=self.clock.now_ms(), seq=next(self._seq))
            self.event_trace.append(event)
            self.last_activity_wall = time.time()
            before = (self.state.mode, self.state.output_language)
            self.state, commands = handle_event(self.state, event, self.wiring.machine_config)
            self.command_log.extend(commands)
            for command in commands:
                self._dispatch(command)
            after = (self.state.mode, self.state.output_language)
            if after != before:
                self._emit_status()

    def inject_transcript(self, text: str, language: str | None = None) -> bool:
        """Simulated speech recognition; delivered only while listening."""
        with self._lock:
            delivered = self.robot.inject_transcript(text, language)
            self.stream.append(self.robot.log[-1].to_json_line())
            if delivered:
                self.post(UserUtterance(text))
            return delivered

    def mark(self, kind: str) -> None:
        """Append a session marker record to the log and stream."""
        event = RobotEvent(self.clock.now_ms(), kind)
        self.robot.log.append(event)
        self.stream.append(event.to_json_line())

    # -- virtual time ---------------------------------------------------

    def advance_to(self, t_ms: int) -> None:
        """Run all work scheduled up to t_ms, then set the clock there."""
        if self.realtime:
            raise RuntimeError("advance_to is only for virtual-clock sessions")
        while self._pending and self._pending[0].at_ms <= t_ms:
            item = heapq.heappop(self._pending)
            self.clock.set(item.at_ms)
            item.fn()
        self.clock.set(t_ms)

    def drain(self, max_items: int = 10_000) -> None:
        """Run the schedule dry (virtual clock only)."""
        if self.realtime:
            raise RuntimeError("drain is only for virtual-clock sessions")
        for _ in range(max_items):
            if not self._pending:
                return
            item = heapq.heappop(self._pending)
            self.clock.set(item.at_ms)
            item.fn()
        raise RuntimeError("scheduled work did not settle")

    # -- command dispatch ---------------------------------------------------

    def _dispatch(self, command: Command) -> None:
        if isinstance(command, Say):
            # The speech channel is serial: a Say issued while the robot is
            # still talking starts when the current speech ends.
            now = self.clock.now_ms()
            start = max(now, self._speech_busy_until)
            duration = speech_duration_ms(command.utterance, self.wiring.config.cps)
            self._speech_busy_until = start + duration
            self._speech_outstanding += 1
            if start == now:
                self._execute_say(command)
            else:
                self._schedule(start, lambda: self._execute_say(command))
        elif isinstance(command, (Display, Animate, StartListening, StopListening)):
            events = self.robot.execute(command)
            self.stream.extend(e.to_json_line() for e in events)
        elif isinstance(command, StartTimer):
            generation = self._timer_generation.get(command.timer_id, 0) + 1
            self._timer_generation[command.timer_id] = generation
            fire_at = self.clock.now_ms() + command.ms
            timer_id = command.timer_id
            self._schedule(fire_at, lambda: self._fire_timer(timer_id, generation))
        elif isinstance(command, CancelTimer):
            self._timer_generation[command.timer_id] = (
                self._timer_generation.get(command.timer_id, 0) + 1
            )
        elif isinstance(command, RequestKB):
            response = self.wiring.store.lookup(
                command.term, self.wiring.config.source_language
            )
            self._schedule(self.clock.now_ms(), lambda: self.post(KBReady(response)))
        elif isinstance(command, RequestAdaptation):
            self._request_adaptation(command)
        else:
            raise ValueError(f"unroutable command: {command!r}")

    def _request_adaptation(self, command: RequestAdaptation) -> None:
        def work() -> None:
            try:
                result = adapt(command.text, command.mode, self.wiring.engines)
            except AdaptError as exc:
                with self._lock:
                    self.adaptations.append(exc)
                self.post(AdaptationFailed(error=str(exc)))
                return
            with self._lock:
                self.adaptations.append(result)
            self.post(AdaptationReady(result))

        if self.realtime:
            assert self._executor is not None
            self._executor.submit(work)
        else:
            # Virtual clock: the call may take wall time (remote engines)
            # but completes at the current virtual instant.
            self._schedule(self.clock.now_ms(), work)

    def _execute_say(self, command: Say) -> None:
        events = self.robot.execute(command)
        self.stream.extend(e.to_json_line() for e in events)
        end = self.robot.pop_last_speech_end()
        if end is not None:
            self._schedule(end, self._finish_speech)

    def _fire_timer(self, timer_id: str, generation: int) -> None:
        if self._timer_generation.get(timer_id, 0) != generation:
            return  # cancelled or restarted since scheduling
        self.post(TimerFired(timer_id))

    def _finish_speech(self) -> None:
        event = self.robot.finish_speech()
        self.stream.append(event.to_json_line())
        # The machine hears one SpeechDone per turn, once everything queued
        # on the serial speech channel has been spoken.
        self._speech_outstanding -= 1
        if self._speech_outstanding == 0:
            self.post(SpeechDone())

    def _schedule(self, at_ms: int, fn: Callable[[], None]) -> None:
        if self.realtime:
            delay_s = max(0, at_ms - self.clock.now_ms()) / 1000
            timer = threading.Timer(delay_s, self._locked(fn))
            timer.daemon = True
            timer.start()
        else:
            heapq.heappush(self._pending, _Pending(at_ms, next(self._seq), fn))

    def _locked(self, fn: Callable[[], None]) -> Callable[[], None]:
        def run() -> None:
            with self._lock:
                fn()

        return run

    def _emit_status(self) -> None:
        record = {
            "t": self.clock.now_ms(),
            "kind": "ModeChanged",
            "easy": self.state.mode.easy,
            "target": self.state.mode.target_language,
            "output_language": self.state.output_language,
        }
        self.stream.append(json.dumps(record, ensure_ascii=False, separators=(",", ":")))
