"""Simulated robot: executes speech, display, animation, and listening
commands against an injected clock and appends to a timestamped event log.

Speech timing follows a characters-per-second model plus the utterance's
pause spans, so the full log of a scenario is reproducible from the inputs
alone. Transcript injection stands in for speech recognition: it is only
delivered while the robot is listening, otherwise logged and dropped.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Protocol

from .orchestrator.types import (
    Animate,
    Command,
    Display,
    Say,
    StartListening,
    StopListening,
)
from .topic_script.types import Utterance

DEFAULT_CPS = 15
VOICE_PACK_CAPACITY = 15  # platform limit on installable languages


class Clock(Protocol):
    def now_ms(self) -> int: ...


class HALError(Exception):
    pass


@dataclass(frozen=True)
class VoicePackSet:
    installed: frozenset[str] = frozenset({"de", "da"})

    def __post_init__(self) -> None:
        if not self.installed:
            raise ValueError("at least one voice pack must be installed")
        if len(self.installed) > VOICE_PACK_CAPACITY:
            raise ValueError(f"platform supports at most {VOICE_PACK_CAPACITY} voice packs")


@dataclass(frozen=True)
class RobotEvent:
    t: int
    kind: str
    text: str | None = None
    language: str | None = None
    name: str | None = None

    def to_json_line(self) -> str:
        doc: dict = {"t": self.t, "kind": self.kind}
        if self.text is not None:
            doc["text"] = self.text
        if self.language is not None:
            doc["language"] = self.language
        if self.name is not None:
            doc["name"] = self.name
        return json.dumps(doc, ensure_ascii=False, separators=(",", ":"))

    @classmethod
    def from_json_line(cls, line: str) -> "RobotEvent":
        doc = json.loads(line)
        return cls(
            t=int(doc["t"]),
            kind=str(doc["kind"]),
            text=doc.get("text"),
            language=doc.get("language"),
            name=doc.get("name"),
        )


def speech_duration_ms(utterance: Utterance, cps: int) -> int:
    """ceil(chars / cps) in ms, plus every pause span."""
    speaking = math.ceil(len(utterance.plain_text) * 1000 / cps)
    return speaking + utterance.total_pause_ms()


class SimulatedRobot:
    def __init__(
        self,
        clock: Clock,
        voice_packs: VoicePackSet | None = None,
        cps: int = DEFAULT_CPS,
    ):
        self.clock = clock
        self.voice_packs = voice_packs or VoicePackSet()
        self.cps = cps
        self.log: list[RobotEvent] = []
        self.listening = False
        # FIFO of speech still playing: (end_ms, utterance)
        self._speech_queue: list[tuple[int, Utterance]] = []
        self._last_speech_end: int | None = None

    def execute(self, command: Command) -> list[RobotEvent]:
        """Run one robot-facing command; returns the events it produced."""
        now = self.clock.now_ms()
        events: list[RobotEvent] = []
        if isinstance(command, Say):
            utterance = command.utterance
            if utterance.language not in self.voice_packs.installed:
                raise HALError(f"no voice pack for {utterance.language!r}")
            duration = speech_duration_ms(utterance, self.cps)
            events.append(
                RobotEvent(now, "SpeechStarted", text=utterance.plain_text,
                           language=utterance.language)
            )
            for _offset, group in utterance.animation_triggers:
                events.append(RobotEvent(now, "AnimationPlayed", name=group))
            self._speech_queue.append((now + duration, utterance))
            self._last_speech_end = now + duration
        elif isinstance(command, Display):
            events.append(RobotEvent(now, "Displayed", text=command.text))
        elif isinstance(command, Animate):
            events.append(RobotEvent(now, "AnimationPlayed", name=command.name))
        elif isinstance(command, StartListening):
            if not self.listening:
                self.listening = True
                events.append(RobotEvent(now, "ListeningStarted"))
        elif isinstance(command, StopListening):
            if self.listening:
                self.listening = False
                events.append(RobotEvent(now, "ListeningStopped"))
        else:
            raise ValueError(f"not a robot command: {command!r}")
        self.log.extend(events)
        return events

    def pop_last_speech_end(self) -> int | None:
        """Finish time of the most recently executed Say, once."""
        end, self._last_speech_end = self._last_speech_end, None
        return end

    def finish_speech(self) -> RobotEvent:
        """Emit SpeechFinished for the pending speech that ends first."""
        if not self._speech_queue:
            raise HALError("no speech in progress")
        index = min(range(len(self._speech_queue)), key=lambda i: self._speech_queue[i][0])
        end_ms, utterance = self._speech_queue.pop(index)
        event = RobotEvent(
            end_ms, "SpeechFinished", text=utterance.plain_text,
            language=utterance.language,
        )
        self.log.append(event)
        return event

    def inject_transcript(self, text: str, language: str | None = None) -> bool:
        """Log a recognized transcript; True iff it was delivered (robot
        was listening)."""
        now = self.clock.now_ms()
        self.log.append(RobotEvent(now, "TranscriptInjected", text=text, language=language))
        return self.listening

    def speech_in_progress(self) -> bool:
        return bool(self._speech_queue)


def write_log(events: Iterable[RobotEvent], path: str | Path) -> None:
    Path(path).write_text(
        "".join(e.to_json_line() + "\n" for e in events), encoding="utf-8"
    )


def read_log(path: str | Path) -> list[RobotEvent]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [RobotEvent.from_json_line(line) for line in lines if line.strip()]
