"""State, input events, and outbound commands of the session machine.

Everything is immutable. Events carry the virtual timestamp at which they
occurred plus a monotone sequence number, both stamped by the runtime, so
the machine itself never needs a clock.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..adaptation.types import AdaptationMode, AdaptedText
from ..knowledge_base import KBResponse
from ..topic_script.types import Utterance


class Phase(enum.Enum):
    IDLE = "idle"
    ENGAGED = "engaged"  # person present, greeting in progress
    LISTENING = "listening"
    PROCESSING = "processing"
    SPEAKING = "speaking"


@dataclass(frozen=True)
class SessionState:
    phase: Phase = Phase.IDLE
    mode: AdaptationMode = AdaptationMode()
    output_language: str = "de"
    source_language: str = "de"
    current_topic: str | None = None
    idle_deadline: int | None = None
    idle_strikes: int = 0
    rng_seed: int = 0
    # Which response the machine is waiting for; doubles as the
    # single-flight guard for KB and adaptation requests.
    awaiting: str | None = None  # None | "kb" | "adaptation"
    pending_answer: str | None = None


@dataclass(frozen=True)
class AnimationGroups:
    groups: dict[str, tuple[str, ...]]

    def __post_init__(self) -> None:
        for name, members in self.groups.items():
            if not members:
                raise ValueError(f"animation group {name!r} is empty")


# --- input events ---------------------------------------------------------


@dataclass(frozen=True)
class PersonAppeared:
    at_ms: int = 0
    seq: int = 0


@dataclass(frozen=True)
class PersonLost:
    at_ms: int = 0
    seq: int = 0


@dataclass(frozen=True)
class UserUtterance:
    text: str
    at_ms: int = 0
    seq: int = 0


@dataclass(frozen=True)
class ButtonPress:
    button: str
    at_ms: int = 0
    seq: int = 0


@dataclass(frozen=True)
class AdaptationReady:
    result: AdaptedText
    at_ms: int = 0
    seq: int = 0


@dataclass(frozen=True)
class AdaptationFailed:
    error: str
    at_ms: int = 0
    seq: int = 0


@dataclass(frozen=True)
class TimerFired:
    timer_id: str
    at_ms: int = 0
    seq: int = 0


@dataclass(frozen=True)
class KBReady:
    response: KBResponse
    at_ms: int = 0
    seq: int = 0


@dataclass(frozen=True)
class SpeechDone:
    at_ms: int = 0
    seq: int = 0


InputEvent = (
    PersonAppeared
    | PersonLost
    | UserUtterance
    | ButtonPress
    | AdaptationReady
    | AdaptationFailed
    | TimerFired
    | KBReady
    | SpeechDone
)


# --- outbound commands ----------------------------------------------------


@dataclass(frozen=True)
class Say:
    utterance: Utterance


@dataclass(frozen=True)
class Display:
    text: str


@dataclass(frozen=True)
class Animate:
    name: str


@dataclass(frozen=True)
class StartListening:
    pass


@dataclass(frozen=True)
class StopListening:
    pass


@dataclass(frozen=True)
class StartTimer:
    timer_id: str
    ms: int


@dataclass(frozen=True)
class CancelTimer:
    timer_id: str


@dataclass(frozen=True)
class RequestKB:
    term: str


@dataclass(frozen=True)
class RequestAdaptation:
    text: str
    mode: AdaptationMode = field(default_factory=AdaptationMode)


Command = (
    Say
    | Display
    | Animate
    | StartListening
    | StopListening
    | StartTimer
    | CancelTimer
    | RequestKB
    | RequestAdaptation
)
