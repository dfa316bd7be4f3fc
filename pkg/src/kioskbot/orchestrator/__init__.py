from .types import (
    AdaptationFailed,
    AdaptationReady,
    AnimationGroups,
    Animate,
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
from .machine import (
    LanguageUnavailable,
    MachineConfig,
    TopicResponses,
    UnknownGroup,
    handle_event,
    select_animation,
    set_output_language,
)
from .prompts import PROMPT_KEYS, load_prompt_catalog

__all__ = [
    "AdaptationFailed",
    "AdaptationReady",
    "Animate",
    "AnimationGroups",
    "ButtonPress",
    "CancelTimer",
    "Command",
    "Display",
    "InputEvent",
    "KBReady",
    "LanguageUnavailable",
    "MachineConfig",
    "PROMPT_KEYS",
    "PersonAppeared",
    "PersonLost",
    "Phase",
    "RequestAdaptation",
    "RequestKB",
    "Say",
    "SessionState",
    "SpeechDone",
    "StartListening",
    "StartTimer",
    "StopListening",
    "TimerFired",
    "TopicResponses",
    "UnknownGroup",
    "UserUtterance",
    "handle_event",
    "load_prompt_catalog",
    "select_animation",
    "set_output_language",
]
