"""Headless scenario execution against a virtual clock.

A scenario file drives one session through timed steps (presence changes,
injected transcripts, button presses, explicit clock advances) and then
checks declarative assertions over the robot event log. Exit status is
zero only if every assertion holds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..orchestrator import ButtonPress, PersonAppeared, PersonLost
from ..robot_sim import RobotEvent, write_log
from .config import AppConfig
from .runtime import SessionRuntime, Wiring, build_wiring

ACTIONS = ("person_appeared", "person_lost", "inject_transcript", "button", "advance_clock")


class ScenarioError(Exception):
    pass


@dataclass(frozen=True)
class ScenarioStep:
    at_ms: int
    action: str
    text: str | None = None
    language: str | None = None
    button: str | None = None
    ms: int | None = None


@dataclass(frozen=True)
class ScenarioScript:
    name: str
    steps: tuple[ScenarioStep, ...]
    expected: tuple[dict, ...] = ()


@dataclass
class ScenarioResult:
    log: list[RobotEvent]
    failures: list[str] = field(default_factory=list)
    runtime: SessionRuntime | None = None

    @property
    def exit_status(self) -> int:
        return 0 if not self.failures else 1


def load_scenario(path: str | Path) -> ScenarioScript:
    path = Path(path)
    if not path.exists():
        raise ScenarioError(f"scenario file not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario is not valid JSON: {exc}") from exc
    steps = []
    last_at = 0
    for i, raw in enumerate(doc.get("steps", [])):
        try:
            step = ScenarioStep(
                at_ms=int(raw["at_ms"]),
                action=str(raw["action"]),
                text=raw.get("text"),
                language=raw.get("language"),
                button=raw.get("button"),
                ms=int(raw["ms"]) if "ms" in raw else None,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"step {i} is malformed: {exc}") from exc
        if step.action not in ACTIONS:
            raise ScenarioError(f"step {i}: unknown action {step.action!r}")
        if step.at_ms < last_at:
            raise ScenarioError(f"step {i}: at_ms goes backwards")
        last_at = step.at_ms
        steps.append(step)
    return ScenarioScript(
        name=str(doc.get("name", path.stem)),
        steps=tuple(steps),
        expected=tuple(doc.get("expected", [])),
    )


def run_scenario(
    config: AppConfig | Wiring,
    script: ScenarioScript,
    log_path: str | Path | None = None,
) -> ScenarioResult:
    wiring = build_wiring(config) if isinstance(config, AppConfig) else config
    runtime = SessionRuntime(wiring, realtime=False)
    runtime.mark("SessionStarted")

    for step in script.steps:
        runtime.advance_to(step.at_ms)
        if step.action == "person_appeared":
            runtime.post(PersonAppeared())
        elif step.action == "person_lost":
            runtime.post(PersonLost())
        elif step.action == "inject_transcript":
            runtime.inject_transcript(step.text or "", step.language)
        elif step.action == "button":
            if not step.button:
                raise ScenarioError("button step without button id")
            runtime.post(ButtonPress(step.button))
        elif step.action == "advance_clock":
            runtime.advance_to(step.at_ms + (step.ms or 0))
    runtime.drain()
    runtime.mark("SessionEnded")

    failures = [
        message
        for assertion in script.expected
        if (message := _check_assertion(assertion, runtime.robot.log)) is not None
    ]
    if log_path is not None:
        write_log(runtime.robot.log, log_path)
    return ScenarioResult(log=runtime.robot.log, failures=failures, runtime=runtime)


def _check_assertion(assertion: dict, log: list[RobotEvent]) -> str | None:
    matches = list(log)
    if "kind" in assertion:
        matches = [e for e in matches if e.kind == assertion["kind"]]
    if "text_equals" in assertion:
        matches = [e for e in matches if e.text == assertion["text_equals"]]
    if "text_contains" in assertion:
        matches = [e for e in matches if assertion["text_contains"] in (e.text or "")]
    if "language" in assertion:
        matches = [e for e in matches if e.language == assertion["language"]]
    if "name" in assertion:
        matches = [e for e in matches if e.name == assertion["name"]]
    if "at_ms" in assertion:
        matches = [e for e in matches if e.t == int(assertion["at_ms"])]
    count = len(matches)
    minimum = int(assertion.get("min_count", 1))
    maximum = assertion.get("max_count")
    if count < minimum:
        return f"expected at least {minimum} event(s) matching {assertion}, saw {count}"
    if maximum is not None and count > int(maximum):
        return f"expected at most {maximum} event(s) matching {assertion}, saw {count}"
    return None
