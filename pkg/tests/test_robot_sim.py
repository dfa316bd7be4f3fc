import pytest

from kioskbot.gateway.runtime import VirtualClock
from kioskbot.orchestrator import Animate, Display, Say, StartListening, StopListening
from kioskbot.robot_sim import (
    HALError,
    RobotEvent,
    SimulatedRobot,
    VoicePackSet,
    read_log,
    speech_duration_ms,
    write_log,
)
from kioskbot.topic_script.types import Span, Utterance


def make_robot(cps: int = 15) -> tuple[SimulatedRobot, VirtualClock]:
    clock = VirtualClock()
    return SimulatedRobot(clock, VoicePackSet(frozenset({"de", "da"})), cps=cps), clock


class TestSpeechTiming:
    def test_three_chars_at_default_rate(self):
        robot, _ = make_robot()
        robot.execute(Say(Utterance.plain("Hej", "da")))
        assert robot.pop_last_speech_end() == 200  # ceil(3/15 * 1000)

    def test_pause_spans_add_to_duration(self):
        utterance = Utterance(
            plain_text="a" * 15,
            spans=(Span(start=3, end=3, kind="pause", value=300),),
            language="de",
        )
        assert speech_duration_ms(utterance, cps=15) == 1300

    def test_duration_recomputable_from_log(self):
        robot, clock = make_robot()
        utterance = Utterance.plain("Guten Tag, wie geht es?", "de")
        robot.execute(Say(utterance))
        end = robot.pop_last_speech_end()
        robot_finish = None
        clock.set(end)
        robot_finish = robot.finish_speech()
        started = next(e for e in robot.log if e.kind == "SpeechStarted")
        assert robot_finish.t - started.t == speech_duration_ms(utterance, 15)


class TestExecute:
    def test_animate_produces_single_event(self):
        robot, _ = make_robot()
        events = robot.execute(Animate("hello_wave"))
        assert [e.kind for e in events] == ["AnimationPlayed"]
        assert events[0].name == "hello_wave"

    def test_display(self):
        robot, _ = make_robot()
        events = robot.execute(Display("Guten Tag"))
        assert events[0].kind == "Displayed" and events[0].text == "Guten Tag"

    def test_listening_events_only_on_state_change(self):
        robot, _ = make_robot()
        assert robot.execute(StartListening()) != []
        assert robot.execute(StartListening()) == []
        assert robot.execute(StopListening()) != []
        assert robot.execute(StopListening()) == []

    def test_missing_voice_pack_is_hal_error(self):
        robot, _ = make_robot()
        with pytest.raises(HALError):
            robot.execute(Say(Utterance.plain("Bonjour", "fr")))

    def test_embedded_triggers_play_at_speech_start(self):
        robot, _ = make_robot()
        utterance = Utterance(
            plain_text="Hallo", animation_triggers=((5, "wave"),), language="de"
        )
        events = robot.execute(Say(utterance))
        assert [e.kind for e in events] == ["SpeechStarted", "AnimationPlayed"]


class TestInjection:
    def test_delivered_while_listening(self):
        robot, _ = make_robot()
        robot.execute(StartListening())
        assert robot.inject_transcript("hallo") is True
        assert robot.log[-1].kind == "TranscriptInjected"

    def test_dropped_but_logged_when_not_listening(self):
        robot, _ = make_robot()
        assert robot.inject_transcript("hallo") is False
        assert robot.log[-1].kind == "TranscriptInjected"

    def test_empty_transcript_delivered(self):
        robot, _ = make_robot()
        robot.execute(StartListening())
        assert robot.inject_transcript("") is True


class TestLog:
    def test_json_lines_round_trip(self, tmp_path):
        robot, clock = make_robot()
        robot.execute(Say(Utterance.plain("Hej", "da")))
        robot.execute(Display("Hej"))
        clock.set(robot.pop_last_speech_end())
        robot.finish_speech()
        path = tmp_path / "log.jsonl"
        write_log(robot.log, path)
        assert read_log(path) == robot.log

    def test_stable_field_order(self):
        event = RobotEvent(5, "SpeechStarted", text="x", language="de")
        assert event.to_json_line() == '{"t":5,"kind":"SpeechStarted","text":"x","language":"de"}'

    def test_finish_without_speech_raises(self):
        robot, _ = make_robot()
        with pytest.raises(HALError):
            robot.finish_speech()
