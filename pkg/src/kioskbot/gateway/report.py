"""Render a session report from a JSON-lines robot event log.

Produces a timeline figure (speech and listening intervals, display,
animation and transcript markers over session time) plus a delimited
summary table, for reviewing scenario runs without replaying them.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from ..robot_sim import RobotEvent, read_log

_LANES = {
    "speech": 4,
    "listening": 3,
    "display": 2,
    "animation": 1,
    "transcript": 0,
}


def summarize(events: list[RobotEvent]) -> list[dict]:
    rows: dict[str, dict] = {}
    for event in events:
        row = rows.setdefault(
            event.kind, {"kind": event.kind, "count": 0, "first_ms": event.t, "last_ms": event.t}
        )
        row["count"] += 1
        row["first_ms"] = min(row["first_ms"], event.t)
        row["last_ms"] = max(row["last_ms"], event.t)
    return [rows[kind] for kind in sorted(rows)]


def _intervals(events: list[RobotEvent], start_kind: str, end_kind: str) -> list[tuple[int, int, str]]:
    """Pair start/end events first-in-first-out; an unmatched start closes
    at the last timestamp in the log."""
    open_starts: list[RobotEvent] = []
    out: list[tuple[int, int, str]] = []
    last_t = events[-1].t if events else 0
    for event in events:
        if event.kind == start_kind:
            open_starts.append(event)
        elif event.kind == end_kind and open_starts:
            started = open_starts.pop(0)
            out.append((started.t, event.t, started.text or ""))
    for started in open_starts:
        out.append((started.t, last_t, started.text or ""))
    return out


def render_timeline(events: list[RobotEvent], out_path: str | Path) -> None:
    fig, ax = plt.subplots(figsize=(11, 3.2))
    speech = _intervals(events, "SpeechStarted", "SpeechFinished")
    listening = _intervals(events, "ListeningStarted", "ListeningStopped")

    for t0, t1, text in speech:
        ax.barh(_LANES["speech"], max(t1 - t0, 1), left=t0, height=0.6,
                color="#4878cf", edgecolor="none")
        label = text if len(text) <= 28 else text[:27] + "…"
        ax.text(t0, _LANES["speech"] + 0.38, label.replace("\n", " "), fontsize=7, va="bottom")
    for t0, t1, _ in listening:
        ax.barh(_LANES["listening"], max(t1 - t0, 1), left=t0, height=0.6,
                color="#6acc65", edgecolor="none")

    markers = {
        "Displayed": ("display", "s", "#b8b8b8"),
        "AnimationPlayed": ("animation", "^", "#d65f5f"),
        "TranscriptInjected": ("transcript", "o", "#956cb4"),
    }
    for kind, (lane, marker, color) in markers.items():
        xs = [e.t for e in events if e.kind == kind]
        if xs:
            ax.plot(xs, [_LANES[lane]] * len(xs), marker, color=color, markersize=6, linestyle="")

    ax.set_yticks(list(_LANES.values()))
    ax.set_yticklabels(list(_LANES.keys()))
    ax.set_xlabel("session time [ms]")
    ax.set_ylim(-0.8, 5.2)
    ax.grid(axis="x", alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def write_report(log_path: str | Path, out_dir: str | Path) -> tuple[Path, Path]:
    """Write timeline.png and summary.csv next to each other; returns both
    paths."""
    events = read_log(log_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    figure_path = out_dir / "timeline.png"
    summary_path = out_dir / "summary.csv"

    render_timeline(events, figure_path)
    with summary_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=["kind", "count", "first_ms", "last_ms"])
        writer.writeheader()
        writer.writerows(summarize(events))
    return figure_path, summary_path
