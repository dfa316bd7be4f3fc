"""kiosk command line.

    kiosk run <scenario.json> [--config path] [--log path] [--report dir]
    kiosk serve [--config path] [--bind addr]
    kiosk check-topics <files...>
    kiosk report <log.jsonl> [--out dir]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..topic_script import ParseError, parse_topic, validate
from .config import ConfigError, load_config
from .scenario import ScenarioError, load_scenario, run_scenario

DEFAULT_CONFIG = "config.json"


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="kiosk", description="service-kiosk dialogue simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario headlessly with a virtual clock")
    p_run.add_argument("scenario", help="scenario JSON file")
    p_run.add_argument("--config", default=DEFAULT_CONFIG)
    p_run.add_argument("--log", help="write the robot event log (JSON lines) here")
    p_run.add_argument("--report", help="also render timeline figure + summary CSV into this directory")

    p_serve = sub.add_parser("serve", help="serve sessions for tablet clients")
    p_serve.add_argument("--config", default=DEFAULT_CONFIG)
    p_serve.add_argument("--bind", default="127.0.0.1:8080")

    p_check = sub.add_parser("check-topics", help="parse and validate topic scripts")
    p_check.add_argument("files", nargs="+")

    p_report = sub.add_parser("report", help="render a report from an event log")
    p_report.add_argument("log", help="JSON-lines robot event log")
    p_report.add_argument("--out", default="report", help="output directory")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "check-topics":
            return _cmd_check_topics(args)
        if args.command == "report":
            return _cmd_report(args)
    except (ConfigError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


def _cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    script = load_scenario(args.scenario)
    result = run_scenario(config, script, log_path=args.log)
    if args.log is None:
        for event in result.log:
            print(event.to_json_line())
    if args.report:
        if args.log is None:
            print("error: --report needs --log", file=sys.stderr)
            return 2
        from .report import write_report

        figure, summary = write_report(args.log, args.report)
        print(f"report: {figure} {summary}", file=sys.stderr)
    if result.failures:
        print(f"FAIL: {result.failures[0]}", file=sys.stderr)
        return 1
    print(f"ok: scenario '{script.name}' passed ({len(result.log)} events)", file=sys.stderr)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    config = load_config(args.config)
    serve(config, args.bind)
    return 0


def _cmd_check_topics(args: argparse.Namespace) -> int:
    status = 0
    for name in args.files:
        path = Path(name)
        try:
            script = parse_topic(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            print(f"{name}: not found")
            status = 1
            continue
        except ParseError as exc:
            print(f"{name}: {exc}")
            status = 1
            continue
        issues = validate(script)
        if issues:
            for issue in issues:
                print(f"{name}: {issue.code} at {issue.where}: {issue.message}")
            status = 1
        else:
            print(f"{name}: ok ({len(script.concepts)} concepts, {len(script.rules)} rules)")
    return status


def _cmd_report(args: argparse.Namespace) -> int:
    from .report import write_report

    figure, summary = write_report(args.log, args.out)
    print(f"wrote {figure} and {summary}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
