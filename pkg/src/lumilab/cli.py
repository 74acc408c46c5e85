"""Command line entry points.

    lumilab serve --config lab.json      start the gateway servers
    lumilab run script.jsonl             replay a scenario script headlessly
    lumilab match --red a.jsonl --blue b.jsonl --red-speed 900 --blue-speed 100
    lumilab report transcript.jsonl      print the route derivation tables
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path as FilePath

from .errors import LabError
from .harness import load_path_file, load_script, run_match, run_script
from .server import load_config, serve_forever


def _cmd_serve(args: argparse.Namespace) -> int:
    serve_forever(load_config(args.config))
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    transcript, exit_code = run_script(load_script(args.script))
    text = "\n".join(transcript) + ("\n" if transcript else "")
    if args.transcript:
        FilePath(args.transcript).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return exit_code


def _cmd_match(args: argparse.Namespace) -> int:
    result = run_match(
        load_path_file(args.red),
        load_path_file(args.blue),
        args.red_speed,
        args.blue_speed,
    )
    print(json.dumps(result.to_dict(), indent=2))
    return 0


def _collect_report(lines: list[str]) -> tuple[dict, dict]:
    """Last ROUTE_REPORT waypoints and last TICK snapshot, per robot."""
    requests: dict[int, dict] = {}
    routes: dict[str, list] = {}
    stopwatch: dict[str, dict] = {}
    for raw in lines:
        raw = raw.strip()
        if not raw:
            continue
        entry = json.loads(raw)
        data = entry.get("data", {})
        if entry.get("event") == "request":
            requests[data.get("id")] = data
        elif entry.get("event") == "reply" and data.get("ok"):
            request = requests.get(data.get("id"), {})
            result = data.get("result") or {}
            if request.get("kind") == "ROUTE_REPORT":
                routes[request.get("robot", "?")] = result.get("waypoints", [])
            elif request.get("kind") == "TICK":
                stopwatch = result.get("robots", stopwatch)
    return routes, stopwatch


def _cmd_report(args: argparse.Namespace) -> int:
    lines = FilePath(args.transcript).read_text(encoding="utf-8").splitlines()
    routes, stopwatch = _collect_report(lines)
    if not routes and not stopwatch:
        print("no route or telemetry data in transcript")
        return 0
    for robot in sorted(routes):
        waypoints = routes[robot]
        print(f"{robot} robot: {len(waypoints)} waypoints reached")
        print("    #      x      y")
        for i, (x, y) in enumerate(waypoints, start=1):
            print(f"  {i:3d}  {x:5d}  {y:5d}")
        print()
    for robot in sorted(stopwatch):
        snap = stopwatch[robot]
        state = "complete" if snap.get("complete") else ("running" if snap.get("running") else "stopped")
        print(
            f"{robot} stopwatch: {snap.get('ticks', 0)} ticks, "
            f"{snap.get('elapsed_ms', 0)} ms simulated, {state}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lumilab", description="simulated robotic remote lab")
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="start the gateway servers")
    p_serve.add_argument("--config", default=None, help="JSON config file")
    p_serve.set_defaults(func=_cmd_serve)

    p_run = sub.add_parser("run", help="replay a scenario script")
    p_run.add_argument("script", help="JSON-lines scenario script")
    p_run.add_argument("--transcript", default=None, help="write transcript here instead of stdout")
    p_run.set_defaults(func=_cmd_run)

    p_match = sub.add_parser("match", help="race the two robots")
    p_match.add_argument("--red", required=True, help="red path file (JSON lines)")
    p_match.add_argument("--blue", required=True, help="blue path file (JSON lines)")
    p_match.add_argument("--red-speed", type=int, default=500)
    p_match.add_argument("--blue-speed", type=int, default=500)
    p_match.set_defaults(func=_cmd_match)

    p_report = sub.add_parser("report", help="print route derivation tables from a transcript")
    p_report.add_argument("transcript")
    p_report.set_defaults(func=_cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LabError as err:
        print(f"error: {err.code}: {err.message}", file=sys.stderr)
        return 2
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
