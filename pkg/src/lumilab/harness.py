"""Deterministic script replay and two-robot competitions.

A scenario script is JSON lines in the same grammar as the wire protocol,
plus a few harness-only directives:

    {"kind":"HEADER","seed":42}                  first line only; pin RNG seed
    {"kind":"FAULT","plane":"light","up":false}  toggle a plane
    {"kind":"CLOCK","advance_s":3600}            move simulated time
    {"kind":"EXPECT","reply":{"ok":true}}        assert on the last reply

Everything else is forwarded to an in-process gateway over one logical
connection. Requests may omit "id"; the harness then numbers them
sequentially, so replaying the same script always produces a byte-identical
transcript. The transcript is itself JSON lines, one line per request,
reply, or directive event.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path as FilePath
from typing import Any, Iterable

from .errors import CHANNEL_EMPTY, SCRIPT_PARSE, TICK_CAP_EXCEEDED, LabError
from . import robotplane
from .gateway import Gateway, Message, decode, encode
from .lightplane import ColorChannel, LightField, plan_path, rasterize_path
from .robotplane import RobotState

TICK_CAP = 100_000  # total ticks a script or match may consume

DIRECTIVE_KINDS = ("HEADER", "FAULT", "CLOCK", "EXPECT")


@dataclass
class ScenarioScript:
    """A parsed script: optional pin seed plus the ordered line objects."""

    seed: int | None
    steps: list[dict]


def parse_script(lines: Iterable[str]) -> ScenarioScript:
    """Parse script text lines; blank lines are skipped.

    Raises SCRIPT_PARSE with the offending line number for bad JSON, a
    misplaced HEADER, or a malformed directive.
    """
    seed = None
    steps: list[dict] = []
    for lineno, raw in enumerate(lines, start=1):
        raw = raw.strip()
        if not raw:
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as err:
            raise LabError(SCRIPT_PARSE, f"line {lineno}: invalid JSON ({err.msg})") from None
        if not isinstance(obj, dict):
            raise LabError(SCRIPT_PARSE, f"line {lineno}: expected a JSON object")
        kind = obj.get("kind")
        if kind == "HEADER":
            if steps or seed is not None:
                raise LabError(SCRIPT_PARSE, f"line {lineno}: HEADER must be the first line")
            seed = obj.get("seed")
            if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
                raise LabError(SCRIPT_PARSE, f"line {lineno}: seed must be an integer")
            continue
        if kind == "FAULT":
            if obj.get("plane") not in ("light", "robot") or not isinstance(obj.get("up"), bool):
                raise LabError(SCRIPT_PARSE, f"line {lineno}: FAULT needs plane light|robot and boolean up")
        elif kind == "CLOCK":
            has_advance = isinstance(obj.get("advance_s"), (int, float))
            has_set = isinstance(obj.get("set_s"), (int, float))
            if not (has_advance or has_set):
                raise LabError(SCRIPT_PARSE, f"line {lineno}: CLOCK needs advance_s or set_s")
        elif kind == "EXPECT":
            if not isinstance(obj.get("reply"), dict):
                raise LabError(SCRIPT_PARSE, f"line {lineno}: EXPECT needs a reply object")
        steps.append(obj)
    return ScenarioScript(seed=seed, steps=steps)


def load_script(path: str | FilePath) -> ScenarioScript:
    with FilePath(path).open(encoding="utf-8") as fh:
        return parse_script(fh)


def _subset_match(expected: Any, actual: Any) -> bool:
    """Dict values match key-by-key (recursively); everything else exactly."""
    if isinstance(expected, dict):
        if not isinstance(actual, dict):
            return False
        return all(k in actual and _subset_match(v, actual[k]) for k, v in expected.items())
    return expected == actual


def run_script(script: ScenarioScript, gateway: Gateway | None = None) -> tuple[list[str], int]:
    """Replay a script against a fresh gateway; return (transcript, exit code).

    Exit code 0 means every EXPECT matched, 1 means at least one mismatch.
    Scripts that would tick more than TICK_CAP times in total are rejected
    with TICK_CAP_EXCEEDED rather than run to the end of time.
    """
    gw = gateway if gateway is not None else Gateway(seed=script.seed)
    conn = gw.connect()
    transcript: list[str] = []
    if script.seed is not None:
        transcript.append(json.dumps({"event": "header", "seed": script.seed}))
    last_reply_obj: dict | None = None
    all_pass = True
    next_id = 1
    tick_budget = TICK_CAP

    for obj in script.steps:
        kind = obj.get("kind")
        if kind == "FAULT":
            gw.set_server_status(obj["plane"], obj["up"])
            transcript.append(
                json.dumps({"event": "fault", "plane": obj["plane"], "up": obj["up"]})
            )
            continue
        if kind == "CLOCK":
            if "set_s" in obj:
                now = gw.clock.set(obj["set_s"])
            else:
                now = gw.clock.advance(obj["advance_s"])
            transcript.append(json.dumps({"event": "clock", "now": now}))
            continue
        if kind == "EXPECT":
            passed = last_reply_obj is not None and _subset_match(obj["reply"], last_reply_obj)
            all_pass = all_pass and passed
            entry = {"event": "expect", "pass": passed}
            if not passed:
                entry["want"] = obj["reply"]
                entry["got"] = last_reply_obj
            transcript.append(json.dumps(entry, sort_keys=True))
            continue

        if kind == "TICK":
            n = obj.get("n", 1)
            if isinstance(n, int) and not isinstance(n, bool):
                tick_budget -= n
                if tick_budget < 0:
                    raise LabError(TICK_CAP_EXCEEDED, f"script exceeds the {TICK_CAP}-tick cap")
        msg_id = obj.get("id")
        if msg_id is None:
            msg_id = next_id
        payload = {k: v for k, v in obj.items() if k not in ("id", "kind")}
        msg = Message(id=msg_id, kind=kind if isinstance(kind, str) else "", payload=payload)
        if isinstance(msg_id, int) and not isinstance(msg_id, bool):
            next_id = max(next_id, msg_id) + 1
        request_line = encode(msg)
        reply_line = gw.handle_line(conn, request_line)
        transcript.append('{"event":"request","data":' + request_line + "}")
        transcript.append('{"event":"reply","data":' + reply_line + "}")
        last_reply_obj = json.loads(reply_line)

    return transcript, 0 if all_pass else 1


@dataclass
class RobotOutcome:
    ticks_used: int
    elapsed_ms: int
    completed: bool


@dataclass
class MatchResult:
    """Outcome of a two-robot competition. ``winner`` is None on a draw."""

    red: RobotOutcome
    blue: RobotOutcome
    winner: ColorChannel | None

    @property
    def winner_name(self) -> str:
        return self.winner.value if self.winner is not None else "DRAW"

    def outcome(self, channel: ColorChannel) -> RobotOutcome:
        return self.red if channel is ColorChannel.RED else self.blue

    def to_dict(self) -> dict:
        return {
            "winner": self.winner_name,
            "red": vars(self.red).copy(),
            "blue": vars(self.blue).copy(),
        }


def run_match(
    red_path: list[tuple[int, int]],
    blue_path: list[tuple[int, int]],
    red_speed: int,
    blue_speed: int,
    tick_cap: int = TICK_CAP,
) -> MatchResult:
    """Race the two robots over their own drawn routes.

    Each robot's stopwatch accumulates its tick interval at every tick it
    takes, so with a constant speed s the elapsed time is ticks * (1000 - s).
    The winner is the completed robot with less elapsed time; equal times,
    or no completions (including an empty route or an exhausted tick cap),
    give a draw.
    """
    field = LightField()
    robots: dict[ColorChannel, RobotState] = {}
    elapsed: dict[ColorChannel, int] = {}
    for channel, points, speed in (
        (ColorChannel.RED, red_path, red_speed),
        (ColorChannel.BLUE, blue_path, blue_speed),
    ):
        robot = RobotState(channel=channel)
        robotplane.set_speed(robot, speed)
        if points:
            rasterize_path(plan_path(channel, points), field)
        try:
            robotplane.assign_path(robot, field)
            robotplane.run(robot)
        except LabError as err:
            if err.code != CHANNEL_EMPTY:
                raise
        robots[channel] = robot
        elapsed[channel] = 0

    ticks = 0
    while any(r.running for r in robots.values()) and ticks < tick_cap:
        for channel, robot in robots.items():
            if robot.running:
                robotplane.step(robot)
                elapsed[channel] += robot.tick_interval_ms
        ticks += 1

    outcomes: dict[ColorChannel, RobotOutcome] = {}
    for channel, robot in robots.items():
        completed = robot.path is not None and robot.target_index >= len(robot.path.waypoints)
        outcomes[channel] = RobotOutcome(robot.tick_count, elapsed[channel], completed)

    finishers = [c for c in robots if outcomes[c].completed]
    if len(finishers) == 1:
        winner = finishers[0]
    elif len(finishers) == 2 and outcomes[ColorChannel.RED].elapsed_ms != outcomes[ColorChannel.BLUE].elapsed_ms:
        winner = min(finishers, key=lambda c: outcomes[c].elapsed_ms)
    else:
        winner = None
    return MatchResult(outcomes[ColorChannel.RED], outcomes[ColorChannel.BLUE], winner)


def load_path_file(path: str | FilePath) -> list[tuple[int, int]]:
    """Read a JSON-lines path file: one [x,y] pair or {x,y} object per line.

    A line holding an object with a "channel" key is a header and is skipped
    (the match runner fixes channels by command-line role).
    """
    points: list[tuple[int, int]] = []
    with FilePath(path).open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError:
                raise LabError(SCRIPT_PARSE, f"{path}:{lineno}: invalid JSON") from None
            if isinstance(obj, dict) and "channel" in obj:
                continue
            if isinstance(obj, dict) and "x" in obj and "y" in obj:
                points.append((obj["x"], obj["y"]))
            elif isinstance(obj, list) and len(obj) == 2:
                points.append((obj[0], obj[1]))
            else:
                raise LabError(SCRIPT_PARSE, f"{path}:{lineno}: expected [x,y] or {{x,y}}")
    return points
