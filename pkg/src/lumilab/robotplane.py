"""Robot plane: every robot-side control activity except path planning.

A simulated robot is bound to one color channel and follows the route
currently projected on that channel. Time is a logical tick clock: one call
to :func:`step` is one timer tick, and ``tick_interval_ms`` is bookkeeping
for how much simulated wall time such a tick represents (the simulator never
sleeps). Movement is axis-aligned: 10 cells per tick vertically, 5 per tick
horizontally, clamped so the robot lands exactly on its target instead of
oscillating around it.

Commands addressed to one robot must be applied sequentially; two robots
advance independently under whatever tick schedule the harness imposes.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import Enum

from .errors import (
    HIGH_SPEED_LIMIT,
    LOW_SPEED_LIMIT,
    NO_PATH,
    NOT_RUNNING,
    PATH_COMPLETE,
    LabError,
)
from .lightplane import ColorChannel, LightField, Path, Waypoint, query_channel_path

V_STEP = 10  # cells per tick along y
H_STEP = 5   # cells per tick along x

HIGH_SPEED_MESSAGE = "You are accessed the limitation of speed(High Speed!!!)"
LOW_SPEED_MESSAGE = "You are accessed the limitation of speed(Low Speed!!!)"

# virtual driver defaults: push the speed up while the target is far, relax
# toward the average once near
FAR_THRESHOLD = 100   # Manhattan cells
SPEED_STEP = 100
AVG_SPEED = 500


class Heading(Enum):
    NORTH = "NORTH"  # decreasing y
    SOUTH = "SOUTH"
    EAST = "EAST"
    WEST = "WEST"


@dataclass
class VoiceReply:
    """The robot's textual spoken response to a voice token."""

    text: str
    state_changed: bool


@dataclass
class RobotState:
    """One simulated robot. ``tick_interval_ms`` always equals 1000 - speed."""

    channel: ColorChannel
    pos: Waypoint = Waypoint(0, 0)
    heading: Heading = Heading.EAST
    speed: int = 500
    tick_interval_ms: int = 500
    running: bool = False
    path: Path | None = None
    target_index: int = 0
    route_log: list[Waypoint] = dataclasses.field(default_factory=list)
    tick_count: int = 0


def assign_path(robot: RobotState, field: LightField) -> RobotState:
    """Pull the robot's channel's route from the light field and rewind.

    On success the robot is parked on the first waypoint with an empty route
    log, stopped, awaiting a run order. If the channel carries no path the
    CHANNEL_EMPTY error propagates and the robot is left idle with no route.
    """
    robot.running = False
    robot.target_index = 0
    robot.route_log = []
    robot.tick_count = 0
    try:
        path = query_channel_path(field, robot.channel)
    except LabError:
        robot.path = None
        raise
    robot.path = path
    robot.pos = path.waypoints[0]
    return robot


def set_speed(robot: RobotState, speed: int) -> RobotState:
    """Apply a speed slider value; the tick interval becomes 1000 - speed.

    Values at or beyond the limits (<= 0, >= 1000) leave speed and interval
    untouched but stop the robot and raise the matching limit error.
    """
    if speed >= 1000:
        robot.running = False
        raise LabError(HIGH_SPEED_LIMIT, HIGH_SPEED_MESSAGE)
    if speed <= 0:
        robot.running = False
        raise LabError(LOW_SPEED_LIMIT, LOW_SPEED_MESSAGE)
    robot.speed = speed
    robot.tick_interval_ms = 1000 - speed
    return robot


def run(robot: RobotState) -> RobotState:
    """Start the robot. Idempotent; requires an assigned route."""
    if robot.path is None:
        raise LabError(NO_PATH, "no route assigned; draw a path first")
    robot.running = True
    return robot


def stop(robot: RobotState) -> RobotState:
    """Stop the robot, keeping position, route, and log. Idempotent."""
    robot.running = False
    return robot


def voice_command(robot: RobotState, word: str) -> tuple[RobotState, VoiceReply]:
    """Exact-match vocal order handling for the tokens "OK" and "Finish".

    "OK" starts a stopped robot, "Finish" stops a running one; repeating an
    order earns a complaint instead of a state change. Any other word is
    silently ignored with an empty reply. Matching is case-sensitive.
    """
    if word == "OK":
        if robot.running:
            return robot, VoiceReply("Iam run now why you are repeated", False)
        run(robot)
        return robot, VoiceReply(f"thank you for run me with order {word}", True)
    if word == "Finish":
        if robot.running:
            robot.running = False
            return robot, VoiceReply(f"why you are stopped me with order {word}", True)
        return robot, VoiceReply("Iam not running to stop me now", False)
    return robot, VoiceReply("", False)


def step(robot: RobotState) -> RobotState:
    """Advance one timer tick.

    If the robot sits on its current target waypoint, the waypoint is logged
    and the target advances (finishing the route stops the robot); that tick
    moves nothing. Otherwise exactly one axis moves, in the fixed priority
    order: up, then left, then right, then down, by at most V_STEP or H_STEP
    cells, clamped to the remaining distance.
    """
    if robot.path is not None and robot.target_index >= len(robot.path.waypoints):
        raise LabError(PATH_COMPLETE, "route already completed")
    if not robot.running:
        raise LabError(NOT_RUNNING, "robot is stopped")
    if robot.path is None:
        raise LabError(NO_PATH, "no route assigned")

    target = robot.path.waypoints[robot.target_index]
    if robot.pos == target:
        robot.route_log.append(target)
        robot.target_index += 1
        if robot.target_index == len(robot.path.waypoints):
            robot.running = False
    else:
        x, y = robot.pos
        if y > target.y:
            y -= min(V_STEP, y - target.y)
            robot.heading = Heading.NORTH
        elif x > target.x:
            x -= min(H_STEP, x - target.x)
            robot.heading = Heading.WEST
        elif x < target.x:
            x += min(H_STEP, target.x - x)
            robot.heading = Heading.EAST
        else:
            y += min(V_STEP, target.y - y)
            robot.heading = Heading.SOUTH
        robot.pos = Waypoint(x, y)
    robot.tick_count += 1
    return robot


def route_report(robot: RobotState) -> list[Waypoint]:
    """Waypoints actually reached so far, in arrival order (a copy)."""
    return list(robot.route_log)


def termination_bound(path: Path) -> int:
    """Exact tick count for a robot started on the route's first waypoint.

    Each consecutive pair costs ceil(dx / H_STEP) + ceil(dy / V_STEP)
    movement ticks, plus one arrival tick per waypoint.
    """
    ticks = len(path.waypoints)
    prev = path.waypoints[0]
    for nxt in path.waypoints[1:]:
        dx = abs(nxt.x - prev.x)
        dy = abs(nxt.y - prev.y)
        ticks += -(-dx // H_STEP) + (-(-dy // V_STEP))
        prev = nxt
    return ticks


def virtual_driver(
    robot: RobotState,
    field: LightField,
    far_threshold: int = FAR_THRESHOLD,
    speed_step: int = SPEED_STEP,
    avg_speed: int = AVG_SPEED,
) -> RobotState:
    """Adaptive speed controller: sprint while far, settle near the average.

    The distance is the Manhattan distance from the robot to its current
    target waypoint on the assigned route (0 once the route is complete).
    Far targets raise the speed one step, capped at 999; otherwise the speed
    moves one step toward ``avg_speed``, without overshooting it. The tick
    interval is recomputed through the normal speed rules.
    """
    if robot.path is None:
        raise LabError(NO_PATH, "no route assigned")
    if robot.target_index >= len(robot.path.waypoints):
        distance = 0
    else:
        target = robot.path.waypoints[robot.target_index]
        distance = abs(robot.pos.x - target.x) + abs(robot.pos.y - target.y)
    if distance > far_threshold:
        new_speed = min(999, robot.speed + speed_step)
    elif robot.speed > avg_speed:
        new_speed = robot.speed - min(speed_step, robot.speed - avg_speed)
    elif robot.speed < avg_speed:
        new_speed = robot.speed + min(speed_step, avg_speed - robot.speed)
    else:
        new_speed = robot.speed
    return set_speed(robot, new_speed)
