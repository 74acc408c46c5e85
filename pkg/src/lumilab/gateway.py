"""Gateway: the web-server role between clients and the two lab planes.

Clients speak newline-delimited JSON. Each request carries an ``id``, a
``kind``, and kind-specific fields at the top level; each reply echoes the
id with ``ok`` plus either a ``result`` object or an ``error`` code (and,
when the plane supplied one, a human-readable ``message``).

Routing is the whole point: path commands go to the light plane, control
commands to the robot plane, account commands to the reservation authority,
and STATUS is answered locally. Each plane can be marked down
independently; a command whose owning plane is down fails with
LIGHT_SERVER_DOWN or ROBOT_SERVER_DOWN while every other command keeps
working.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from random import Random
from typing import Any, Callable

from . import robotplane
from .errors import (
    MALFORMED,
    SESSION_UNKNOWN,
    TICK_CAP_EXCEEDED,
    UNAUTHENTICATED,
    UNKNOWN_KIND,
    UNKNOWN_ROBOT,
    LabError,
    LIGHT_SERVER_DOWN,
    ROBOT_SERVER_DOWN,
)
from .lightplane import (
    ColorChannel,
    LightField,
    Waypoint,
    clear_channel,
    plan_path,
    rasterize_path,
)
from .reservation import (
    Privilege,
    ReservationAuthority,
    Scenario,
    Session,
    SimClock,
)
from .robotplane import RobotState

KINDS = (
    "RESERVE",
    "LOGIN",
    "LOGOUT",
    "DRAW_PATH",
    "CLEAR_PATH",
    "SET_SPEED",
    "RUN",
    "STOP",
    "VOICE",
    "ROUTE_REPORT",
    "STATUS",
    "TICK",
    "START_MATCH",
    "DECLARE_WINNER",
)

LIGHT_KINDS = frozenset({"DRAW_PATH", "CLEAR_PATH"})
ROBOT_KINDS = frozenset({"SET_SPEED", "RUN", "STOP", "VOICE", "ROUTE_REPORT", "TICK"})
RESERVATION_KINDS = frozenset({"RESERVE", "LOGIN", "LOGOUT", "START_MATCH", "DECLARE_WINNER"})
UNAUTHENTICATED_OK = frozenset({"RESERVE", "LOGIN"})

MAX_TICKS_PER_MESSAGE = 100_000


@dataclass
class Message:
    """One wire frame: a request (kind + payload) or a reply (ok/error/result)."""

    id: int
    kind: str | None = None
    payload: dict[str, Any] = field(default_factory=dict)
    ok: bool | None = None
    error: str | None = None
    message: str | None = None
    result: dict[str, Any] | None = None

    @classmethod
    def request(cls, id: int, kind: str, **payload: Any) -> "Message":
        return cls(id=id, kind=kind, payload=payload)


@dataclass
class ServerStatus:
    light_up: bool = True
    robot_up: bool = True


def encode(msg: Message) -> str:
    """Serialize a message to one compact JSON line (no trailing newline)."""
    obj: dict[str, Any] = {"id": msg.id}
    if msg.kind is not None:
        obj["kind"] = msg.kind
        for key in sorted(msg.payload):
            obj[key] = msg.payload[key]
    else:
        obj["ok"] = msg.ok
        if msg.error is not None:
            obj["error"] = msg.error
        if msg.message is not None:
            obj["message"] = msg.message
        if msg.result is not None:
            obj["result"] = msg.result
    return json.dumps(obj, separators=(",", ":"))


def decode(line: str | bytes) -> Message:
    """Parse one line into a Message; raises MALFORMED, never crashes.

    A frame with a ``kind`` is a request and every other field beyond ``id``
    becomes payload; a frame with ``ok`` is a reply and unknown fields are
    ignored. Frames missing ``id`` or carrying neither marker are rejected.
    """
    try:
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        obj = json.loads(line)
    except (UnicodeDecodeError, json.JSONDecodeError):
        raise LabError(MALFORMED, "line is not valid JSON") from None
    if not isinstance(obj, dict):
        raise LabError(MALFORMED, "frame must be a JSON object")
    msg_id = obj.get("id")
    if isinstance(msg_id, bool) or not isinstance(msg_id, int):
        raise LabError(MALFORMED, "frame needs an integer id")
    if "kind" in obj:
        kind = obj["kind"]
        if not isinstance(kind, str):
            raise LabError(MALFORMED, "kind must be a string")
        payload = {k: v for k, v in obj.items() if k not in ("id", "kind")}
        return Message(id=msg_id, kind=kind, payload=payload)
    if "ok" in obj:
        ok = obj["ok"]
        if not isinstance(ok, bool):
            raise LabError(MALFORMED, "ok must be a boolean")
        error = obj.get("error")
        message = obj.get("message")
        result = obj.get("result")
        if error is not None and not isinstance(error, str):
            raise LabError(MALFORMED, "error must be a string")
        if result is not None and not isinstance(result, dict):
            raise LabError(MALFORMED, "result must be an object")
        return Message(id=msg_id, ok=ok, error=error, message=message, result=result)
    raise LabError(MALFORMED, "frame is neither a request nor a reply")


@dataclass
class Connection:
    """Per-client bookkeeping; identity is set by a successful LOGIN."""

    conn_id: int
    user_id: str | None = None
    privilege: Privilege | None = None
    session_id: int | None = None


def _parse_points(raw: Any) -> list[tuple[int, int]]:
    if not isinstance(raw, list):
        raise LabError(MALFORMED, "points must be a list")
    points = []
    for item in raw:
        if isinstance(item, dict) and "x" in item and "y" in item:
            points.append((item["x"], item["y"]))
        elif isinstance(item, (list, tuple)) and len(item) == 2:
            points.append((item[0], item[1]))
        else:
            raise LabError(MALFORMED, "each point must be [x,y] or {x,y}")
    for x, y in points:
        if isinstance(x, bool) or isinstance(y, bool) or not isinstance(x, int) or not isinstance(y, int):
            raise LabError(MALFORMED, "point coordinates must be integers")
    return points


class Gateway:
    """One lab instance: a light field, a RED and a BLUE robot, reservations.

    The gateway itself holds no domain state beyond server availability and
    connection bookkeeping; commands are applied synchronously, so per-robot
    and per-session ordering follows the order messages arrive in.
    """

    def __init__(
        self,
        clock: SimClock | None = None,
        seed: int | None = None,
        log_path: str | None = None,
        authority: ReservationAuthority | None = None,
    ):
        self.clock = clock if clock is not None else SimClock()
        if authority is not None:
            self.authority = authority
        else:
            rng = Random(seed) if seed is not None else None
            self.authority = ReservationAuthority(clock=self.clock, log_path=log_path, rng=rng)
        self.field = LightField()
        self.robots: dict[ColorChannel, RobotState] = {
            c: RobotState(channel=c) for c in ColorChannel
        }
        self.elapsed_ms: dict[ColorChannel, int] = {c: 0 for c in ColorChannel}
        self.status = ServerStatus()
        self._next_conn = 1

    # -- connection lifecycle -------------------------------------------

    def connect(self) -> Connection:
        conn = Connection(conn_id=self._next_conn)
        self._next_conn += 1
        return conn

    def set_server_status(self, plane: str, up: bool) -> ServerStatus:
        """Fault injection switch for the two lab planes."""
        if plane == "light":
            self.status.light_up = up
        elif plane == "robot":
            self.status.robot_up = up
        else:
            raise LabError(MALFORMED, f"unknown plane {plane!r}")
        return self.status

    # -- protocol entry points ------------------------------------------

    def handle_line(self, conn: Connection, line: str | bytes) -> str:
        """Decode one request line and return the encoded reply line."""
        try:
            msg = decode(line)
        except LabError as err:
            return encode(Message(id=0, ok=False, error=err.code, message=err.message))
        return encode(self.route_command(conn, msg))

    def route_command(self, conn: Connection, msg: Message) -> Message:
        """Dispatch one request to its owning plane and build the reply."""
        if msg.kind is None:
            return self._error(msg.id, LabError(MALFORMED, "expected a request frame"))
        if msg.kind not in KINDS:
            return self._error(msg.id, LabError(UNKNOWN_KIND, f"unknown kind {msg.kind!r}"))
        if msg.kind not in UNAUTHENTICATED_OK and conn.user_id is None:
            return self._error(msg.id, LabError(UNAUTHENTICATED, "log in first"))
        if msg.kind in LIGHT_KINDS and not self.status.light_up:
            return self._error(msg.id, LabError(LIGHT_SERVER_DOWN, "light control server is down"))
        if msg.kind in ROBOT_KINDS and not self.status.robot_up:
            return self._error(msg.id, LabError(ROBOT_SERVER_DOWN, "robot control server is down"))
        handler: Callable[[Connection, dict], dict] = getattr(self, "_op_" + msg.kind.lower())
        try:
            result = handler(conn, msg.payload)
        except LabError as err:
            return self._error(msg.id, err)
        return Message(id=msg.id, ok=True, result=result)

    @staticmethod
    def _error(msg_id: int, err: LabError) -> Message:
        message = err.message if err.message != err.code else None
        return Message(id=msg_id, ok=False, error=err.code, message=message)

    # -- payload helpers -------------------------------------------------

    def _robot(self, payload: dict) -> RobotState:
        name = payload.get("robot")
        try:
            return self.robots[ColorChannel(name)]
        except (KeyError, ValueError):
            raise LabError(UNKNOWN_ROBOT, f"no robot on channel {name!r}") from None

    @staticmethod
    def _channel(payload: dict) -> ColorChannel:
        name = payload.get("channel", payload.get("robot"))
        try:
            return ColorChannel(name)
        except ValueError:
            raise LabError(UNKNOWN_ROBOT, f"no channel named {name!r}") from None

    def _session(self, conn: Connection, payload: dict) -> Session:
        session_id = payload.get("session", conn.session_id)
        session = self.authority.sessions.get(session_id)
        if session is None:
            raise LabError(SESSION_UNKNOWN, f"no session {session_id!r}")
        return session

    def _snapshot(self, channel: ColorChannel) -> dict:
        robot = self.robots[channel]
        complete = robot.path is not None and robot.target_index >= len(robot.path.waypoints)
        return {
            "x": robot.pos.x,
            "y": robot.pos.y,
            "heading": robot.heading.value,
            "speed": robot.speed,
            "interval_ms": robot.tick_interval_ms,
            "running": robot.running,
            "complete": complete,
            "ticks": robot.tick_count,
            "elapsed_ms": self.elapsed_ms[channel],
            "logged": len(robot.route_log),
        }

    # -- handlers, one per command kind ----------------------------------

    def _op_status(self, conn: Connection, payload: dict) -> dict:
        return {"light_up": self.status.light_up, "robot_up": self.status.robot_up}

    def _op_draw_path(self, conn: Connection, payload: dict) -> dict:
        channel = self._channel(payload)
        points = _parse_points(payload.get("points"))
        path = plan_path(channel, points)
        rasterize_path(path, self.field)
        robot = self.robots[channel]
        robotplane.assign_path(robot, self.field)
        self.elapsed_ms[channel] = 0
        return {"channel": channel.value, "length": len(path.waypoints)}

    def _op_clear_path(self, conn: Connection, payload: dict) -> dict:
        channel = self._channel(payload)
        clear_channel(channel, self.field)
        robot = self.robots[channel]
        robot.path = None
        robot.running = False
        robot.target_index = 0
        robot.route_log = []
        return {"channel": channel.value, "cleared": True}

    def _op_set_speed(self, conn: Connection, payload: dict) -> dict:
        robot = self._robot(payload)
        value = payload.get("value")
        if isinstance(value, bool) or not isinstance(value, int):
            raise LabError(MALFORMED, "value must be an integer")
        robotplane.set_speed(robot, value)
        return {"interval_ms": robot.tick_interval_ms}

    def _op_run(self, conn: Connection, payload: dict) -> dict:
        robot = self._robot(payload)
        robotplane.run(robot)
        return {"running": True}

    def _op_stop(self, conn: Connection, payload: dict) -> dict:
        robot = self._robot(payload)
        robotplane.stop(robot)
        return {"running": False}

    def _op_voice(self, conn: Connection, payload: dict) -> dict:
        robot = self._robot(payload)
        word = payload.get("word")
        if not isinstance(word, str):
            raise LabError(MALFORMED, "word must be a string")
        _, reply = robotplane.voice_command(robot, word)
        return {"reply": reply.text, "state_changed": reply.state_changed, "running": robot.running}

    def _op_route_report(self, conn: Connection, payload: dict) -> dict:
        robot = self._robot(payload)
        waypoints = robotplane.route_report(robot)
        return {"waypoints": [[w.x, w.y] for w in waypoints], "count": len(waypoints)}

    def _op_tick(self, conn: Connection, payload: dict) -> dict:
        n = payload.get("n", 1)
        if isinstance(n, bool) or not isinstance(n, int) or n < 0:
            raise LabError(MALFORMED, "n must be a non-negative integer")
        if n > MAX_TICKS_PER_MESSAGE:
            raise LabError(TICK_CAP_EXCEEDED, f"at most {MAX_TICKS_PER_MESSAGE} ticks per message")
        for _ in range(n):
            for channel, robot in self.robots.items():
                if robot.running:
                    robotplane.step(robot)
                    self.elapsed_ms[channel] += robot.tick_interval_ms
        return {
            "ticked": n,
            "robots": {c.value: self._snapshot(c) for c in ColorChannel},
        }

    def _op_reserve(self, conn: Connection, payload: dict) -> dict:
        try:
            scenario = Scenario(payload.get("scenario"))
        except ValueError:
            raise LabError(MALFORMED, "scenario must be one of S1..S6") from None
        party = payload.get("party")
        if not isinstance(party, list) or not all(isinstance(u, str) for u in party):
            raise LabError(MALFORMED, "party must be a list of user ids")
        start = payload.get("start")
        duration = payload.get("duration")
        if isinstance(start, bool) or not isinstance(start, (int, float)):
            raise LabError(MALFORMED, "start must be a timestamp")
        if isinstance(duration, bool) or not isinstance(duration, int) or duration <= 0:
            raise LabError(MALFORMED, "duration must be a positive number of minutes")
        session = self.authority.create_session(scenario, party, start, duration)
        result = {
            "session": session.session_id,
            "capacity": session.capacity,
            "pins": [
                {
                    "user": p.user_id,
                    "code": p.code,
                    "privilege": p.privilege.value,
                    "valid_from": p.valid_from,
                    "valid_until": p.valid_until,
                }
                for p in session.pins
            ],
        }
        if session.slices is not None:
            result["slices"] = [
                {"user": u, "from": s, "until": e} for u, s, e in session.slices
            ]
        return result

    def _op_login(self, conn: Connection, payload: dict) -> dict:
        session = self._session(conn, payload)
        code = payload.get("code")
        if not isinstance(code, str):
            raise LabError(MALFORMED, "code must be a string")
        privilege = self.authority.authenticate(session, code, self.clock())
        pin = next(p for p in session.pins if p.code == code)
        conn.user_id = pin.user_id
        conn.privilege = privilege
        conn.session_id = session.session_id
        return {"user": pin.user_id, "privilege": privilege.value, "session": session.session_id}

    def _op_logout(self, conn: Connection, payload: dict) -> dict:
        session = self.authority.sessions.get(conn.session_id)
        if session is not None and conn.user_id is not None:
            self.authority.logout(session, conn.user_id, self.clock())
        user = conn.user_id
        conn.user_id = None
        conn.privilege = None
        conn.session_id = None
        return {"user": user, "logged_out": True}

    def _op_start_match(self, conn: Connection, payload: dict) -> dict:
        session = self._session(conn, payload)
        self.authority.start_match(session, conn.user_id, self.clock())
        return {"match_open": True}

    def _op_declare_winner(self, conn: Connection, payload: dict) -> dict:
        session = self._session(conn, payload)
        winner_id = payload.get("winner")
        loser_id = payload.get("loser")
        if not isinstance(winner_id, str) or not isinstance(loser_id, str):
            raise LabError(MALFORMED, "winner and loser must be user ids")
        winner, loser = self.authority.record_match_result(
            session, conn.user_id, winner_id, loser_id, self.clock()
        )
        return {
            "winner": {"user": winner.user_id, "wins": winner.wins},
            "loser": {
                "user": loser.user_id,
                "losses": loser.losses,
                "banned_until": loser.banned_until,
                "training_plan": loser.training_plan,
            },
        }
