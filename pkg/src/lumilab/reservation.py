"""Lab reservation: six multi-user access scenarios over one shared lab.

The lab is a critical resource. A reservation creates a :class:`Session`
with one time-limited pin per participant; logging in consumes capacity,
and the scenario decides who gets which privilege and for how long:

  S1  single user
  S2  coach plus two competitors (win/loss ledger, 24 h bans, coach ladder)
  S3  high / middle / low priority with durations t, t//2, t//3 minutes
  S4  master plus three or more slaves (commands fan out, speed excepted)
  S5  five equal peers round-table sharing the window in five time slices
  S6  two parents plus four or more children (a single parent is refused)

Time is a number of simulated seconds supplied by an injected clock; the
module never reads the host clock. All mutations go through one
:class:`ReservationAuthority`, which also appends every event to an
NDJSON log so win/loss/ban/precedence history survives restarts.
"""

from __future__ import annotations

import json
import secrets
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path as FilePath
from random import Random
from typing import Callable, Iterable

from .errors import (
    BAD_PARTY,
    LAB_FULL,
    NO_MATCH,
    NOT_COACH,
    NOT_MASTER,
    NOT_YOUR_SLICE,
    OVERLAP,
    PIN_EXPIRED,
    PIN_UNKNOWN,
    SESSION_CLOSED,
    USER_BANNED,
    LabError,
)

DAY_S = 24 * 3600
MINUTE_S = 60
BAN_LOSS_LIMIT = 5   # more than this many losses triggers the 24 h ban
COACH_WIN_COUNT = 4  # wins needed to be eligible as next coach


class Privilege(Enum):
    SINGLE = "SINGLE"
    COACH = "COACH"
    USER = "USER"
    HIGH = "HIGH"
    MIDDLE = "MIDDLE"
    LOW = "LOW"
    MASTER = "MASTER"
    SLAVE = "SLAVE"
    PEER = "PEER"
    PARENT = "PARENT"
    CHILD = "CHILD"


class Scenario(Enum):
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    S4 = "S4"
    S5 = "S5"
    S6 = "S6"


class SessionState(Enum):
    PENDING = "PENDING"
    OPEN = "OPEN"
    CLOSED = "CLOSED"


@dataclass
class Pin:
    """A six-digit access code bound to one user, privilege, and window."""

    code: str
    privilege: Privilege
    user_id: str
    valid_from: float
    valid_until: float


@dataclass
class UserRecord:
    user_id: str
    last_access: float | None = None
    wins: int = 0
    losses: int = 0
    banned_until: float | None = None
    training_plan: bool = False


@dataclass
class Session:
    scenario: Scenario
    pins: list[Pin]
    start: float
    duration: int  # minutes
    capacity: int
    created_at: float
    session_id: int = 0
    logged_in: set[str] = field(default_factory=set)
    slices: list[tuple[str, float, float]] | None = None
    state: SessionState = SessionState.PENDING
    match_open: bool = False

    @property
    def end(self) -> float:
        return self.start + self.duration * MINUTE_S

    def state_at(self, now: float) -> SessionState:
        if self.state is SessionState.CLOSED:
            return SessionState.CLOSED
        if now > self.end:
            return SessionState.CLOSED
        if now >= self.start:
            return SessionState.OPEN
        return SessionState.PENDING

    def pin_for(self, user_id: str) -> Pin | None:
        for pin in self.pins:
            if pin.user_id == user_id:
                return pin
        return None

    def holders_of(self, privilege: Privilege) -> list[str]:
        return [p.user_id for p in self.pins if p.privilege is privilege]


@dataclass
class ControlCommand:
    """One robot-affecting order issued inside a session."""

    issuer: str
    kind: str
    value: object | None = None


class SimClock:
    """Injectable simulated wall clock, in seconds."""

    def __init__(self, start: float = 0.0):
        self._now = float(start)

    def now(self) -> float:
        return self._now

    def advance(self, seconds: float) -> float:
        self._now += seconds
        return self._now

    def set(self, seconds: float) -> float:
        self._now = float(seconds)
        return self._now

    def __call__(self) -> float:
        return self._now


# party layout per scenario: (min size, max size or None, role of each slot)
def _party_roles(scenario: Scenario, party: list[str]) -> list[Privilege]:
    n = len(party)
    if scenario is Scenario.S1:
        if n != 1:
            raise LabError(BAD_PARTY, "single-user session takes exactly one user")
        return [Privilege.SINGLE]
    if scenario is Scenario.S2:
        if n != 3:
            raise LabError(BAD_PARTY, "competition takes a coach plus exactly two users")
        return [Privilege.COACH, Privilege.USER, Privilege.USER]
    if scenario is Scenario.S3:
        if n != 3:
            raise LabError(BAD_PARTY, "priority session takes exactly three users")
        return [Privilege.HIGH, Privilege.MIDDLE, Privilege.LOW]
    if scenario is Scenario.S4:
        if n < 4:
            raise LabError(BAD_PARTY, "master session needs a master plus at least three slaves")
        return [Privilege.MASTER] + [Privilege.SLAVE] * (n - 1)
    if scenario is Scenario.S5:
        if n != 5:
            raise LabError(BAD_PARTY, "round-table session takes exactly five users")
        return [Privilege.PEER] * 5
    if scenario is Scenario.S6:
        if n < 6:
            raise LabError(
                BAD_PARTY,
                "family session needs two parents for trust plus at least four children",
            )
        return [Privilege.PARENT, Privilege.PARENT] + [Privilege.CHILD] * (n - 2)
    raise LabError(BAD_PARTY, f"unknown scenario {scenario!r}")


def _grant_minutes(scenario: Scenario, privilege: Privilege, duration: int) -> int:
    """Minutes of validity a pin holder gets out of the session duration."""
    if scenario is Scenario.S3:
        if privilege is Privilege.MIDDLE:
            return duration // 2
        if privilege is Privilege.LOW:
            return duration // 3
    return duration


def tie_break(
    a: UserRecord,
    b: UserRecord,
    now: float,
    request_order: tuple[float, float],
) -> str:
    """Pick the winner of two requests for the same window.

    A user who has not accessed the lab in the last 24 hours (or ever) beats
    one who has; when the rule does not discriminate, the earlier request
    wins, and equal request times fall back to the smaller user id so the
    result never depends on argument order.
    """
    a_idle = a.last_access is None or a.last_access <= now - DAY_S
    b_idle = b.last_access is None or b.last_access <= now - DAY_S
    if a_idle != b_idle:
        return a.user_id if a_idle else b.user_id
    req_a, req_b = request_order
    if req_a != req_b:
        return a.user_id if req_a < req_b else b.user_id
    return min(a.user_id, b.user_id)


def eligible_as_coach(user: UserRecord) -> bool:
    """True once a competitor has won four or more matches."""
    return user.wins >= COACH_WIN_COUNT


def apply_match_result(
    winner: UserRecord, loser: UserRecord, now: float
) -> tuple[UserRecord, UserRecord]:
    """Book one match: bump counters and ban a loser past the loss limit.

    The sixth loss sets a 24 h ban, flags the user for a training plan, and
    resets the loss counter so the user returns clean.
    """
    winner.wins += 1
    loser.losses += 1
    if loser.losses > BAN_LOSS_LIMIT:
        loser.banned_until = now + DAY_S
        loser.training_plan = True
        loser.losses = 0
    return winner, loser


def training_plan_stub(user_id: str) -> list[str]:
    """Placeholder practice plan handed to a banned competitor."""
    return [
        f"{user_id}: replay a straight-line route at speed 300",
        f"{user_id}: replay an L-shaped route at speed 600",
        f"{user_id}: full zigzag route against the clock at speed 900",
    ]


def replicate_to_slaves(
    session: Session, cmd: ControlCommand, now: float
) -> list[tuple[str, ControlCommand]]:
    """Fan a master's command out to every slave, in pin order.

    SET_SPEED is never replicated: each slave robot's speed stays with its
    own user. Only the master of an open S4 session may replicate.
    """
    if session.state_at(now) is not SessionState.OPEN:
        raise LabError(SESSION_CLOSED, "session window is not open")
    masters = session.holders_of(Privilege.MASTER)
    if cmd.issuer not in masters:
        raise LabError(NOT_MASTER, f"{cmd.issuer} does not hold the master pin")
    if cmd.kind == "SET_SPEED":
        return []
    return [(slave, cmd) for slave in session.holders_of(Privilege.SLAVE)]


class EventLog:
    """Append-only newline-delimited JSON event log; replayable."""

    def __init__(self, path: str | FilePath | None):
        self.path = FilePath(path) if path is not None else None

    def append(self, event: dict) -> None:
        if self.path is None:
            return
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")

    @staticmethod
    def read(path: str | FilePath) -> list[dict]:
        events = []
        with FilePath(path).open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    events.append(json.loads(line))
        return events


def replay_user_records(events: Iterable[dict]) -> dict[str, UserRecord]:
    """Rebuild every user's access/win/loss/ban history from logged events."""
    users: dict[str, UserRecord] = {}

    def rec(user_id: str) -> UserRecord:
        if user_id not in users:
            users[user_id] = UserRecord(user_id)
        return users[user_id]

    for event in events:
        kind = event.get("event")
        if kind == "LOGIN":
            rec(event["user"]).last_access = event["ts"]
        elif kind == "MATCH_RESULT":
            rec(event["winner"]).wins += 1
            rec(event["loser"]).losses += 1
        elif kind == "BAN":
            user = rec(event["user"])
            user.banned_until = event["until"]
            user.training_plan = True
            user.losses = 0
    return users


class ReservationAuthority:
    """Single serialization point for sessions, logins, and match results."""

    def __init__(
        self,
        clock: Callable[[], float] | None = None,
        log_path: str | FilePath | None = None,
        rng: Random | None = None,
    ):
        self.clock = clock if clock is not None else SimClock()
        self.log = EventLog(log_path)
        self._rng = rng  # None means cryptographic pins
        self.sessions: dict[int, Session] = {}
        self.users: dict[str, UserRecord] = {}
        self._next_session_id = 1

    @classmethod
    def from_log(
        cls,
        log_path: str | FilePath,
        clock: Callable[[], float] | None = None,
        rng: Random | None = None,
    ) -> "ReservationAuthority":
        authority = cls(clock=clock, log_path=log_path, rng=rng)
        authority.users = replay_user_records(EventLog.read(log_path))
        return authority

    # -- helpers -------------------------------------------------------

    def user(self, user_id: str) -> UserRecord:
        if user_id not in self.users:
            self.users[user_id] = UserRecord(user_id)
        return self.users[user_id]

    def _pin_code(self, taken: set[str]) -> str:
        while True:
            if self._rng is None:
                code = f"{secrets.randbelow(1_000_000):06d}"
            else:
                code = f"{self._rng.randrange(1_000_000):06d}"
            if code not in taken:
                return code

    def _banned(self, user_id: str, now: float) -> bool:
        record = self.users.get(user_id)
        if record is None or record.banned_until is None:
            return False
        if now >= record.banned_until:
            record.banned_until = None  # ban served
            return False
        return True

    # -- operations ----------------------------------------------------

    def create_session(
        self, scenario: Scenario, party: list[str], start: float, duration: int
    ) -> Session:
        """Reserve the lab for a party, minting one pin per participant.

        Rejects parties that do not fit the scenario, parties with banned or
        duplicated members, and windows that overlap an existing reservation.
        A still-pending overlapping reservation can be displaced when the new
        primary user beats the old one under the 24 h precedence rule.
        """
        now = self.clock()
        roles = _party_roles(scenario, party)
        if len(set(party)) != len(party):
            raise LabError(BAD_PARTY, "party members must be distinct users")
        for user_id in party:
            if self._banned(user_id, now):
                raise LabError(USER_BANNED, f"{user_id} is banned from the lab")

        end = start + duration * MINUTE_S
        for other in list(self.sessions.values()):
            if other.state_at(now) is SessionState.CLOSED:
                continue
            if not (start < other.end and other.start < end):
                continue
            contendable = (
                other.state_at(now) is SessionState.PENDING and not other.logged_in
            )
            if contendable:
                winner = tie_break(
                    self.user(party[0]),
                    self.user(other.pins[0].user_id),
                    now,
                    (now, other.created_at),
                )
                if winner == party[0]:
                    other.state = SessionState.CLOSED  # displaced by precedence
                    continue
            raise LabError(OVERLAP, "lab already reserved for an intersecting window")

        pins: list[Pin] = []
        taken: set[str] = set()
        for user_id, privilege in zip(party, roles):
            minutes = _grant_minutes(scenario, privilege, duration)
            code = self._pin_code(taken)
            taken.add(code)
            pins.append(Pin(code, privilege, user_id, start, start + minutes * MINUTE_S))

        slices = None
        if scenario is Scenario.S5:
            window = duration * MINUTE_S
            slices = [
                (user_id, start + window * i / 5, start + window * (i + 1) / 5)
                for i, user_id in enumerate(party)
            ]

        session = Session(
            scenario=scenario,
            pins=pins,
            start=start,
            duration=duration,
            capacity=len(party),
            created_at=now,
            session_id=self._next_session_id,
            slices=slices,
        )
        self._next_session_id += 1
        self.sessions[session.session_id] = session
        self.log.append(
            {
                "event": "SESSION_CREATED",
                "session": session.session_id,
                "scenario": scenario.value,
                "party": list(party),
                "start": start,
                "duration": duration,
                "ts": now,
            }
        )
        return session

    def authenticate(self, session: Session, code: str, now: float) -> Privilege:
        """Trade a pin code for a privilege and a seat in the lab.

        A full lab turns away anyone not already seated before the code is
        even looked at ("no other user can log in"); then the checks run
        pin known, holder not banned, window valid, own time slice (S5).
        A successful login records the holder's lab access time for the
        24 h precedence rule.
        """
        pin = next((p for p in session.pins if p.code == code), None)
        seated = pin is not None and pin.user_id in session.logged_in
        if not seated and len(session.logged_in) >= session.capacity:
            raise LabError(LAB_FULL, "lab capacity reached; no other user can log in")
        if pin is None:
            raise LabError(PIN_UNKNOWN, "no such pin in this session")
        if self._banned(pin.user_id, now):
            raise LabError(USER_BANNED, f"{pin.user_id} is banned for 24 hours")
        if session.state is SessionState.CLOSED:
            raise LabError(PIN_EXPIRED, "session has been closed")
        if not (pin.valid_from <= now <= pin.valid_until):
            raise LabError(PIN_EXPIRED, "pin is outside its validity window")
        if session.slices is not None:
            holder_slice = next(s for s in session.slices if s[0] == pin.user_id)
            _, s_start, s_end = holder_slice
            last = session.slices[-1][0] == pin.user_id
            inside = s_start <= now <= s_end if last else s_start <= now < s_end
            if not inside:
                raise LabError(NOT_YOUR_SLICE, "outside this user's time slice")
        session.logged_in.add(pin.user_id)
        session.state = session.state_at(now)
        record = self.user(pin.user_id)
        record.last_access = now
        self.log.append(
            {"event": "LOGIN", "user": pin.user_id, "session": session.session_id, "ts": now}
        )
        return pin.privilege

    def logout(self, session: Session, user_id: str, now: float | None = None) -> None:
        """Release a seat; unknown users are ignored."""
        if user_id in session.logged_in:
            session.logged_in.discard(user_id)
            self.log.append(
                {
                    "event": "LOGOUT",
                    "user": user_id,
                    "session": session.session_id,
                    "ts": self.clock() if now is None else now,
                }
            )

    def _require_coach(self, session: Session, caller: str, now: float) -> None:
        if session.scenario is not Scenario.S2 or caller not in session.holders_of(Privilege.COACH):
            raise LabError(NOT_COACH, f"{caller} does not hold the coach pin")
        if session.state_at(now) is not SessionState.OPEN:
            raise LabError(SESSION_CLOSED, "competition window is not open")

    def start_match(self, session: Session, caller: str, now: float) -> None:
        """Coach-only: open a competition inside an S2 session."""
        self._require_coach(session, caller, now)
        session.match_open = True

    def record_match_result(
        self, session: Session, caller: str, winner_id: str, loser_id: str, now: float
    ) -> tuple[UserRecord, UserRecord]:
        """Coach-only: declare the winner of the currently open match."""
        self._require_coach(session, caller, now)
        if not session.match_open:
            raise LabError(NO_MATCH, "no competition has been started")
        participants = {p.user_id for p in session.pins}
        if winner_id not in participants or loser_id not in participants:
            raise LabError(BAD_PARTY, "winner and loser must hold pins in this session")
        winner, loser = apply_match_result(self.user(winner_id), self.user(loser_id), now)
        session.match_open = False
        self.log.append(
            {"event": "MATCH_RESULT", "winner": winner_id, "loser": loser_id, "ts": now}
        )
        if loser.banned_until is not None:
            self.log.append(
                {"event": "BAN", "user": loser_id, "until": loser.banned_until, "ts": now}
            )
        return winner, loser

    def master_replicate(
        self, session: Session, cmd: ControlCommand
    ) -> list[tuple[str, ControlCommand]]:
        """Fan a master's command out to the slaves (see replicate_to_slaves)."""
        return replicate_to_slaves(session, cmd, self.clock())
