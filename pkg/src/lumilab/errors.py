"""Error codes shared by every plane and by the wire protocol.

Every failure in the lab surfaces as a :class:`LabError` carrying a short
machine-readable ``code`` (what goes into the ``error`` field of a reply)
and an optional human-readable ``message`` (what a UI would display).
"""

from __future__ import annotations

# light-plane
EMPTY_PATH = "EMPTY_PATH"
OUT_OF_BOUNDS = "OUT_OF_BOUNDS"
TOO_LONG = "TOO_LONG"
CHANNEL_EMPTY = "CHANNEL_EMPTY"

# robot-plane
HIGH_SPEED_LIMIT = "HIGH_SPEED_LIMIT"
LOW_SPEED_LIMIT = "LOW_SPEED_LIMIT"
NO_PATH = "NO_PATH"
NOT_RUNNING = "NOT_RUNNING"
PATH_COMPLETE = "PATH_COMPLETE"

# reservation
BAD_PARTY = "BAD_PARTY"
USER_BANNED = "USER_BANNED"
OVERLAP = "OVERLAP"
PIN_UNKNOWN = "PIN_UNKNOWN"
PIN_EXPIRED = "PIN_EXPIRED"
LAB_FULL = "LAB_FULL"
NOT_YOUR_SLICE = "NOT_YOUR_SLICE"
NOT_COACH = "NOT_COACH"
NOT_MASTER = "NOT_MASTER"
SESSION_CLOSED = "SESSION_CLOSED"
SESSION_UNKNOWN = "SESSION_UNKNOWN"
NO_MATCH = "NO_MATCH"

# gateway
UNAUTHENTICATED = "UNAUTHENTICATED"
UNKNOWN_KIND = "UNKNOWN_KIND"
UNKNOWN_ROBOT = "UNKNOWN_ROBOT"
MALFORMED = "MALFORMED"
LIGHT_SERVER_DOWN = "LIGHT_SERVER_DOWN"
ROBOT_SERVER_DOWN = "ROBOT_SERVER_DOWN"

# harness
SCRIPT_PARSE = "SCRIPT_PARSE"
TICK_CAP_EXCEEDED = "TICK_CAP_EXCEEDED"


class LabError(Exception):
    """A domain failure with a protocol-ready error code."""

    def __init__(self, code: str, message: str = ""):
        super().__init__(message or code)
        self.code = code
        self.message = message or code

    def __repr__(self) -> str:
        return f"LabError({self.code!r}, {self.message!r})"
