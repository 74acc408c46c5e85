"""
A tour of the six lab reservation scenarios
===========================================

Every reservation mints one time-limited six-digit pin per participant.
Time below is simulated seconds driven by an injected clock, so the
whole tour runs instantly and reproducibly.
"""

import random

from lumilab import (
    ControlCommand,
    LabError,
    Privilege,
    ReservationAuthority,
    Scenario,
    SimClock,
    UserRecord,
    apply_match_result,
    eligible_as_coach,
    tie_break,
)

clock = SimClock(0.0)
auth = ReservationAuthority(clock=clock, rng=random.Random(42))  # seeded pins for the demo
MIN = 60


def show(session):
    print(f"  {session.scenario.value}: capacity {session.capacity}")
    for pin in session.pins:
        minutes = (pin.valid_until - pin.valid_from) / MIN
        print(f"    {pin.user_id:8} {pin.privilege.value:7} pin {pin.code}  valid {minutes:.0f} min")


# scenario 1 — one user, one pin, one window
print("scenario 1: single user")
s1 = auth.create_session(Scenario.S1, ["ali"], start=0, duration=30)
show(s1)
print("  login ->", auth.authenticate(s1, s1.pins[0].code, now=60).value)

# scenario 2 — a coach supervises two competitors
print("\nscenario 2: competition with a coach")
s2 = auth.create_session(Scenario.S2, ["coach", "amal", "basim"], start=40 * MIN, duration=60)
show(s2)
clock.set(40 * MIN)
auth.authenticate(s2, s2.pin_for("coach").code, clock())
for match in range(6):
    auth.start_match(s2, "coach", clock())
    auth.record_match_result(s2, "coach", "amal", "basim", clock())
amal, basim = auth.user("amal"), auth.user("basim")
print(f"  after 6 matches: amal {amal.wins} wins (coach-eligible: {eligible_as_coach(amal)})")
print(f"  basim banned until t={basim.banned_until:.0f}s, training plan: {basim.training_plan}")

# scenario 3 — three priority levels share one hour unevenly
print("\nscenario 3: high/middle/low priority, 60 minutes")
s3 = auth.create_session(Scenario.S3, ["hana", "mira", "lara"], start=200 * MIN, duration=60)
show(s3)

# scenario 4 — the master's commands fan out to every slave, except speed
print("\nscenario 4: master and slaves")
s4 = auth.create_session(Scenario.S4, ["boss", "w1", "w2", "w3"], start=300 * MIN, duration=30)
clock.set(300 * MIN)
print("  RUN fans out to:", [u for u, _ in auth.master_replicate(s4, ControlCommand("boss", "RUN"))])
print("  SET_SPEED fans out to:", auth.master_replicate(s4, ControlCommand("boss", "SET_SPEED", 700)))

# scenario 5 — five peers split the window into equal slices
print("\nscenario 5: round table, 50 minutes in 5 slices")
s5 = auth.create_session(Scenario.S5, ["a", "b", "c", "d", "e"], start=400 * MIN, duration=50)
for user, s_start, s_end in s5.slices:
    print(f"    {user}: [{s_start / MIN:.0f}, {s_end / MIN:.0f}] min")
try:
    auth.authenticate(s5, s5.pin_for("e").code, 401 * MIN)  # a's slice, e's pin
except LabError as err:
    print("  e logging in during a's slice ->", err.code)

# scenario 6 — family access needs both parents
print("\nscenario 6: parents and children")
try:
    auth.create_session(Scenario.S6, ["lone-parent", "c1", "c2", "c3", "c4"], 500 * MIN, 30)
except LabError as err:
    print("  one parent ->", err.code)
s6 = auth.create_session(Scenario.S6, ["mom", "dad", "c1", "c2", "c3", "c4"], 500 * MIN, 30)
print("  two parents ->", len(s6.pins), "pins")

# the 24-hour precedence rule decides contested windows
print("\nprecedence: idle-for-a-day users win contested slots")
now = 40 * 3600
fresh = UserRecord("newcomer")
regular = UserRecord("regular", last_access=now - 3600)
print("  winner:", tie_break(fresh, regular, now, (5.0, 1.0)))
