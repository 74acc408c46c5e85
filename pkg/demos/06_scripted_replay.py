"""
Deterministic scenario scripts
==============================

A scenario script is newline-delimited JSON in the same grammar as the
wire protocol, plus a few directives: HEADER seeds the pin generator,
FAULT toggles a plane, CLOCK moves simulated time, EXPECT asserts on
the previous reply. Replaying a script twice gives byte-identical
transcripts, which is what makes the lab testable end to end.
"""

import json
from random import Random

from lumilab.harness import parse_script, run_script

seed = 2718
coach_pin = f"{Random(seed).randrange(1_000_000):06d}"  # pins are a pure function of the seed

script_lines = [
    {"kind": "HEADER", "seed": seed},
    {"kind": "RESERVE", "scenario": "S1", "party": ["ali"], "start": 0, "duration": 60},
    {"kind": "LOGIN", "session": 1, "code": coach_pin},
    {"kind": "DRAW_PATH", "channel": "RED", "points": [[0, 0], [20, 0], [20, 20]]},
    {"kind": "SET_SPEED", "robot": "RED", "value": 800},
    {"kind": "RUN", "robot": "RED"},
    {"kind": "TICK", "n": 9},
    {"kind": "EXPECT", "reply": {"ok": True, "result": {"robots": {"RED": {"complete": True}}}}},
    {"kind": "ROUTE_REPORT", "robot": "RED"},
    {"kind": "EXPECT", "reply": {"result": {"count": 3}}},
]
script = parse_script(json.dumps(line) for line in script_lines)

first, exit_code = run_script(script)
second, _ = run_script(script)

print("exit code:", exit_code, "(0 = every EXPECT matched)")
print("replay identical:", first == second)
print("\ntranscript:")
for line in first:
    print(" ", line)
