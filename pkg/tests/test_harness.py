"""Scenario script replay and two-robot competition accounting."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lumilab.errors import SCRIPT_PARSE, TICK_CAP_EXCEEDED, LabError
from lumilab.harness import (
    TICK_CAP,
    load_path_file,
    load_script,
    parse_script,
    run_match,
    run_script,
)
from lumilab.lightplane import ColorChannel, Waypoint, plan_path
from lumilab.robotplane import termination_bound

L_PATH = [[0, 0], [30, 0], [30, 30]]
L_TICKS = termination_bound(plan_path(ColorChannel.RED, [tuple(p) for p in L_PATH]))


def script_lines(*objs):
    return [json.dumps(o) for o in objs]


def reserve_and_login(seed=7):
    return [
        {"kind": "HEADER", "seed": seed},
        {"kind": "RESERVE", "scenario": "S1", "party": ["ali"], "start": 0, "duration": 60},
        {"kind": "LOGIN", "session": 1, "code": "__PIN__"},
    ]


def scripted_session(extra_steps, seed=7):
    """Build a runnable script: reserve, log in with the seeded pin, then go on."""
    from lumilab.gateway import Gateway
    from lumilab.reservation import SimClock
    from random import Random

    # the pin sequence is a pure function of the header seed
    pin = f"{Random(seed).randrange(1_000_000):06d}"
    steps = reserve_and_login(seed)
    steps[2]["code"] = pin
    lines = script_lines(*steps, *extra_steps)
    return parse_script(lines)


# -- parsing ---------------------------------------------------------------


def test_empty_script_runs_to_empty_transcript():
    transcript, exit_code = run_script(parse_script([]))
    assert transcript == []
    assert exit_code == 0


def test_blank_lines_are_skipped():
    script = parse_script(["", "   ", '{"kind":"STATUS"}', ""])
    assert len(script.steps) == 1


def test_parse_rejects_bad_json():
    with pytest.raises(LabError) as err:
        parse_script(['{"kind":"STATUS"}', "{nope"])
    assert err.value.code == SCRIPT_PARSE
    assert "line 2" in err.value.message


def test_parse_rejects_misplaced_header():
    with pytest.raises(LabError) as err:
        parse_script(['{"kind":"STATUS"}', '{"kind":"HEADER","seed":1}'])
    assert err.value.code == SCRIPT_PARSE


def test_parse_rejects_bad_fault_directive():
    with pytest.raises(LabError) as err:
        parse_script(['{"kind":"FAULT","plane":"camera","up":false}'])
    assert err.value.code == SCRIPT_PARSE


def test_parse_rejects_clock_without_amount():
    with pytest.raises(LabError) as err:
        parse_script(['{"kind":"CLOCK"}'])
    assert err.value.code == SCRIPT_PARSE


def test_load_script_reads_files(tmp_path):
    path = tmp_path / "s.jsonl"
    path.write_text('{"kind":"HEADER","seed":3}\n{"kind":"STATUS"}\n', encoding="utf-8")
    script = load_script(path)
    assert script.seed == 3
    assert len(script.steps) == 1


# -- replay ----------------------------------------------------------------


def test_replay_is_byte_identical():
    steps = [
        {"kind": "DRAW_PATH", "channel": "RED", "points": L_PATH},
        {"kind": "SET_SPEED", "robot": "RED", "value": 700},
        {"kind": "RUN", "robot": "RED"},
        {"kind": "TICK", "n": L_TICKS},
        {"kind": "ROUTE_REPORT", "robot": "RED"},
    ]
    first, code_a = run_script(scripted_session(steps))
    second, code_b = run_script(scripted_session(steps))
    assert "\n".join(first) == "\n".join(second)
    assert code_a == code_b == 0


def test_scripted_run_completes_at_termination_bound():
    steps = [
        {"kind": "DRAW_PATH", "channel": "RED", "points": L_PATH},
        {"kind": "RUN", "robot": "RED"},
        {"kind": "TICK", "n": L_TICKS},
        {"kind": "EXPECT", "reply": {"ok": True, "result": {"robots": {"RED": {"complete": True, "ticks": L_TICKS}}}}},
    ]
    transcript, exit_code = run_script(scripted_session(steps))
    assert exit_code == 0
    # one tick earlier the route must not be complete
    steps[2] = {"kind": "TICK", "n": L_TICKS - 1}
    steps[3] = {"kind": "EXPECT", "reply": {"result": {"robots": {"RED": {"complete": False}}}}}
    _, exit_code = run_script(scripted_session(steps))
    assert exit_code == 0


def test_expect_mismatch_sets_exit_code():
    steps = [{"kind": "STATUS"}, {"kind": "EXPECT", "reply": {"ok": False}}]
    transcript, exit_code = run_script(scripted_session(steps))
    assert exit_code == 1
    failure = json.loads(transcript[-1])
    assert failure["event"] == "expect"
    assert failure["pass"] is False
    assert failure["want"] == {"ok": False}


def test_fault_directive_downs_one_plane():
    steps = [
        {"kind": "FAULT", "plane": "light", "up": False},
        {"kind": "DRAW_PATH", "channel": "RED", "points": L_PATH},
        {"kind": "EXPECT", "reply": {"ok": False, "error": "LIGHT_SERVER_DOWN"}},
        {"kind": "SET_SPEED", "robot": "RED", "value": 500},
        {"kind": "EXPECT", "reply": {"ok": True, "result": {"interval_ms": 500}}},
    ]
    _, exit_code = run_script(scripted_session(steps))
    assert exit_code == 0


def test_clock_directive_expires_pins():
    steps = [
        {"kind": "CLOCK", "advance_s": 2 * 3600},
        {"kind": "LOGIN", "session": 1, "code": "__WRONG__"},
        {"kind": "EXPECT", "reply": {"ok": False, "error": "PIN_UNKNOWN"}},
    ]
    script = scripted_session(steps)
    # re-login with the real pin after the window has passed
    real_pin = json.loads(json.dumps(script.steps[1]))["code"]
    script.steps[-2]["code"] = real_pin
    script.steps[-1] = {"kind": "EXPECT", "reply": {"ok": False, "error": "PIN_EXPIRED"}}
    _, exit_code = run_script(script)
    assert exit_code == 0


def test_transcript_interleaves_requests_and_replies():
    transcript, _ = run_script(scripted_session([{"kind": "STATUS"}]))
    events = [json.loads(line)["event"] for line in transcript]
    assert events == ["header", "request", "reply", "request", "reply", "request", "reply"]
    last = json.loads(transcript[-1])
    assert last["data"]["result"] == {"light_up": True, "robot_up": True}


def test_script_tick_budget_is_capped():
    steps = [{"kind": "TICK", "n": 60_000}, {"kind": "TICK", "n": 60_000}]
    with pytest.raises(LabError) as err:
        run_script(scripted_session(steps))
    assert err.value.code == TICK_CAP_EXCEEDED


def test_auto_ids_number_requests_sequentially():
    transcript, _ = run_script(scripted_session([{"kind": "STATUS"}, {"kind": "STATUS"}]))
    requests = [json.loads(l)["data"] for l in transcript if json.loads(l)["event"] == "request"]
    assert [r["id"] for r in requests] == [1, 2, 3, 4]


# -- competitions ------------------------------------------------------------


def test_fast_robot_wins_on_identical_paths():
    points = [(0, 0), (30, 0), (30, 30)]
    result = run_match(points, points, red_speed=900, blue_speed=100)
    ticks = termination_bound(plan_path(ColorChannel.RED, points))
    assert result.red.ticks_used == result.blue.ticks_used == ticks
    assert result.red.elapsed_ms == ticks * 100
    assert result.blue.elapsed_ms == ticks * 900
    assert result.winner is ColorChannel.RED
    assert result.winner_name == "RED"


def test_identical_configurations_draw():
    points = [(0, 0), (30, 0)]
    result = run_match(points, points, red_speed=640, blue_speed=640)
    assert result.winner is None
    assert result.winner_name == "DRAW"


def test_empty_blue_route_never_completes():
    result = run_match([(0, 0), (10, 0)], [], red_speed=500, blue_speed=500)
    assert result.red.completed
    assert not result.blue.completed
    assert result.blue.ticks_used == 0
    assert result.winner is ColorChannel.RED


def test_match_respects_tick_cap():
    long_red = [(0, 0), (639, 479)] * 100
    result = run_match(long_red, [], red_speed=500, blue_speed=500, tick_cap=10)
    assert not result.red.completed
    assert result.winner is None


def test_match_rejects_out_of_range_speed():
    with pytest.raises(LabError) as err:
        run_match([(0, 0)], [(0, 0)], red_speed=1000, blue_speed=500)
    assert err.value.code == "HIGH_SPEED_LIMIT"


speeds = st.integers(1, 999)


@given(speeds, speeds)
@settings(max_examples=40)
def test_winner_antisymmetry(red_speed, blue_speed):
    points = [(0, 0), (25, 0), (25, 20)]
    forward = run_match(points, points, red_speed, blue_speed)
    backward = run_match(points, points, blue_speed, red_speed)
    swap = {ColorChannel.RED: ColorChannel.BLUE, ColorChannel.BLUE: ColorChannel.RED, None: None}
    assert backward.winner is swap[forward.winner]


def test_to_dict_is_json_friendly():
    result = run_match([(0, 0)], [(0, 0)], 600, 400)
    blob = json.loads(json.dumps(result.to_dict()))
    assert set(blob) == {"winner", "red", "blue"}
    assert blob["red"]["completed"] is True


# -- path files --------------------------------------------------------------


def test_load_path_file_pairs_and_objects(tmp_path):
    path = tmp_path / "route.jsonl"
    path.write_text(
        '{"channel":"RED"}\n[0,0]\n{"x":3,"y":0}\n\n[3,3]\n',
        encoding="utf-8",
    )
    assert load_path_file(path) == [(0, 0), (3, 0), (3, 3)]


def test_load_path_file_rejects_garbage(tmp_path):
    path = tmp_path / "route.jsonl"
    path.write_text("[0,0]\nnot json\n", encoding="utf-8")
    with pytest.raises(LabError) as err:
        load_path_file(path)
    assert err.value.code == SCRIPT_PARSE
