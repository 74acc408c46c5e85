"""End-to-end framing over real sockets: TCP lines and the WebSocket bridge."""

import asyncio
import json

import pytest
import websockets

from lumilab.server import LabServer, ServerConfig, load_config


def loopback_config(**overrides):
    base = dict(host="127.0.0.1", tcp_port=0, http_port=0, seed=5)
    base.update(overrides)
    return ServerConfig(**base)


async def tcp_call(reader, writer, obj):
    writer.write((json.dumps(obj) + "\n").encode())
    await writer.drain()
    return json.loads(await reader.readline())


async def reserve_and_login(reader, writer):
    reserved = await tcp_call(
        reader,
        writer,
        {"id": 1, "kind": "RESERVE", "scenario": "S1", "party": ["ali"], "start": 0, "duration": 60},
    )
    assert reserved["ok"], reserved
    code = reserved["result"]["pins"][0]["code"]
    session = reserved["result"]["session"]
    logged = await tcp_call(reader, writer, {"id": 2, "kind": "LOGIN", "session": session, "code": code})
    assert logged["ok"], logged
    return session, code


def test_tcp_request_reply_cycle(capsys):
    async def scenario():
        server = LabServer(loopback_config(http_port=None))
        await server.start()
        try:
            reader, writer = await asyncio.open_connection("127.0.0.1", server.tcp_port)
            await reserve_and_login(reader, writer)
            status = await tcp_call(reader, writer, {"id": 3, "kind": "STATUS"})
            assert status == {"id": 3, "ok": True, "result": {"light_up": True, "robot_up": True}}
            garbled = await tcp_call(reader, writer, {"id": 4})
            assert garbled["ok"] is False and garbled["error"] == "MALFORMED"
            writer.close()
        finally:
            await server.stop()

    asyncio.run(scenario())
    announced = json.loads(capsys.readouterr().out.splitlines()[0])
    assert announced["event"] == "listening"
    assert announced["tcp_port"] > 0
    assert announced["http_port"] is None


def test_each_tcp_connection_is_its_own_login():
    async def scenario():
        server = LabServer(loopback_config(http_port=None))
        await server.start()
        try:
            r1, w1 = await asyncio.open_connection("127.0.0.1", server.tcp_port)
            await reserve_and_login(r1, w1)
            # the second connection shares domain state but not identity
            r2, w2 = await asyncio.open_connection("127.0.0.1", server.tcp_port)
            denied = await tcp_call(r2, w2, {"id": 1, "kind": "STATUS"})
            assert denied["error"] == "UNAUTHENTICATED"
            w1.close()
            w2.close()
        finally:
            await server.stop()

    asyncio.run(scenario())


def test_full_robot_run_over_tcp():
    async def scenario():
        server = LabServer(loopback_config(http_port=None))
        await server.start()
        try:
            reader, writer = await asyncio.open_connection("127.0.0.1", server.tcp_port)
            await reserve_and_login(reader, writer)
            drawn = await tcp_call(
                reader, writer,
                {"id": 3, "kind": "DRAW_PATH", "channel": "RED", "points": [[0, 0], [3, 0], [3, 3]]},
            )
            assert drawn["ok"]
            await tcp_call(reader, writer, {"id": 4, "kind": "RUN", "robot": "RED"})
            ticked = await tcp_call(reader, writer, {"id": 5, "kind": "TICK", "n": 5})
            assert ticked["result"]["robots"]["RED"]["complete"] is True
            report = await tcp_call(reader, writer, {"id": 6, "kind": "ROUTE_REPORT", "robot": "RED"})
            assert report["result"]["waypoints"] == [[0, 0], [3, 0], [3, 3]]
            writer.close()
        finally:
            await server.stop()

    asyncio.run(scenario())


def test_websocket_speaks_the_same_frames():
    async def scenario():
        server = LabServer(loopback_config())
        await server.start()
        try:
            uri = f"ws://127.0.0.1:{server.http_port}/ws"
            async with websockets.connect(uri) as ws:
                await ws.send(json.dumps(
                    {"id": 1, "kind": "RESERVE", "scenario": "S1", "party": ["ali"], "start": 0, "duration": 60}
                ))
                reserved = json.loads(await ws.recv())
                assert reserved["ok"]
                code = reserved["result"]["pins"][0]["code"]
                await ws.send(json.dumps({"id": 2, "kind": "LOGIN", "session": 1, "code": code}))
                assert json.loads(await ws.recv())["ok"]
                await ws.send(json.dumps({"id": 3, "kind": "STATUS"}))
                status = json.loads(await ws.recv())
                assert status["result"] == {"light_up": True, "robot_up": True}
        finally:
            await server.stop()

    asyncio.run(scenario())


def test_seeded_server_mints_reproducible_pins():
    async def pins_of(seed):
        server = LabServer(loopback_config(http_port=None, seed=seed))
        await server.start()
        try:
            reader, writer = await asyncio.open_connection("127.0.0.1", server.tcp_port)
            reserved = await tcp_call(
                reader, writer,
                {"id": 1, "kind": "RESERVE", "scenario": "S3", "party": ["h", "m", "l"], "start": 0, "duration": 60},
            )
            writer.close()
            return [p["code"] for p in reserved["result"]["pins"]]
        finally:
            await server.stop()

    first = asyncio.run(pins_of(21))
    second = asyncio.run(pins_of(21))
    other = asyncio.run(pins_of(22))
    assert first == second
    assert first != other


def test_load_config_file_and_env(tmp_path, monkeypatch):
    cfg_file = tmp_path / "lab.json"
    cfg_file.write_text(json.dumps({"tcp_port": 9001, "seed": 4}), encoding="utf-8")
    cfg = load_config(cfg_file)
    assert cfg.tcp_port == 9001
    assert cfg.seed == 4
    assert cfg.host == "127.0.0.1"

    monkeypatch.setenv("LUMILAB_TCP_PORT", "0")
    monkeypatch.setenv("LUMILAB_HOST", "0.0.0.0")
    cfg = load_config(cfg_file)
    assert cfg.tcp_port == 0
    assert cfg.host == "0.0.0.0"
    assert cfg.seed == 4  # file value survives when no override is set


def test_persistence_path_reaches_the_event_log(tmp_path):
    log_file = tmp_path / "events.ndjson"

    async def scenario():
        server = LabServer(loopback_config(http_port=None, persistence=str(log_file)))
        await server.start()
        try:
            reader, writer = await asyncio.open_connection("127.0.0.1", server.tcp_port)
            await reserve_and_login(reader, writer)
            writer.close()
        finally:
            await server.stop()

    asyncio.run(scenario())
    events = [json.loads(l) for l in log_file.read_text().splitlines()]
    assert [e["event"] for e in events] == ["SESSION_CREATED", "LOGIN"]
