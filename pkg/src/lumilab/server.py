"""Network front end: NDJSON over TCP plus the same frames over WebSocket.

One process hosts all planes behind a single :class:`Gateway`. Every client
connection (TCP line stream or browser WebSocket) gets its own logical
connection; frames are handled synchronously on the event loop, so all
domain mutations are serialized while connections stay concurrent.

Configuration comes from an optional JSON file plus LUMILAB_* environment
overrides; port 0 asks the OS for a free port, and the actual endpoints are
announced on stdout as a single JSON "listening" line.
"""

from __future__ import annotations

import asyncio
import json
import os
from dataclasses import dataclass
from pathlib import Path as FilePath

import uvicorn
from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles

from .gateway import Gateway

ENV_PREFIX = "LUMILAB_"


@dataclass
class ServerConfig:
    host: str = "127.0.0.1"
    tcp_port: int = 7601
    http_port: int | None = 7600
    persistence: str | None = None
    seed: int | None = None
    static_dir: str | None = None


def load_config(path: str | FilePath | None = None) -> ServerConfig:
    """Build a config from defaults, a JSON file, then environment overrides."""
    cfg = ServerConfig()
    if path is not None:
        data = json.loads(FilePath(path).read_text(encoding="utf-8"))
        for key in vars(cfg):
            if key in data:
                setattr(cfg, key, data[key])
    env_int = lambda v: None if v in ("", "null", "none") else int(v)
    overrides = {
        "host": str,
        "tcp_port": env_int,
        "http_port": env_int,
        "persistence": str,
        "seed": env_int,
        "static_dir": str,
    }
    for key, convert in overrides.items():
        raw = os.environ.get(ENV_PREFIX + key.upper())
        if raw is not None:
            setattr(cfg, key, convert(raw))
    return cfg


class LabServer:
    """Runs the gateway behind TCP and (optionally) HTTP/WebSocket listeners."""

    def __init__(self, config: ServerConfig | None = None):
        self.config = config if config is not None else ServerConfig()
        self.gateway = Gateway(seed=self.config.seed, log_path=self.config.persistence)
        self._tcp_server: asyncio.AbstractServer | None = None
        self._uvicorn: uvicorn.Server | None = None
        self._uvicorn_task: asyncio.Task | None = None
        self.tcp_port: int | None = None
        self.http_port: int | None = None

    async def _serve_tcp_client(self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter) -> None:
        conn = self.gateway.connect()
        try:
            while True:
                line = await reader.readline()
                if not line:
                    break
                if not line.strip():
                    continue
                reply = self.gateway.handle_line(conn, line)
                writer.write(reply.encode("utf-8") + b"\n")
                await writer.drain()
        except ConnectionResetError:
            pass
        finally:
            writer.close()

    def _build_app(self) -> FastAPI:
        app = FastAPI()
        gateway = self.gateway

        @app.websocket("/ws")
        async def ws_endpoint(ws: WebSocket) -> None:
            await ws.accept()
            conn = gateway.connect()
            try:
                while True:
                    line = await ws.receive_text()
                    await ws.send_text(gateway.handle_line(conn, line))
            except WebSocketDisconnect:
                pass

        static = self.config.static_dir
        if static and FilePath(static).is_dir():
            app.mount("/", StaticFiles(directory=static, html=True), name="ui")
        return app

    async def start(self) -> None:
        cfg = self.config
        self._tcp_server = await asyncio.start_server(
            self._serve_tcp_client, host=cfg.host, port=cfg.tcp_port
        )
        self.tcp_port = self._tcp_server.sockets[0].getsockname()[1]

        if cfg.http_port is not None:
            uv_config = uvicorn.Config(
                self._build_app(),
                host=cfg.host,
                port=cfg.http_port,
                log_level="warning",
                lifespan="off",
            )
            self._uvicorn = uvicorn.Server(uv_config)
            self._uvicorn_task = asyncio.create_task(self._uvicorn.serve())
            while not self._uvicorn.started:
                if self._uvicorn_task.done():
                    self._uvicorn_task.result()  # surface startup errors
                await asyncio.sleep(0.01)
            self.http_port = self._uvicorn.servers[0].sockets[0].getsockname()[1]

        print(
            json.dumps(
                {
                    "event": "listening",
                    "host": cfg.host,
                    "tcp_port": self.tcp_port,
                    "http_port": self.http_port,
                }
            ),
            flush=True,
        )

    async def stop(self) -> None:
        if self._tcp_server is not None:
            self._tcp_server.close()
            await self._tcp_server.wait_closed()
        if self._uvicorn is not None:
            self._uvicorn.should_exit = True
            await self._uvicorn_task

    async def run_forever(self) -> None:
        await self.start()
        try:
            await asyncio.Event().wait()
        finally:
            await self.stop()


def serve_forever(config: ServerConfig) -> None:
    try:
        asyncio.run(LabServer(config).run_forever())
    except KeyboardInterrupt:
        pass
