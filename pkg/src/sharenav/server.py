"""Live session service: a WebSocket bridge between the tick engine and a
teleop console.

One driver connection may send inputs and commands; any number of observers
receive the same broadcasts. All mutable state belongs to the single session
loop; socket handlers only append to the inbound queue, and inputs are applied
at tick boundaries in arrival order. Every frame is one JSON object with a
"v": 1 field.
"""
from __future__ import annotations

import asyncio
import json
import time
from collections import deque
from contextlib import asynccontextmanager
from dataclasses import dataclass, field

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .config import SimConfig
from .controller import ControlMode, JoystickState
from .scenario import Engine
from .sim import TIME_EPS
from .world import WorldModel

WIRE_VERSION = 1


@dataclass
class SessionConfig:
    mode: ControlMode
    sim: SimConfig = field(default_factory=SimConfig)
    rate: float = 20.0        # state frames per second of sim time
    realtime: bool = True     # pace ticks against the wall clock
    autostart: bool = False

    def __post_init__(self) -> None:
        if self.rate <= 0 or self.rate > 1.0 / self.sim.dt + 1e-9:
            raise ValueError("broadcast rate must be in (0, 1/dt]")

    @property
    def broadcast_stride(self) -> int:
        return max(1, round(1.0 / (self.rate * self.sim.dt)))


class Session:
    """Owns one engine and its connections; restarted in place by `reset`."""

    def __init__(self, world: WorldModel, conf: SessionConfig):
        self.world = world
        self.conf = conf
        self.engine = Engine(world, conf.mode, conf.sim)
        self.mode = conf.mode
        self.running = False
        self._sockets: list[WebSocket] = []
        self._driver: WebSocket | None = None
        self._inputs: deque[tuple[float, JoystickState]] = deque()
        self._held_frames: deque[tuple[float, dict]] = deque()
        self._task: asyncio.Task | None = None

    # -- messages ------------------------------------------------------------

    def _world_message(self) -> dict:
        return {
            "v": WIRE_VERSION,
            "type": "world",
            "mode": self.mode.value,
            "dt": self.conf.sim.dt,
            "latency": self.conf.sim.input_latency,
            "rate": self.conf.rate,
            **self.world.as_dict(),
        }

    def _state_message(self) -> dict:
        return {"v": WIRE_VERSION, "type": "state", **self.engine.snapshot()}

    def _metrics_message(self) -> dict:
        return {"v": WIRE_VERSION, "type": "metrics",
                "summary": self.engine.record().summary.as_dict()}

    # -- connection handling ---------------------------------------------------

    async def handle(self, ws: WebSocket) -> None:
        await ws.accept()
        role = "driver" if self._driver is None else "observer"
        if role == "driver":
            self._driver = ws
        self._sockets.append(ws)
        try:
            await ws.send_text(json.dumps({"v": WIRE_VERSION, "type": "hello", "role": role}))
            await ws.send_text(json.dumps(self._world_message()))
            await ws.send_text(json.dumps(self._state_message()))
            while True:
                text = await ws.receive_text()
                await self._dispatch(ws, text)
        except WebSocketDisconnect:
            pass
        finally:
            if ws in self._sockets:
                self._sockets.remove(ws)
            if ws is self._driver:
                self._driver = None
                # safety stop: lever to center, trigger up
                self.submit_input(self.engine.clock.time, JoystickState())

    async def _dispatch(self, ws: WebSocket, text: str) -> None:
        try:
            msg = json.loads(text)
        except json.JSONDecodeError:
            await self._send(ws, {"v": WIRE_VERSION, "type": "error", "message": "frame is not JSON"})
            return
        kind = msg.get("type")
        if kind == "input":
            if ws is not self._driver:
                await self._send(ws, {"v": WIRE_VERSION, "type": "error",
                                      "message": "observers cannot drive"})
                return
            t = float(msg.get("t", self.engine.clock.time))
            self.submit_input(t, JoystickState(jx=float(msg.get("jx", 0.0)),
                                               jy=float(msg.get("jy", 0.0)),
                                               trigger=bool(msg.get("trigger", False))))
        elif kind == "command":
            if ws is not self._driver:
                await self._send(ws, {"v": WIRE_VERSION, "type": "error",
                                      "message": "observers cannot send commands"})
                return
            await self._command(ws, msg)
        elif kind == "get_costmap":
            await self._send(ws, {"v": WIRE_VERSION, "type": "costmap",
                                  **self.engine.costmap_message()})
        elif kind == "get_metrics":
            if self.engine.done:
                await self._send(ws, self._metrics_message())
            else:
                await self._send(ws, {"v": WIRE_VERSION, "type": "error",
                                      "message": "run not finished"})
        else:
            await self._send(ws, {"v": WIRE_VERSION, "type": "error",
                                  "message": f"unknown message type {kind!r}"})

    async def _command(self, ws: WebSocket, msg: dict) -> None:
        name = msg.get("name")
        if name == "start":
            self.start()
        elif name == "reset":
            await self.reset()
        elif name == "set_mode":
            if self.running or self.engine.clock.tick > 0:
                await self._send(ws, {"v": WIRE_VERSION, "type": "error",
                                      "message": "mode is fixed once a run starts"})
                return
            try:
                self.mode = ControlMode(msg.get("mode"))
            except ValueError:
                await self._send(ws, {"v": WIRE_VERSION, "type": "error",
                                      "message": f"unknown mode {msg.get('mode')!r}"})
                return
            self.engine = Engine(self.world, self.mode, self.conf.sim)
            await self._broadcast(self._world_message())
        else:
            await self._send(ws, {"v": WIRE_VERSION, "type": "error",
                                  "message": f"unknown command {name!r}"})

    # -- session control -------------------------------------------------------

    def submit_input(self, t: float, j: JoystickState) -> None:
        self._inputs.append((t, j))

    def start(self) -> None:
        if self.running or self.engine.done:
            return
        self.running = True
        self._task = asyncio.get_running_loop().create_task(self._loop())

    async def reset(self) -> None:
        self.running = False
        if self._task is not None:
            self._task.cancel()
            try:
                await self._task
            except asyncio.CancelledError:
                pass
            self._task = None
        self.engine = Engine(self.world, self.mode, self.conf.sim)
        self._inputs.clear()
        self._held_frames.clear()
        await self._broadcast(self._world_message())
        await self._broadcast(self._state_message())

    async def shutdown(self) -> None:
        self.running = False
        if self._task is not None:
            self._task.cancel()
            try:
                await self._task
            except asyncio.CancelledError:
                pass
            self._task = None

    # -- the session loop --------------------------------------------------------

    async def _loop(self) -> None:
        stride = self.conf.broadcast_stride
        fb_delay = self.conf.sim.feedback_latency
        engine = self.engine
        wall_origin = time.perf_counter() - engine.clock.time
        while self.running and not engine.done:
            now = engine.clock.time
            while self._inputs and self._inputs[0][0] <= now + TIME_EPS:
                t, j = self._inputs.popleft()
                engine.push_input(t, j)
            engine.tick()
            if engine.clock.tick % stride == 0 or engine.done:
                self._held_frames.append((engine.clock.time + fb_delay, self._state_message()))
            while self._held_frames and self._held_frames[0][0] <= engine.clock.time + TIME_EPS:
                await self._broadcast(self._held_frames.popleft()[1])
            if self.conf.realtime:
                lag = wall_origin + engine.clock.time - time.perf_counter()
                await asyncio.sleep(lag if lag > 0 else 0)
            elif engine.clock.tick % 20 == 0:
                await asyncio.sleep(0)
        while self._held_frames:
            await self._broadcast(self._held_frames.popleft()[1])
        if engine.done:
            await self._broadcast(self._metrics_message())
        self.running = False

    # -- socket plumbing -----------------------------------------------------------

    async def _send(self, ws: WebSocket, payload: dict) -> None:
        try:
            await ws.send_text(json.dumps(payload))
        except Exception:
            if ws in self._sockets:
                self._sockets.remove(ws)

    async def _broadcast(self, payload: dict) -> None:
        text = json.dumps(payload)
        for ws in list(self._sockets):
            try:
                await ws.send_text(text)
            except Exception:
                if ws in self._sockets:
                    self._sockets.remove(ws)
                if ws is self._driver:
                    self._driver = None


def create_app(world: WorldModel, conf: SessionConfig) -> FastAPI:
    """FastAPI app exposing the session at /ws; session state on app.state."""

    session = Session(world, conf)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if conf.autostart:
            session.start()
        yield
        await session.shutdown()

    app = FastAPI(lifespan=lifespan)
    app.state.session = session

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket) -> None:
        await session.handle(ws)

    return app


def serve(world: WorldModel, conf: SessionConfig, host: str = "127.0.0.1",
          port: int = 8765) -> None:
    """Blocking entry point used by the CLI."""
    import uvicorn

    uvicorn.run(create_app(world, conf), host=host, port=port, log_level="warning")
