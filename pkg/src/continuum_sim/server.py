"""Streaming teleoperation gateway.

One asyncio task owns the simulation session and ticks it at the
configured rate; WebSocket handlers only parse messages, manage the
single operator role and latch commands. Snapshots fan out through
latest-value mailboxes: a slow observer drops frames, it never stalls
the simulation.
"""
from __future__ import annotations

import asyncio
import contextlib
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .config import AppConfig, load_config
from .errors import InvalidGripperCombination
from .plant import GripperState, GripperZone
from .protocol import (
    AckReply,
    CalibrateMsg,
    ClientMessage,
    CmdBallscrewMsg,
    CmdGripperMsg,
    CmdVelocityMsg,
    ErrorReply,
    HelloMsg,
    HelloReply,
    ProtocolError,
    RoleReply,
    SnapshotMsg,
    AcquireOperatorMsg,
    ReleaseOperatorMsg,
    encode,
    parse_client_message,
)
from .telemetry import record_to_dict

log = logging.getLogger("continuum_sim.server")


@dataclass
class ClientSession:
    session_id: str
    ws: WebSocket
    mailbox: asyncio.Queue = field(default_factory=lambda: asyncio.Queue(maxsize=1))

    def offer_snapshot(self, text: str) -> None:
        """Replace any undelivered snapshot; never blocks the caller."""
        if self.mailbox.full():
            with contextlib.suppress(asyncio.QueueEmpty):
                self.mailbox.get_nowait()
        with contextlib.suppress(asyncio.QueueFull):
            self.mailbox.put_nowait(text)


class GatewayHub:
    """Owns the simulation and the connected sessions."""

    def __init__(self, cfg: AppConfig):
        # import here keeps module import light for protocol-only consumers
        from .simulation import SimulationSession

        self.cfg = cfg
        self.session = SimulationSession(cfg)
        self.clients: Dict[str, ClientSession] = {}
        self.operator_id: Optional[str] = None
        self._ids = itertools.count(1)
        self._stop = asyncio.Event()

    def snapshot_text(self) -> Optional[str]:
        record = self.session.last_record
        if record is None:
            return None
        return encode(SnapshotMsg(record=record_to_dict(record)))

    async def run_loop(self) -> None:
        dt = self.cfg.dt
        every = max(1, round(self.cfg.protocol.tick_hz / self.cfg.protocol.broadcast_hz))
        loop = asyncio.get_running_loop()
        next_deadline = loop.time() + dt
        while not self._stop.is_set():
            try:
                self.session.tick()
            except Exception:  # the loop must survive any plant fault
                log.exception("tick failed; commands dropped, loop continues")
            if self.session.tick_index % every == 0:
                text = self.snapshot_text()
                if text is not None:
                    for client in self.clients.values():
                        client.offer_snapshot(text)
            delay = next_deadline - loop.time()
            next_deadline += dt
            if delay > 0:
                await asyncio.sleep(delay)
            else:
                # fell behind; resynchronize rather than bursting
                next_deadline = loop.time() + dt

    def stop(self) -> None:
        self._stop.set()

    # --- role management -------------------------------------------------

    def acquire_operator(self, session_id: str) -> bool:
        if self.operator_id is None or self.operator_id == session_id:
            self.operator_id = session_id
            return True
        return False

    def release_operator(self, session_id: str) -> None:
        if self.operator_id == session_id:
            self.operator_id = None
            self.session.set_velocity([0.0] * 9, expires_at=-1.0)
            self.session.set_ballscrew(0.0, expires_at=-1.0)

    def drop_client(self, session_id: str) -> None:
        self.clients.pop(session_id, None)
        self.release_operator(session_id)

    # --- message dispatch -------------------------------------------------

    def handle(self, client: ClientSession, msg: ClientMessage) -> Optional[str]:
        """Process one inbound message; returns the reply text, if any."""
        if isinstance(msg, HelloMsg):
            return encode(
                HelloReply(
                    session_id=client.session_id,
                    operator_held=self.operator_id is not None,
                )
            )
        if isinstance(msg, AcquireOperatorMsg):
            granted = self.acquire_operator(client.session_id)
            return encode(RoleReply(type="role_granted" if granted else "role_denied"))
        if isinstance(msg, ReleaseOperatorMsg):
            self.release_operator(client.session_id)
            return encode(RoleReply(type="role_released"))

        # everything below requires command authority
        if self.operator_id != client.session_id:
            log.info("rejected %s from non-operator %s", msg.type, client.session_id)
            return encode(
                ErrorReply(error="role_required", message="acquire the operator role first")
            )
        sim = self.session
        if isinstance(msg, CmdVelocityMsg):
            sim.set_velocity(msg.cdot, expires_at=sim.time + self.cfg.protocol.watchdog_s)
            return None  # fire-and-forget
        if isinstance(msg, CmdBallscrewMsg):
            sim.set_ballscrew(msg.velocity, expires_at=sim.time + self.cfg.protocol.watchdog_s)
            return encode(AckReply(command="cmd_ballscrew"))
        if isinstance(msg, CmdGripperMsg):
            cmd = GripperState(
                a=msg.a, b=msg.b, c=msg.c,
                d_zone=GripperZone(msg.zone), d_closed=msg.d_closed,
            )
            try:
                sim.request_gripper(cmd)
            except InvalidGripperCombination as exc:
                return encode(ErrorReply(error="invalid_gripper", message=str(exc)))
            return encode(AckReply(command="cmd_gripper"))
        if isinstance(msg, CalibrateMsg):
            sim.request_calibrate()
            return encode(AckReply(command="calibrate"))
        return encode(ErrorReply(error="bad_command", message=f"unhandled {msg.type}"))


async def _client_sender(client: ClientSession) -> None:
    while True:
        text = await client.mailbox.get()
        await client.ws.send_text(text)


def create_app(cfg: Optional[AppConfig] = None, config_path: Optional[str] = None) -> FastAPI:
    if cfg is None:
        cfg = load_config(config_path)

    import contextlib as _ctx

    @_ctx.asynccontextmanager
    async def lifespan(app: FastAPI):
        hub = GatewayHub(cfg)
        app.state.hub = hub
        task = asyncio.create_task(hub.run_loop())
        try:
            yield
        finally:
            hub.stop()
            task.cancel()
            with _ctx.suppress(asyncio.CancelledError):
                await task

    app = FastAPI(title="continuum-sim gateway", lifespan=lifespan)

    @app.get("/health")
    def health():
        hub: GatewayHub = app.state.hub
        return {
            "status": "ok",
            "time": hub.session.time,
            "tick": hub.session.tick_index,
            "clients": len(hub.clients),
            "operator_held": hub.operator_id is not None,
        }

    @app.get("/config")
    def get_config():
        return cfg.model_dump()

    @app.get("/snapshot")
    def snapshot():
        hub: GatewayHub = app.state.hub
        record = hub.session.last_record
        return record_to_dict(record) if record is not None else {}

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        hub: GatewayHub = app.state.hub
        await ws.accept()
        client = ClientSession(session_id=f"s{next(hub._ids)}", ws=ws)
        hub.clients[client.session_id] = client
        sender = asyncio.create_task(_client_sender(client))
        try:
            while True:
                text = await ws.receive_text()
                try:
                    msg = parse_client_message(text)
                except ProtocolError as exc:
                    await ws.send_text(encode(ErrorReply(error="bad_command", message=str(exc))))
                    continue
                reply = hub.handle(client, msg)
                if reply is not None:
                    await ws.send_text(reply)
        except WebSocketDisconnect:
            pass
        finally:
            sender.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await sender
            hub.drop_client(client.session_id)

    return app
