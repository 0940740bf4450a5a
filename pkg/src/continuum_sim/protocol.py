"""Wire protocol for teleoperation sessions.

JSON text messages over a persistent bidirectional stream (WebSocket
frames provide the length delimiting). Every inbound message yields
exactly one typed response except cmd_velocity, which is fire-and-forget
at command rate. The hello handshake carries the protocol version.
"""
from __future__ import annotations

import json
from typing import List, Literal, Union

from pydantic import BaseModel, Field, TypeAdapter, ValidationError

PROTOCOL_VERSION = 1


class HelloMsg(BaseModel):
    type: Literal["hello"]
    version: int = PROTOCOL_VERSION


class AcquireOperatorMsg(BaseModel):
    type: Literal["acquire_operator"]


class ReleaseOperatorMsg(BaseModel):
    type: Literal["release_operator"]


class CmdVelocityMsg(BaseModel):
    """Configuration-space rates, (kappa, phi, s) per section. Fire-and-forget."""

    type: Literal["cmd_velocity"]
    cdot: List[float] = Field(min_length=9, max_length=9)


class CmdGripperMsg(BaseModel):
    type: Literal["cmd_gripper"]
    a: bool
    b: bool
    c: bool
    zone: Literal["I", "II", "III"]
    d_closed: bool = True


class CmdBallscrewMsg(BaseModel):
    type: Literal["cmd_ballscrew"]
    velocity: float


class CalibrateMsg(BaseModel):
    type: Literal["calibrate"]


ClientMessage = Union[
    HelloMsg,
    AcquireOperatorMsg,
    ReleaseOperatorMsg,
    CmdVelocityMsg,
    CmdGripperMsg,
    CmdBallscrewMsg,
    CalibrateMsg,
]

_client_adapter: TypeAdapter = TypeAdapter(ClientMessage)


class ProtocolError(Exception):
    """Raised for malformed or unknown inbound messages."""


def parse_client_message(text: str) -> ClientMessage:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"not valid JSON: {exc}") from exc
    try:
        return _client_adapter.validate_python(data)
    except ValidationError as exc:
        raise ProtocolError(f"invalid message: {exc.errors()[0].get('msg', 'bad fields')}") from exc


# server -> client


class HelloReply(BaseModel):
    type: Literal["hello"] = "hello"
    version: int = PROTOCOL_VERSION
    session_id: str
    operator_held: bool


class RoleReply(BaseModel):
    type: Literal["role_granted", "role_denied", "role_released"]


class AckReply(BaseModel):
    type: Literal["ack"] = "ack"
    command: str


class ErrorReply(BaseModel):
    type: Literal["error"] = "error"
    error: str  # bad_command | role_required | invalid_gripper | sim_fault
    message: str


class SnapshotMsg(BaseModel):
    type: Literal["snapshot"] = "snapshot"
    record: dict


ServerMessage = Union[HelloReply, RoleReply, AckReply, ErrorReply, SnapshotMsg]


def encode(msg: BaseModel) -> str:
    return msg.model_dump_json()
