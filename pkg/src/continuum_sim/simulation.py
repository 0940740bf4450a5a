"""The authoritative simulation loop state.

One SimulationSession owns the plant and controller. Commands are latched
with expiry times in simulated time: the last velocity command applies
until replaced or its watchdog expires, the dead-man behaviour for
dropped clients. Gripper changes are only accepted while the ballscrew
is stationary.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .config import AppConfig
from .controller import ConfigVelocity, ControllerState, control_step
from .errors import ControlFault, InvalidGripperCombination, StepRejected
from .plant import (
    GripperState,
    PlantState,
    TubeStatus,
    apply_gripper_command,
    calibrate,
    step,
)
from .telemetry import TelemetryRecord, make_record


@dataclass
class SimulationSession:
    cfg: AppConfig
    plant: PlantState = field(init=False)
    cstate: ControllerState = field(init=False)
    cdot: np.ndarray = field(init=False)
    cdot_expiry: float = field(init=False, default=-1.0)
    ballscrew_vel: float = field(init=False, default=0.0)
    ballscrew_expiry: float = field(init=False, default=-1.0)
    tick_index: int = field(init=False, default=0)
    last_record: Optional[TelemetryRecord] = field(init=False, default=None)

    def __post_init__(self):
        self.gains = self.cfg.controller_gains()
        self.plant = self.cfg.initial_plant()
        self.cstate = ControllerState.zeroed()
        self.cdot = np.zeros(9)

    @property
    def time(self) -> float:
        return self.plant.time

    @property
    def dt(self) -> float:
        return self.cfg.dt

    def set_velocity(self, cdot, expires_at: float) -> None:
        self.cdot = np.asarray(cdot, dtype=float).reshape(9)
        self.cdot_expiry = expires_at

    def set_ballscrew(self, velocity: float, expires_at: float) -> None:
        self.ballscrew_vel = float(velocity)
        self.ballscrew_expiry = expires_at

    def request_gripper(self, cmd: GripperState) -> None:
        """Switch actuation row; requires a stationary ballscrew."""
        if self._active_ballscrew() != 0.0:
            raise InvalidGripperCombination(
                "gripper changes require zero ballscrew velocity"
            )
        self.plant = apply_gripper_command(self.plant, cmd)

    def request_calibrate(self) -> None:
        self.plant, _ = calibrate(self.plant)
        self.cstate = ControllerState.zeroed()
        self.cdot = np.zeros(9)
        self.cdot_expiry = -1.0
        self.ballscrew_vel = 0.0
        self.ballscrew_expiry = -1.0

    def _active_ballscrew(self) -> float:
        if self.time >= self.ballscrew_expiry:
            return 0.0
        return self.ballscrew_vel

    def _effective_cdot(self, ballscrew_vel: float) -> np.ndarray:
        """Commanded velocity after the watchdog and tube-consistency rules.

        The controllable tube's arc rate is authoritative from the
        ballscrew; fixed tubes cannot change length, so their arc rate is
        zeroed. Movable tubes may be driven through the tendons.
        """
        cdot = self.cdot.copy() if self.time < self.cdot_expiry else np.zeros(9)
        statuses = self.plant.grippers.tube_statuses()
        for idx, status in enumerate(statuses):
            if status is TubeStatus.CONTROLLABLE:
                cdot[3 * idx + 2] = ballscrew_vel
            elif status is TubeStatus.FIXED:
                cdot[3 * idx + 2] = 0.0
        return cdot

    def tick(self) -> TelemetryRecord:
        """Advance one control + plant step and return the telemetry record."""
        ballscrew_vel = self._active_ballscrew()
        cdot = self._effective_cdot(ballscrew_vel)
        extra: List[str] = []
        try:
            spool_vel, next_cstate = control_step(
                ConfigVelocity(cdot), self.plant, self.gains, self.cstate, self.dt
            )
            self.cstate = next_cstate
        except ControlFault as exc:
            spool_vel = np.zeros(9)
            extra.append(f"control_fault:{exc}")
        rejected = False
        try:
            self.plant = step(self.plant, spool_vel, ballscrew_vel, self.dt)
        except StepRejected as exc:
            # state rolls back whole; drop the latched commands so the
            # next tick is a clean zero-velocity step
            rejected = True
            extra.append(f"step_rejected:{exc}")
            self.cdot = np.zeros(9)
            self.ballscrew_vel = 0.0
        self.tick_index += 1
        self.last_record = make_record(
            self.plant,
            spool_vel,
            polyline_samples=self.cfg.protocol.polyline_samples,
            extra_events=tuple(extra),
            rejected=rejected,
        )
        return self.last_record
