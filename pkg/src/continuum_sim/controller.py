"""Decoupled velocity control with tension-error compensation.

Each call maps a desired configuration-space velocity through the 9x9
inverse Jacobian of the decoupled kinematics and adds a PID term on the
tendon tension error, keeping tendons taut without a friction model.
Positive tension error (over-taut) lengthens the spool.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ControlFault, DomainError, InvalidInput
from .geometry import EPS_STRAIGHT
from .multisection import forward_decouple, jacobian_inverse
from .plant import PlantState


@dataclass(frozen=True)
class ControllerGains:
    """PID gains, reference tensions and safety bounds."""

    kp: np.ndarray
    ki: np.ndarray
    kd: np.ndarray
    f_ref: np.ndarray
    integral_clamp: float = 20.0
    velocity_clamp: float = 50.0
    derivative_tau: float = 0.05
    strict_limits: bool = False

    def __post_init__(self):
        for field in ("kp", "ki", "kd", "f_ref"):
            arr = np.broadcast_to(np.asarray(getattr(self, field), dtype=float), (9,)).copy()
            object.__setattr__(self, field, arr)
        if self.integral_clamp <= 0.0:
            raise InvalidInput("integral_clamp must be positive")


def default_gains(f_ref: float = 5.0) -> ControllerGains:
    return ControllerGains(kp=0.5, ki=0.1, kd=0.01, f_ref=f_ref)


@dataclass(frozen=True)
class ControllerState:
    """Integral and filtered derivative of the tension error."""

    f_i: np.ndarray
    f_d: np.ndarray
    last_error: np.ndarray

    def __post_init__(self):
        for field in ("f_i", "f_d", "last_error"):
            object.__setattr__(
                self, field, np.asarray(getattr(self, field), dtype=float).reshape(9)
            )

    @staticmethod
    def zeroed() -> "ControllerState":
        return ControllerState(np.zeros(9), np.zeros(9), np.zeros(9))


@dataclass(frozen=True)
class ConfigVelocity:
    """Desired configuration-space rates, (kappa_dot, phi_dot, s_dot) per section."""

    cdot: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "cdot", np.asarray(self.cdot, dtype=float).reshape(9))

    @staticmethod
    def zero() -> "ConfigVelocity":
        return ConfigVelocity(np.zeros(9))


def _guard_limits(cdot: np.ndarray, config, geoms) -> tuple[np.ndarray, bool]:
    """Zero velocity components that would push a section past its limits."""
    out = cdot.copy()
    guarded = False
    for i, (section, geom) in enumerate(zip(config.sections(), geoms.sections())):
        ik, ip, is_ = 3 * i, 3 * i + 1, 3 * i + 2
        if section.s >= geom.s_max and out[is_] > 0.0:
            out[is_] = 0.0
            guarded = True
        if section.s <= geom.s_min and out[is_] < 0.0:
            out[is_] = 0.0
            guarded = True
        if section.kappa < EPS_STRAIGHT and out[ik] < 0.0:
            # curvature is non-negative; bending the other way is a phi change
            out[ik] = 0.0
            guarded = True
        if section.kappa >= geom.kappa_max and out[ik] > 0.0:
            out[ik] = 0.0
            guarded = True
        if section.bend_angle >= geom.theta_max:
            if out[ik] > 0.0:
                out[ik] = 0.0
                guarded = True
            if section.kappa * out[is_] + out[ik] * section.s > 0.0:
                out[is_] = 0.0
                guarded = True
    return out, guarded


def control_step(
    cmd: ConfigVelocity,
    snapshot: PlantState,
    gains: ControllerGains,
    cstate: ControllerState,
    dt: float,
) -> tuple[np.ndarray, ControllerState]:
    """One control tick: returns spool velocities (mm/s) and the next PID state."""
    if dt <= 0.0:
        raise InvalidInput(f"dt must be positive, got {dt}")
    try:
        config, _ = forward_decouple(snapshot.actuator, snapshot.geoms)
    except DomainError as exc:
        raise ControlFault(f"cannot recover configuration from reported lengths: {exc}") from exc

    cdot, guarded = _guard_limits(cmd.cdot, config, snapshot.geoms)
    if gains.strict_limits and guarded:
        # strict mode halts motion instead of trimming the command
        cdot = np.zeros(9)

    vel_ik = jacobian_inverse(config, snapshot.geoms) @ cdot

    # act on the reported (measured) tensions carried by the snapshot
    error = snapshot.tendon.tensions - gains.f_ref
    vel_pid = gains.kp * error + gains.ki * cstate.f_i + gains.kd * cstate.f_d
    out = vel_ik + vel_pid

    peak = float(np.abs(out).max())
    if peak > gains.velocity_clamp:
        out = out * (gains.velocity_clamp / peak)

    f_i = np.clip(cstate.f_i + error * dt, -gains.integral_clamp, gains.integral_clamp)
    alpha = gains.derivative_tau / (gains.derivative_tau + dt)
    f_d = alpha * cstate.f_d + (1.0 - alpha) * (error - cstate.last_error) / dt
    return out, ControllerState(f_i=f_i, f_d=f_d, last_error=error)


def constant_force_mode(
    snapshot: PlantState,
    gains: ControllerGains,
    cstate: ControllerState,
    dt: float,
) -> tuple[np.ndarray, ControllerState]:
    """Tension regulation only: control_step with zero commanded velocity."""
    return control_step(ConfigVelocity.zero(), snapshot, gains, cstate, dt)
