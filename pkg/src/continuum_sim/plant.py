"""Quasi-static simulated manipulator.

The plant owns the authoritative configuration. Each step integrates the
spool free lengths, moves the section lengths held by the push-pull
mechanism, and resolves the bending of every section from its governing
tendon group:

* the bend plane and total bend angle always follow the group's length
  differences (the decoupling forward map),
* the arc length follows the group's mean length when the tube is free
  to slide axially, and is pinned by the tube otherwise,
* a slack tendon (free length above the required path) reads zero
  tension; the closed-loop controller exists to remove the slack.

Tendons are linear springs; tension is stiffness times the stretch
between required path length and spool free length. Pretension is held
by keeping spools short of the path by the reference stretch.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import List, Tuple

import numpy as np

from .errors import DomainError, InvalidGripperCombination, InvalidInput, StepRejected
from .geometry import EPS_STRAIGHT, SectionConfig, TendonLengths
from .kinematics import forward_section
from .multisection import (
    ActuatorLengths,
    CouplingDecomposition,
    ManipulatorConfig,
    ManipulatorGeometry,
    passive_triplet,
    compose_actuator,
    validate_limits,
)

# largest accepted integration step (s)
DT_MAX = 0.010

# clamp events below this excess are float noise, not motion
_CLAMP_EPS = 1e-9


class TubeStatus(enum.Enum):
    FIXED = "fixed"
    MOVABLE = "movable"
    CONTROLLABLE = "controllable"


class GripperZone(str, enum.Enum):
    I = "I"
    II = "II"
    III = "III"


# zone k of the ballscrew gripper grabs tube k (inner/middle/outer)
_ZONE_TO_TUBE = {GripperZone.I: 0, GripperZone.II: 1, GripperZone.III: 2}


@dataclass(frozen=True)
class GripperState:
    """Pneumatic gripper tuple plus the ballscrew position.

    a, b, c are True when the fixed gripper for tube 1/2/3 is open.
    d_zone is the ballscrew gripper's area; d_closed whether it grips.
    """

    a: bool
    b: bool
    c: bool
    d_zone: GripperZone
    d_closed: bool
    ballscrew_pos: float = 0.0

    def command_tuple(self) -> Tuple[bool, bool, bool, GripperZone, bool]:
        return (self.a, self.b, self.c, self.d_zone, self.d_closed)

    def tube_statuses(self) -> Tuple[TubeStatus, TubeStatus, TubeStatus]:
        """Tube status per the backbone actuation table.

        A tube is Fixed while its own gripper is closed; Controllable
        while the closed ballscrew gripper holds it; Movable otherwise
        (free to slide axially, e.g. dragged by the tendons).
        """
        open_flags = (self.a, self.b, self.c)
        held = _ZONE_TO_TUBE[self.d_zone] if self.d_closed else None
        out = []
        for tube, is_open in enumerate(open_flags):
            if not is_open:
                out.append(TubeStatus.FIXED)
            elif held == tube:
                out.append(TubeStatus.CONTROLLABLE)
            else:
                out.append(TubeStatus.MOVABLE)
        return tuple(out)


# the valid command rows: three push-pull rows plus all-closed in any zone
_VALID_COMMANDS = frozenset(
    [
        (True, True, True, GripperZone.I, True),
        (False, True, True, GripperZone.II, True),
        (False, False, True, GripperZone.III, True),
        (False, False, False, GripperZone.I, True),
        (False, False, False, GripperZone.II, True),
        (False, False, False, GripperZone.III, True),
    ]
)


def is_valid_gripper_command(a: bool, b: bool, c: bool, zone: GripperZone, d_closed: bool) -> bool:
    return (a, b, c, zone, d_closed) in _VALID_COMMANDS


def calibration_grippers() -> GripperState:
    """All grippers open: every tube free to slide (calibration posture)."""
    return GripperState(a=True, b=True, c=True, d_zone=GripperZone.I, d_closed=False)


@dataclass(frozen=True)
class TendonPlant:
    """Spool state and the elastic tendon model.

    stiffness_ref is the measured tension per unit stretch (N/mm) of a
    tendon of length_ref mm; stiffness scales inversely with length.
    """

    spool_pos: np.ndarray
    stiffness_ref: float
    length_ref: float
    pretension_ref: float
    tensions: np.ndarray
    tension_baseline: float = 0.0
    saturation: float = 65.0

    def __post_init__(self):
        object.__setattr__(self, "spool_pos", np.asarray(self.spool_pos, dtype=float).reshape(9))
        object.__setattr__(self, "tensions", np.asarray(self.tensions, dtype=float).reshape(9))

    def stiffness_at(self, length) -> np.ndarray:
        """Spring constant (N/mm) of a tendon with the given length (mm)."""
        return self.stiffness_ref * self.length_ref / np.asarray(length, dtype=float)

    def elastic_tension(self, length: float, stretch: float) -> float:
        """Tension of one tendon of `length` mm stretched by `stretch` mm."""
        return float(self.stiffness_at(length)) * max(0.0, stretch) + self.tension_baseline


@dataclass(frozen=True)
class PlantState:
    """Immutable snapshot of the simulated manipulator."""

    config: ManipulatorConfig
    actuator: ActuatorLengths  # required path lengths, compose_actuator(config)
    decomposition: CouplingDecomposition
    tendon: TendonPlant
    grippers: GripperState
    geoms: ManipulatorGeometry
    time: float = 0.0
    events: Tuple[str, ...] = ()

    @property
    def clamped(self) -> bool:
        return any(e.startswith("clamped") for e in self.events)

    @property
    def saturated(self) -> bool:
        return any(e.startswith("tension_saturated") for e in self.events)


def apply_gripper_command(state: PlantState, cmd: GripperState) -> PlantState:
    """Switch the backbone actuation row; invalid tuples leave the state unchanged."""
    if not is_valid_gripper_command(cmd.a, cmd.b, cmd.c, cmd.d_zone, cmd.d_closed):
        raise InvalidGripperCombination(
            f"gripper tuple (a={cmd.a}, b={cmd.b}, c={cmd.c}, "
            f"zone={cmd.d_zone.value}, d_closed={cmd.d_closed}) is not a valid row"
        )
    new_grippers = replace(cmd, ballscrew_pos=state.grippers.ballscrew_pos)
    # a released tube may spring to its tendon equilibrium on the next step
    return replace(state, grippers=new_grippers, events=("gripper_changed",))


def _tension_vector(
    tendon: TendonPlant, required: np.ndarray, spool: np.ndarray, events: List[str]
) -> np.ndarray:
    stretch = np.maximum(0.0, required - spool)
    raw = tendon.stiffness_at(required) * stretch + tendon.tension_baseline
    over = raw > tendon.saturation
    if np.any(over):
        events.append(
            "tension_saturated:" + ",".join(str(i + 1) for i in np.flatnonzero(over))
        )
    return np.minimum(raw, tendon.saturation)


def tendon_tensions(state: PlantState) -> np.ndarray:
    """Current tendon tensions (N), saturated at the rated maximum."""
    events: List[str] = []
    return _tension_vector(state.tendon, state.actuator.lengths, state.tendon.spool_pos, events)


def _reference_strain(tendon: TendonPlant) -> float:
    """Tendon strain at the reference tension.

    The linear spring with length-inverse stiffness stretches by
    F*L/(k_ref*L_ref) under force F, i.e. a length-free strain. Loaded
    length follows as free_length / (1 - strain).
    """
    strain = tendon.pretension_ref / (tendon.stiffness_ref * tendon.length_ref)
    if not (0.0 <= strain < 0.5):
        raise InvalidInput(f"reference strain {strain:.3f} out of range; check plant parameters")
    return strain


def _resolve_section(
    name: str,
    residual: np.ndarray,
    geom,
    status: TubeStatus,
    s_tube: float,
    events: List[str],
) -> SectionConfig:
    """One section's configuration from its residual tendon triple.

    The tendon differences fix the bend plane and total bend angle. A
    movable tube also takes its arc length from the tendon mean; a fixed
    or controllable tube keeps the mechanism-imposed length and the bend
    angle is spread over it.
    """
    tendon_cfg = forward_section(TendonLengths.from_array(residual), geom)
    theta = tendon_cfg.bend_angle
    if status is TubeStatus.MOVABLE:
        s = tendon_cfg.s
        if s < geom.s_min:
            if geom.s_min - s > _CLAMP_EPS:
                events.append(f"clamped:{name}.s_min")
            s = geom.s_min
        elif s > geom.s_max:
            if s - geom.s_max > _CLAMP_EPS:
                events.append(f"clamped:{name}.s_max")
            s = geom.s_max
    else:
        s = s_tube
    kappa = theta / s
    phi = tendon_cfg.phi
    if theta > geom.theta_max:
        if theta - geom.theta_max > _CLAMP_EPS:
            events.append(f"clamped:{name}.bend")
        kappa = geom.theta_max / s
        while kappa * s > geom.theta_max:  # keep the product under the bound exactly
            kappa = math.nextafter(kappa, 0.0)
    if kappa > geom.kappa_max:
        if kappa - geom.kappa_max > _CLAMP_EPS:
            events.append(f"clamped:{name}.kappa")
        kappa = geom.kappa_max
    if kappa < EPS_STRAIGHT:
        kappa, phi = 0.0, 0.0
    return SectionConfig(kappa=kappa, phi=phi, s=s)


def _resolve_configuration(
    effective: np.ndarray,
    statuses: Tuple[TubeStatus, TubeStatus, TubeStatus],
    s_tube: List[float],
    geoms: ManipulatorGeometry,
    events: List[str],
) -> Tuple[ManipulatorConfig, ActuatorLengths, CouplingDecomposition]:
    """Resolve the full configuration from nine loaded tendon lengths."""
    inner = _resolve_section(
        "inner", effective[6:9], geoms.inner, statuses[0], s_tube[0], events
    )
    passive_b = passive_triplet(inner, geoms.inner, 1)
    passive_a_in = passive_triplet(inner, geoms.inner, 2)
    middle = _resolve_section(
        "middle", effective[3:6] - passive_b, geoms.middle, statuses[1], s_tube[1], events
    )
    passive_a_mid = passive_triplet(middle, geoms.middle, 1)
    outer = _resolve_section(
        "outer",
        effective[0:3] - passive_a_in - passive_a_mid,
        geoms.outer,
        statuses[2],
        s_tube[2],
        events,
    )
    config = ManipulatorConfig(inner, middle, outer).canonical()
    actuator, decomposition = compose_actuator(config, geoms)
    return config, actuator, decomposition


def step(
    state: PlantState,
    spool_vel: np.ndarray,
    ballscrew_vel: float,
    dt: float,
) -> PlantState:
    """Advance the plant by one quasi-static tick."""
    if not (0.0 < dt <= DT_MAX):
        raise InvalidInput(f"dt must be in (0, {DT_MAX}], got {dt}")
    spool_vel = np.asarray(spool_vel, dtype=float).reshape(9)
    events: List[str] = []
    geoms = state.geoms
    statuses = state.grippers.tube_statuses()

    spool = state.tendon.spool_pos + spool_vel * dt

    # push-pull: only the controllable tube is driven by the ballscrew
    s_tube = [c.s for c in state.config.sections()]
    for idx, (status, geom) in enumerate(zip(statuses, geoms.sections())):
        if status is TubeStatus.CONTROLLABLE and ballscrew_vel != 0.0:
            moved = s_tube[idx] + ballscrew_vel * dt
            clamped = min(max(moved, geom.s_min), geom.s_max)
            if abs(clamped - moved) > _CLAMP_EPS:
                events.append(f"clamped:{('inner', 'middle', 'outer')[idx]}.push_pull")
            s_tube[idx] = clamped
    grippers = replace(
        state.grippers, ballscrew_pos=state.grippers.ballscrew_pos + ballscrew_vel * dt
    )

    # geometry follows the loaded lengths (free length at reference
    # strain); slackness surfaces in the tension floor, not here
    effective = spool / (1.0 - _reference_strain(state.tendon))

    if (
        np.array_equal(spool, state.tendon.spool_pos)
        and s_tube == [c.s for c in state.config.sections()]
        and "gripper_changed" not in state.events
    ):
        # exact fixed point: nothing moved, keep state bit-identical
        config = state.config
        actuator, decomposition = state.actuator, state.decomposition
        tensions = state.tendon.tensions
    else:
        try:
            config, actuator, decomposition = _resolve_configuration(
                effective, statuses, s_tube, geoms, events
            )
        except (InvalidInput, DomainError) as exc:
            raise StepRejected(f"configuration resolution failed: {exc}") from exc
        tensions = _tension_vector(state.tendon, actuator.lengths, spool, events)
    tendon = replace(state.tendon, spool_pos=spool, tensions=tensions)

    for record in validate_limits(config, geoms):
        events.append(f"limit_violation:{record.section}.{record.parameter}")

    return PlantState(
        config=config,
        actuator=actuator,
        decomposition=decomposition,
        tendon=tendon,
        grippers=grippers,
        geoms=geoms,
        time=state.time + dt,
        events=tuple(events),
    )


def calibrate(state: PlantState) -> Tuple[PlantState, ActuatorLengths]:
    """Reset to the initial posture: straight, shortest, at reference tension.

    All grippers open, every section at its minimum arc length with zero
    curvature, spools short of the required path by the reference
    stretch. Returns the actuator lengths of this kinematic zero.
    """
    geoms = state.geoms
    nominal = ManipulatorConfig(
        SectionConfig(0.0, 0.0, geoms.inner.s_min),
        SectionConfig(0.0, 0.0, geoms.middle.s_min),
        SectionConfig(0.0, 0.0, geoms.outer.s_min),
    )
    required, _ = compose_actuator(nominal, geoms)
    strain = _reference_strain(state.tendon)
    spool = required.lengths * (1.0 - strain)

    # settle through the shared resolution so the stored state is the
    # exact fixed point of subsequent zero-velocity steps
    grippers = calibration_grippers()
    events: List[str] = []
    config, actuator, decomposition = _resolve_configuration(
        spool / (1.0 - strain),
        grippers.tube_statuses(),
        [c.s for c in nominal.sections()],
        geoms,
        events,
    )
    # spools sit exactly the reference strain short of the path: by
    # definition of the calibrated equilibrium, tension reads F_ref
    tensions = np.full(9, min(state.tendon.pretension_ref, state.tendon.saturation))
    tendon = replace(state.tendon, spool_pos=spool, tensions=tensions)
    new_state = PlantState(
        config=config,
        actuator=actuator,
        decomposition=decomposition,
        tendon=tendon,
        grippers=grippers,
        geoms=geoms,
        time=state.time,
        events=("calibrated",),
    )
    return new_state, actuator


def initial_state(
    geoms: ManipulatorGeometry,
    stiffness_ref: float,
    length_ref: float,
    pretension_ref: float,
    tension_baseline: float = 0.0,
    saturation: float = 65.0,
) -> PlantState:
    """A freshly calibrated plant."""
    tendon = TendonPlant(
        spool_pos=np.zeros(9),
        stiffness_ref=stiffness_ref,
        length_ref=length_ref,
        pretension_ref=pretension_ref,
        tensions=np.zeros(9),
        tension_baseline=tension_baseline,
        saturation=saturation,
    )
    config = ManipulatorConfig(
        SectionConfig(0.0, 0.0, geoms.inner.s_min),
        SectionConfig(0.0, 0.0, geoms.middle.s_min),
        SectionConfig(0.0, 0.0, geoms.outer.s_min),
    )
    actuator, decomposition = compose_actuator(config, geoms)
    seed = PlantState(
        config=config,
        actuator=actuator,
        decomposition=decomposition,
        tendon=tendon,
        grippers=calibration_grippers(),
        geoms=geoms,
    )
    calibrated, _ = calibrate(seed)
    return calibrated
