"""Nine-tendon, three-section coupling layer.

Tendon groups: A = (L1,L2,L3) actuates the distal section, B = (L4,L5,L6)
the middle, C = (L7,L8,L9) the proximal. A tendon that actuates a distal
section passes through every proximal section, adding passive length
there; the passive contribution is computed with the traversed section's
own geometry and a hole rotation of 40 deg per group step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .errors import DomainError, InvalidInput
from .geometry import GROUP_OFFSET, SectionConfig, SectionGeometry, TendonLengths
from .kinematics import forward_section, rotated_inverse, section_jacobian_inverse

SECTION_NAMES = ("inner", "middle", "outer")


@dataclass(frozen=True)
class ManipulatorConfig:
    """Full configuration: inner (proximal), middle, outer (distal) sections."""

    inner: SectionConfig
    middle: SectionConfig
    outer: SectionConfig

    def sections(self) -> Tuple[SectionConfig, SectionConfig, SectionConfig]:
        return (self.inner, self.middle, self.outer)

    def canonical(self) -> "ManipulatorConfig":
        return ManipulatorConfig(
            self.inner.canonical(), self.middle.canonical(), self.outer.canonical()
        )

    @property
    def total_length(self) -> float:
        """Sum of the three bending arc lengths (mm)."""
        return self.inner.s + self.middle.s + self.outer.s

    def as_vector(self) -> np.ndarray:
        """(kappa, phi, s) per section, stacked inner/middle/outer."""
        return np.array(
            [v for c in self.sections() for v in (c.kappa, c.phi, c.s)], dtype=float
        )

    @staticmethod
    def from_vector(vec) -> "ManipulatorConfig":
        v = np.asarray(vec, dtype=float).reshape(9)
        return ManipulatorConfig(
            SectionConfig(v[0], v[1], v[2]),
            SectionConfig(v[3], v[4], v[5]),
            SectionConfig(v[6], v[7], v[8]),
        )


@dataclass(frozen=True)
class ManipulatorGeometry:
    """Per-section structural constants, inner/middle/outer order."""

    inner: SectionGeometry
    middle: SectionGeometry
    outer: SectionGeometry
    total_min: float = 160.0
    total_max: float = 502.0

    def sections(self) -> Tuple[SectionGeometry, SectionGeometry, SectionGeometry]:
        return (self.inner, self.middle, self.outer)

    def validate(self) -> None:
        for geom in self.sections():
            geom.validate()
        if not (0.0 < self.total_min <= self.total_max):
            raise InvalidInput(
                f"need 0 < total_min <= total_max, got [{self.total_min}, {self.total_max}]"
            )


def default_geometry() -> ManipulatorGeometry:
    """Structure parameters of the reference manipulator.

    Section length ranges and bend capability follow the prototype data
    sheet: 38-162 mm / 75 deg (proximal), 44-158 mm / 75 deg (middle),
    78-182 mm / 85 deg (distal); disks are 3 mm tall with holes on a
    2.5 mm circle, 12 segments per section. kappa_max is the curvature
    at full bend and minimum length.
    """

    def make(s_min: float, s_max: float, theta_deg: float) -> SectionGeometry:
        theta = math.radians(theta_deg)
        return SectionGeometry(
            n=12, d=2.5, h=3.0, s_min=s_min, s_max=s_max,
            kappa_max=theta / s_min, theta_max=theta,
        )

    return ManipulatorGeometry(
        inner=make(38.0, 162.0, 75.0),
        middle=make(44.0, 158.0, 75.0),
        outer=make(78.0, 182.0, 85.0),
    )


@dataclass(frozen=True)
class ActuatorLengths:
    """The nine tendon free lengths L1..L9 (mm)."""

    lengths: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.lengths, dtype=float).reshape(9)
        object.__setattr__(self, "lengths", arr)

    @property
    def group_a(self) -> np.ndarray:
        return self.lengths[0:3]

    @property
    def group_b(self) -> np.ndarray:
        return self.lengths[3:6]

    @property
    def group_c(self) -> np.ndarray:
        return self.lengths[6:9]

    def validate(self, geoms: ManipulatorGeometry) -> None:
        if not np.all(np.isfinite(self.lengths)) or np.any(self.lengths <= 0.0):
            raise InvalidInput("tendon lengths must be positive and finite")
        run_in = geoms.inner.disk_run
        run_mid = geoms.middle.disk_run
        run_out = geoms.outer.disk_run
        if np.any(self.group_c <= run_in):
            raise InvalidInput("group C lengths must clear the proximal disk passages")
        if np.any(self.group_b <= run_in + run_mid):
            raise InvalidInput("group B lengths must clear proximal+middle disk passages")
        if np.any(self.group_a <= run_in + run_mid + run_out):
            raise InvalidInput("group A lengths must clear all disk passages")


@dataclass(frozen=True)
class CouplingDecomposition:
    """Per-group, per-section partial lengths (mm).

    partial[g][s] is the length of group g's tendons inside section s,
    g in (A, B, C) = rows, s in (inner, middle, outer) = columns. Blocks
    for sections a group does not reach are exactly zero.
    """

    partial: np.ndarray  # shape (3, 3, 3): group, section, tendon

    def __post_init__(self):
        arr = np.asarray(self.partial, dtype=float).reshape(3, 3, 3)
        object.__setattr__(self, "partial", arr)

    def totals(self) -> np.ndarray:
        """Sum over sections, back to the 9-vector (A then B then C)."""
        return self.partial.sum(axis=1).reshape(9)


def passive_triplet(config: SectionConfig, geom: SectionGeometry, steps: int) -> np.ndarray:
    """Length of a downstream group's tendons through one traversed section.

    steps is how many group positions separate the tendons from the
    section's own group: 1 -> 40 deg, 2 -> 80 deg.
    """
    return rotated_inverse(config, geom, steps * GROUP_OFFSET).as_array()


def compose_actuator(
    config: ManipulatorConfig, geoms: ManipulatorGeometry
) -> Tuple[ActuatorLengths, CouplingDecomposition]:
    """Configuration -> nine tendon free lengths, with the per-section split."""
    partial = np.zeros((3, 3, 3))
    # group C: proximal section only
    partial[2, 0] = rotated_inverse(config.inner, geoms.inner, 0.0).as_array()
    # group B: own length in the middle section plus passive run through the proximal
    partial[1, 0] = passive_triplet(config.inner, geoms.inner, 1)
    partial[1, 1] = rotated_inverse(config.middle, geoms.middle, 0.0).as_array()
    # group A: passive through proximal (80 deg) and middle (40 deg), own in distal
    partial[0, 0] = passive_triplet(config.inner, geoms.inner, 2)
    partial[0, 1] = passive_triplet(config.middle, geoms.middle, 1)
    partial[0, 2] = rotated_inverse(config.outer, geoms.outer, 0.0).as_array()
    decomp = CouplingDecomposition(partial)
    return ActuatorLengths(decomp.totals()), decomp


def forward_decouple(
    actuator: ActuatorLengths, geoms: ManipulatorGeometry
) -> Tuple[ManipulatorConfig, CouplingDecomposition]:
    """Nine tendon lengths -> configuration, subtracting coupled passive runs.

    The proximal section is recovered from group C alone; its passive
    contributions to groups B and A are then removed before recovering
    the middle and distal sections. Raises DomainError when a residual
    triple is not realizable (inconsistent lengths, e.g. a slack or
    broken tendon upstream).
    """
    partial = np.zeros((3, 3, 3))
    try:
        inner = forward_section(TendonLengths.from_array(actuator.group_c), geoms.inner)
        partial[2, 0] = actuator.group_c
        partial[1, 0] = passive_triplet(inner, geoms.inner, 1)
        partial[0, 0] = passive_triplet(inner, geoms.inner, 2)

        residual_b = actuator.group_b - partial[1, 0]
        middle = forward_section(TendonLengths.from_array(residual_b), geoms.middle)
        partial[1, 1] = residual_b
        partial[0, 1] = passive_triplet(middle, geoms.middle, 1)

        residual_a = actuator.group_a - partial[0, 0] - partial[0, 1]
        outer = forward_section(TendonLengths.from_array(residual_a), geoms.outer)
        partial[0, 2] = residual_a
    except InvalidInput as exc:
        raise DomainError(f"actuator lengths are not realizable: {exc}") from exc
    return ManipulatorConfig(inner, middle, outer), CouplingDecomposition(partial)


def jacobian_inverse(config: ManipulatorConfig, geoms: ManipulatorGeometry) -> np.ndarray:
    """9x9 inverse Jacobian dL/dC, rows (A,B,C), columns (C_in, C_mid, C_out).

    Block anti-triangular: a section's configuration rate never moves the
    tendon groups of sections proximal to it, so the three blocks
    (B, C_out), (C, C_mid) and (C, C_out) are exactly zero.
    """
    jac = np.zeros((9, 9))
    j_in = section_jacobian_inverse(config.inner, geoms.inner, 0.0)
    g2_in = section_jacobian_inverse(config.inner, geoms.inner, GROUP_OFFSET)
    g1_in = section_jacobian_inverse(config.inner, geoms.inner, 2.0 * GROUP_OFFSET)
    j_mid = section_jacobian_inverse(config.middle, geoms.middle, 0.0)
    g2_mid = section_jacobian_inverse(config.middle, geoms.middle, GROUP_OFFSET)
    j_out = section_jacobian_inverse(config.outer, geoms.outer, 0.0)

    jac[0:3, 0:3] = g1_in
    jac[0:3, 3:6] = g2_mid
    jac[0:3, 6:9] = j_out
    jac[3:6, 0:3] = g2_in
    jac[3:6, 3:6] = j_mid
    jac[6:9, 0:3] = j_in
    return jac


@dataclass(frozen=True)
class LimitRecord:
    """One out-of-range finding from validate_limits."""

    section: str  # "inner", "middle", "outer" or "manipulator"
    parameter: str  # "s", "bend", "kappa" or "total_length"
    value: float
    bound: float

    def __str__(self) -> str:
        return f"{self.section}.{self.parameter} = {self.value:.6g} violates bound {self.bound:.6g}"


def validate_limits(
    config: ManipulatorConfig, geoms: ManipulatorGeometry
) -> List[LimitRecord]:
    """Report every configuration component outside the structure limits."""
    records: List[LimitRecord] = []
    for name, section, geom in zip(SECTION_NAMES, config.sections(), geoms.sections()):
        if section.s < geom.s_min:
            records.append(LimitRecord(name, "s", section.s, geom.s_min))
        elif section.s > geom.s_max:
            records.append(LimitRecord(name, "s", section.s, geom.s_max))
        if section.kappa > geom.kappa_max:
            records.append(LimitRecord(name, "kappa", section.kappa, geom.kappa_max))
        if section.bend_angle > geom.theta_max:
            records.append(LimitRecord(name, "bend", section.bend_angle, geom.theta_max))
    total = config.total_length
    if total < geoms.total_min:
        records.append(LimitRecord("manipulator", "total_length", total, geoms.total_min))
    elif total > geoms.total_max:
        records.append(LimitRecord("manipulator", "total_length", total, geoms.total_max))
    return records
