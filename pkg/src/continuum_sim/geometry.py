"""Value types for section geometry, configuration space and poses.

Units are millimetres, radians and 1/mm throughout. Curvature is always
non-negative; the bending direction is carried by the plane angle phi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidInput

# Curvature below this threshold is treated as straight (phi is gauge freedom).
EPS_STRAIGHT = 1e-8

# Angular spacing of the three tendon holes of one group.
TENDON_SPACING = 2.0 * math.pi / 3.0

# Rotation between adjacent tendon groups: nine evenly spaced holes.
GROUP_OFFSET = math.radians(40.0)


def wrap_angle(angle: float) -> float:
    """Wrap an angle to [-pi, pi)."""
    a = math.fmod(angle + math.pi, 2.0 * math.pi)
    if a < 0.0:
        a += 2.0 * math.pi
    return a - math.pi


@dataclass(frozen=True)
class SectionGeometry:
    """Structural constants of one section.

    n       number of segments between guide disks
    d       radial spacing between tendon holes and the backbone axis (mm)
    h       guide disk height (mm)
    s_min   minimum bending arc length (mm)
    s_max   maximum bending arc length (mm)
    kappa_max  curvature limit (1/mm)
    theta_max  total bend angle limit (rad)
    """

    n: int
    d: float
    h: float
    s_min: float
    s_max: float
    kappa_max: float
    theta_max: float

    def validate(self) -> None:
        if self.n < 1:
            raise InvalidInput(f"segment count must be >= 1, got {self.n}")
        if not self.d > 0.0:
            raise InvalidInput(f"hole radius d must be positive, got {self.d}")
        if self.h < 0.0:
            raise InvalidInput(f"disk height h must be >= 0, got {self.h}")
        if not (0.0 < self.s_min <= self.s_max):
            raise InvalidInput(f"need 0 < s_min <= s_max, got [{self.s_min}, {self.s_max}]")
        if not self.kappa_max > 0.0:
            raise InvalidInput(f"kappa_max must be positive, got {self.kappa_max}")
        if self.kappa_max * self.d >= 1.0:
            raise InvalidInput(
                f"kappa_max*d = {self.kappa_max * self.d:.3f} >= 1: inverse map domain is empty"
            )
        if self.theta_max <= 0.0:
            raise InvalidInput(f"theta_max must be positive, got {self.theta_max}")

    @property
    def disk_run(self) -> float:
        """Total straight length contributed by the disk passages (mm)."""
        return self.n * self.h


@dataclass(frozen=True)
class SectionConfig:
    """One section's configuration triple (kappa, phi, s)."""

    kappa: float
    phi: float
    s: float

    def canonical(self) -> "SectionConfig":
        """Wrap phi to [-pi, pi); zero it when the section is straight."""
        if self.kappa < EPS_STRAIGHT:
            return replace(self, phi=0.0)
        return replace(self, phi=wrap_angle(self.phi))

    @property
    def bend_angle(self) -> float:
        """Total bend angle kappa*s (rad)."""
        return self.kappa * self.s

    def validate(self, geom: SectionGeometry) -> None:
        if self.kappa < 0.0:
            raise InvalidInput(f"kappa must be >= 0, got {self.kappa}")
        if not math.isfinite(self.kappa) or not math.isfinite(self.phi) or not math.isfinite(self.s):
            raise InvalidInput("configuration components must be finite")
        if not (geom.s_min <= self.s <= geom.s_max):
            raise InvalidInput(f"s = {self.s} outside [{geom.s_min}, {geom.s_max}]")


@dataclass(frozen=True)
class TendonLengths:
    """Free lengths of the three tendons through one section (mm)."""

    l1: float
    l2: float
    l3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.l1, self.l2, self.l3], dtype=float)

    @staticmethod
    def from_array(arr) -> "TendonLengths":
        return TendonLengths(float(arr[0]), float(arr[1]), float(arr[2]))

    def validate(self, geom: SectionGeometry) -> None:
        run = geom.disk_run
        for i, l in enumerate((self.l1, self.l2, self.l3), start=1):
            if not math.isfinite(l):
                raise InvalidInput(f"tendon {i} length is not finite")
            if l <= run:
                raise InvalidInput(
                    f"tendon {i} length {l} mm does not clear the {run} mm of disk passages"
                )


@dataclass(frozen=True)
class ArcIntermediates:
    """Scalars shared by the forward map and its diagnostics.

    l_m      bending asymmetry magnitude (mm)
    l_c      summed chord budget l1+l2+l3-3nh (mm)
    k_chord  2n*sin(kappa*s/2n) (dimensionless chord factor times kappa)
    """

    l_m: float
    l_c: float
    k_chord: float


@dataclass(frozen=True)
class Pose:
    """A frame in space: position (mm) and orthonormal rotation."""

    position: np.ndarray
    orientation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "position", np.asarray(self.position, dtype=float).reshape(3))
        object.__setattr__(self, "orientation", np.asarray(self.orientation, dtype=float).reshape(3, 3))

    @staticmethod
    def identity() -> "Pose":
        return Pose(np.zeros(3), np.eye(3))

    def compose(self, other: "Pose") -> "Pose":
        """This pose followed by `other` expressed in this pose's frame."""
        return Pose(
            self.position + self.orientation @ other.position,
            self.orientation @ other.orientation,
        )

    def transform_point(self, point: np.ndarray) -> np.ndarray:
        return self.position + self.orientation @ np.asarray(point, dtype=float)
