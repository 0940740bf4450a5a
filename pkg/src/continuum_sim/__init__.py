"""Tendon-driven multisection continuum manipulator simulator.

Constant-curvature kinematics with tendon-coupling decoupling, a
quasi-static push-pull plant, a tension-compensated velocity controller,
and a streaming teleoperation gateway.
"""

from .geometry import Pose, SectionConfig, SectionGeometry, TendonLengths
from .kinematics import (
    chord_oracle,
    config_to_poses,
    forward_section,
    inverse_section,
    rotated_inverse,
    section_jacobian_inverse,
)
from .multisection import (
    ActuatorLengths,
    CouplingDecomposition,
    ManipulatorConfig,
    ManipulatorGeometry,
    compose_actuator,
    default_geometry,
    forward_decouple,
    jacobian_inverse,
    validate_limits,
)

__all__ = [
    "Pose",
    "SectionConfig",
    "SectionGeometry",
    "TendonLengths",
    "chord_oracle",
    "config_to_poses",
    "forward_section",
    "inverse_section",
    "rotated_inverse",
    "section_jacobian_inverse",
    "ActuatorLengths",
    "CouplingDecomposition",
    "ManipulatorConfig",
    "ManipulatorGeometry",
    "compose_actuator",
    "default_geometry",
    "forward_decouple",
    "jacobian_inverse",
    "validate_limits",
]

__version__ = "0.1.0"
