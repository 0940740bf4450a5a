"""Exception types shared across the simulator."""


class ContinuumError(Exception):
    """Base class for all simulator errors."""


class InvalidInput(ContinuumError):
    """An argument violates a structural invariant (e.g. tendon shorter than its disk passages)."""


class DomainError(ContinuumError):
    """Inputs are outside the mathematical domain of a kinematic map."""


class LimitViolation(ContinuumError):
    """A configuration is outside the geometry limits while strict mode is enabled."""


class SingularityError(ContinuumError):
    """A Jacobian evaluation produced non-finite values."""


class InvalidGripperCombination(ContinuumError):
    """A gripper command tuple is not one of the valid backbone actuation rows."""


class StepRejected(ContinuumError):
    """The plant could not resolve a configuration for this step."""


class ControlFault(ContinuumError):
    """The controller could not recover a configuration; output must stop motion."""


class ScriptError(ContinuumError):
    """A scenario script is malformed."""


class SimFault(ContinuumError):
    """A scenario run aborted because the plant rejected a step."""


class ConfigError(ContinuumError):
    """The configuration file is invalid."""
