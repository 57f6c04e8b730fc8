"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class LayerScatterError(Exception):
    exit_code = 1


class ConfigError(LayerScatterError, ValueError):
    """Bad arguments, malformed input files, or violated preconditions."""

    exit_code = 2


class DomainError(ConfigError):
    """An argument lies outside the domain of the operation."""


class NumericError(LayerScatterError, ArithmeticError):
    """A numerical procedure failed to reach its target accuracy."""

    exit_code = 3

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class DataInconsistencyError(LayerScatterError):
    """Input data cannot come from a physical medium (e.g. |r_j| >= 1)."""

    exit_code = 4

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class ResourceCapError(LayerScatterError):
    """A configured resource limit would be exceeded."""

    exit_code = 5


class TruncationWarning(UserWarning):
    """A truncated series has a tail bound above the requested tolerance."""

    def __init__(self, message, bound):
        super().__init__(message)
        self.bound = bound
