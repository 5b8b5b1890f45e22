"""Exceptions shared across the laboratory."""


class CoverLabError(Exception):
    """Base class for every error raised by the laboratory."""
    pass


class InvalidSpec(CoverLabError):
    """Exception raised when a graph family specification has bad parameters."""
    pass


class RetryExhausted(CoverLabError):
    """Exception raised when a rejection sampler gives up after the retry limit."""
    pass


class HorizonExceeded(CoverLabError):
    """Exception raised when a walk runs past its safety horizon."""
    pass


class CapExceeded(CoverLabError):
    """Exception raised when an exact computation is asked for a graph above its cap."""
    pass


class SingularSystem(CoverLabError):
    """Exception raised when a hitting-time system cannot be solved (disconnected graph)."""
    pass


class TargetsTooClose(CoverLabError):
    """Exception raised when excursion targets are closer than twice the outer radius."""
    pass


class GeometryDegenerate(CoverLabError):
    """Exception raised when the annulus between the two spheres does not exist."""
    pass


class InsufficientEvents(CoverLabError):
    """Exception raised when too few joint events were observed to form a ratio."""
    pass


class InsufficientSamples(CoverLabError):
    """Exception raised when per-vertex estimates are too noisy to bucket."""
    pass


class ConfigInvalid(CoverLabError):
    """Exception raised when an experiment configuration does not validate."""

    def __init__(self, message: str, field: str = "", line: int = 0):
        self.field = field
        self.line = line
        location = ""
        if field:
            location = f" [{field}" + (f", line {line}" if line else "") + "]"
        super().__init__(f"{message}{location}")


class DriftDetected(CoverLabError):
    """Exception raised when a replayed record does not reproduce bit-for-bit."""

    def __init__(self, field: str, recorded: object, replayed: object):
        self.field = field
        self.recorded = recorded
        self.replayed = replayed
        super().__init__(f"first divergent field '{field}': recorded={recorded!r} replayed={replayed!r}")
