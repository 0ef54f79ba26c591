from typing import Optional, Tuple


class FitboError(Exception):
    """Base class for every error raised by the library."""


class ArgumentError(FitboError, ValueError):
    pass


class DomainError(FitboError, ValueError):
    pass


class ConfigError(FitboError, ValueError):
    pass


class ConditioningError(FitboError):
    def __init__(self, message: str, jitter: float):
        super().__init__(f"{message} (final jitter tried: {jitter:.3e})")
        self.jitter = jitter


class SamplerStuckError(FitboError):
    pass


class FittingError(FitboError):
    def __init__(self, message: str, diagnostics: Optional[dict] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class NonConvergenceError(FitboError):
    def __init__(self, message: str, interval: Tuple[float, float]):
        super().__init__(f"{message} (worst interval: [{interval[0]:.6g}, {interval[1]:.6g}])")
        self.interval = interval


class AcquisitionError(FitboError):
    def __init__(self, message: str, index: int):
        super().__init__(f"{message} (batch index {index})")
        self.index = index


class ObjectiveEvaluationError(FitboError):
    """Objective failed mid-run; `trace` holds every record completed so far."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace
