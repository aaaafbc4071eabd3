"""Exception hierarchy shared by every module."""


class DistillDynError(Exception):
    """Base class for all library errors."""


class DimensionError(DistillDynError, ValueError):
    """Operand shapes do not agree or do not factorize as requested."""


class ValidationError(DistillDynError, ValueError):
    """An input violates a documented invariant (Hermiticity, trace, completeness...)."""


class ConvergenceError(DistillDynError, RuntimeError):
    """An iterative solver hit its iteration cap.

    ``residual`` carries the remaining error measure at the point of failure.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class IntegrationError(DistillDynError, RuntimeError):
    """The propagated state left the physical set beyond the allowed slack."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class BracketError(DistillDynError, ValueError):
    """A root-finding bracket does not enclose a sign change."""


class ConfigError(DistillDynError, ValueError):
    """Malformed scenario configuration."""

    def __init__(self, message, key=None, line=None):
        where = []
        if key is not None:
            where.append(f"key {key!r}")
        if line is not None:
            where.append(f"line {line}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.key = key
        self.line = line


class EvaluationError(DistillDynError, ValueError):
    """A user-supplied function returned a non-finite value."""
