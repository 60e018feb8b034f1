"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: validation and configuration
problems exit 2, numerical blow-ups exit 3 (usage errors exit 1).
"""


class BoomkitError(Exception):
    """Base class for all package errors."""


class DomainError(BoomkitError, ValueError):
    """An input value is outside the mathematical domain (non-finite, etc.)."""


class ValidationError(BoomkitError, ValueError):
    """Data or parameters violate a stated constraint."""

    def __init__(self, message: str, violations: list[str] | None = None):
        super().__init__(message)
        self.violations = violations or []


class ParseError(ValidationError):
    """A file could not be parsed; carries the offending line when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


class ConfigurationError(BoomkitError, ValueError):
    """A run was configured inconsistently (step too coarse, bad burn-in, ...)."""


class DegenerateEquilibriumError(BoomkitError, ValueError):
    """The closed-form equilibrium does not exist (vanishing denominator)."""


class DivergenceError(BoomkitError, RuntimeError):
    """The integration blew up; ``time`` records when."""

    def __init__(self, time: float, detail: str = ""):
        msg = f"solution diverged at t={time:.6g}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.time = time
