"""Exception hierarchy shared by the monitors, supervisor and simulator."""


class SafetyError(Exception):
    """Base class for every error raised by this package."""


class NonMonotonicTimestamp(SafetyError, ValueError):
    """A stream delivered a timestamp that does not advance."""

    def __init__(self, t: float, previous: float) -> None:
        super().__init__(f"timestamp {t!r} does not advance past {previous!r}")
        self.t = t
        self.previous = previous


class InsufficientSamples(SafetyError, ValueError):
    pass


class JointIndexOutOfRange(SafetyError, IndexError):
    pass


class DimensionMismatch(SafetyError, ValueError):
    pass


class StaleInput(SafetyError):
    """Supervisor inputs are further apart in time than the allowed skew."""


class InvalidScenario(SafetyError, ValueError):
    """Scenario failed validation.

    ``diagnostics`` holds one ``(field_path, message)`` pair per problem.
    """

    def __init__(self, diagnostics: list[tuple[str, str]]) -> None:
        self.diagnostics = list(diagnostics)
        lines = "; ".join(f"{path}: {msg}" for path, msg in self.diagnostics)
        super().__init__(f"invalid scenario: {lines}")


class MalformedLog(SafetyError, ValueError):
    pass


class InvariantViolation(SafetyError):
    """An internal consistency check failed (e.g. replay diverged)."""
