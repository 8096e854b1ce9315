"""Exception hierarchy shared across the package.

Every error raised by the library derives from BracketProbError, so callers
(CLI, HTTP service) can map failures to exit codes / status codes in one place.
"""

from __future__ import annotations

# Process exit codes used by the CLI.
EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_SCHEDULE_ERROR = 3
EXIT_CAPACITY_ERROR = 4


class BracketProbError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(BracketProbError):
    """A numeric argument is out of domain (non-finite rating, sigma <= 0, ...)."""


class DataError(BracketProbError):
    """A config, ratings, odds, or overrides input failed to parse or validate."""

    def __init__(self, message: str, violations: list[str] | None = None):
        super().__init__(message)
        self.violations = list(violations or [])

    def __str__(self) -> str:  # pragma: no cover - formatting only
        base = super().__str__()
        if self.violations:
            return base + "\n" + "\n".join("  - " + v for v in self.violations)
        return base


class OverrideConflictError(DataError):
    """Two overrides target the same unordered pair in the same stage."""


class ScheduleError(BracketProbError):
    """A schedule descriptor violates the bracket structure rules."""

    def __init__(self, message: str, violations: list[str] | None = None):
        super().__init__(message)
        self.violations = list(violations or [])

    def __str__(self) -> str:  # pragma: no cover - formatting only
        base = super().__str__()
        if self.violations:
            return base + "\n" + "\n".join("  - " + v for v in self.violations)
        return base


class CapacityError(BracketProbError):
    """The requested enumeration is too large to run without an explicit opt-in."""
