"""
Exception hierarchy for the bosonic memory channel toolkit.
"""

from typing import Optional


class ChannelError(Exception):
    """Base class for all errors raised by the toolkit."""


class InputValidationError(ChannelError, ValueError):
    """Raised when a domain input is malformed or out of range."""

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        if location:
            message = f"{message} (at {location})"
        super().__init__(message)


class UnsupportedSqueezingError(InputValidationError):
    """Raised for complex or non-symmetric squeezing matrices."""

    def __init__(self, detail: str, location: Optional[str] = None):
        super().__init__(f"unsupported: non-symmetric/complex squeezing: {detail}", location)


class SpectralError(ChannelError):
    """Raised when the eigendecomposition of a squeezing matrix fails."""


class TruncationError(ChannelError):
    """Raised when a Fock-space simulation loses too much weight to the cutoff."""

    def __init__(self, deficit: float, cutoff: int, tolerance: float):
        self.deficit = deficit
        self.cutoff = cutoff
        self.tolerance = tolerance
        super().__init__(
            f"Fock truncation failure: deficit {deficit:.3e} exceeds {tolerance:.1e} at cutoff {cutoff}"
        )


class SweepPointError(ChannelError):
    """Raised when a single sweep point fails; aborts the sweep."""

    def __init__(self, index: int, value: float, cause: Exception):
        self.index = index
        self.value = value
        self.cause = cause
        super().__init__(f"Sweep point {index} (value={value!r}) failed: {cause}")


class InvariantViolation(ChannelError):
    """Raised when a bounds report breaks its ordering invariants."""


class VerificationFailure(ChannelError):
    """Raised when one or more verification checks exceed their thresholds."""

    def __init__(self, failed_checks: list):
        self.failed_checks = failed_checks
        names = ", ".join(failed_checks)
        super().__init__(f"Verification failed: {names}")
