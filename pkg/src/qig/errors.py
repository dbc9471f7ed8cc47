"""Exception types shared across the package."""


class InvariantViolation(ValueError):
    """A structural contract on inputs is violated.

    Covers shape mismatches, non-Hermitian input beyond roundoff, densities
    without unit trace or invertibility, uncentered observables, and Kraus
    sets that are not trace preserving.
    """


class DomainError(ValueError):
    """A scalar function or parameter is used outside its domain."""


class FileFormatError(ValueError):
    """A matrix or measure file cannot be parsed into the expected schema."""


class VerificationError(RuntimeError):
    """A numerical verification step could not be completed reliably."""
