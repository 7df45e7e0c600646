"""Shared exception types.

Every failure mode callers are expected to handle maps to one of these; anything
else escaping the package is a bug.
"""


class LatticeError(Exception):
    """Base class for all errors raised by this package."""


class SingularMatrixError(LatticeError):
    """The matrix has determinant zero and does not define a finite graph."""


class DimensionError(LatticeError):
    """Matrix is not square, or its dimension is outside the supported range."""


class EntryRangeError(LatticeError):
    """A matrix or vector entry does not fit the supported 64-bit range."""


class PreconditionError(LatticeError):
    """An argument violates a documented precondition (wrong shape, not a
    Hermite form, label out of range, and so on)."""


class ResourceLimitError(LatticeError):
    """The requested object is too large for the configured enumeration caps."""


class ConfigError(LatticeError):
    """A simulation or CLI configuration is invalid."""
