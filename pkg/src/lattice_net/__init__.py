"""Tools for twisted-torus interconnection networks defined by integer matrices."""

from lattice_net.errors import (
    ConfigError,
    DimensionError,
    EntryRangeError,
    LatticeError,
    PreconditionError,
    ResourceLimitError,
    SingularMatrixError,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DimensionError",
    "EntryRangeError",
    "LatticeError",
    "PreconditionError",
    "ResourceLimitError",
    "SingularMatrixError",
    "__version__",
]
