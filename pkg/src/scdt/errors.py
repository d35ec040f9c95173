"""Semantic exceptions shared across the package."""


class ScdtError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ScdtError, ValueError):
    """An input violates its contract (shape, domain, monotonicity, ...)."""


class ReferenceMismatchError(ValidationError):
    """Two objects were built against incompatible reference densities."""


class PersistenceError(ScdtError):
    """A file could not be parsed or has an unsupported format version."""
