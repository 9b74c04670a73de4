"""Exception types raised across the package."""


class RoughPathError(Exception):
    """Base class for all errors raised by roughsig."""


class ShapeError(RoughPathError, ValueError):
    """Operands disagree in alphabet size or truncation depth."""


class DomainError(RoughPathError, ValueError):
    """An argument lies outside the domain of the operation."""


class CapacityError(RoughPathError, MemoryError):
    """A requested structure would exceed the configured entry cap."""


class InputError(RoughPathError, ValueError):
    """Malformed external input (CSV or JSON)."""
