"""Error types shared across the package.

ValidationError maps to CLI exit code 2, CapExceededError to exit code 3.
"""


class SteintileError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SteintileError):
    """Malformed or inconsistent input (bad orders, margins, literals, ...)."""


class CapExceededError(SteintileError):
    """A configured enumeration or search cap would be exceeded."""
