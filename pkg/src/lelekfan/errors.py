"""Exception taxonomy shared across the package.

Library code raises these and never calls sys.exit; the CLI maps them to
exit codes in cli.py.
"""


class FanError(Exception):
    """Base class for all package errors."""


class DomainError(FanError):
    """A value lies outside the mathematical domain of an operation."""


class PreconditionError(FanError):
    """A stated operation precondition was violated (e.g. slope range checks)."""


class NcViolation(FanError):
    """A slope pair is multiplicatively dependent where independence is required."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class RangeError(FanError):
    """A parameter falls outside its admissible interval."""


class ShapeError(FanError):
    """Operands have incompatible lengths or depths."""


class ResourceError(FanError):
    """A configured enumeration or search budget would be exceeded."""


class FormatError(FanError):
    """Malformed serialized input (scalar strings, leg files)."""
