"""Error taxonomy shared by every module.

Domain errors are violated preconditions, inconsistency errors are failed
properties that the theory guarantees (always a bug somewhere), resource
errors are exceeded caps.  The CLI maps them to exit codes 1, 1 and 2.
"""


class Hilbert90Error(Exception):
    """Base class for all errors raised by the package."""


class DomainError(Hilbert90Error, ValueError):
    """A precondition of an operation does not hold."""


class DimensionError(DomainError):
    """Operands live at different levels or have incompatible shapes."""


class ParseError(DomainError):
    """Malformed rational-function text."""


class InconsistencyError(Hilbert90Error, AssertionError):
    """A property guaranteed by the theory failed to hold."""


class ResourceError(Hilbert90Error, RuntimeError):
    """A configured cap (group size, retries, variables) was exceeded."""
