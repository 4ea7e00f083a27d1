"""Exception hierarchy shared by the library and the command line.

Library code raises these; only ``src.commands`` turns them into exit codes.
"""


class QuadZetaError(Exception):
    """Base class for every error raised by quadzeta."""


class ParseError(QuadZetaError, ValueError):
    """Malformed quadratic-irrational expression."""


class DomainError(QuadZetaError, ValueError):
    """Input outside the domain of an operation (rational alpha, integral p, non-unit, ...)."""


class MixedFieldError(DomainError):
    """Binary operation on elements of two different quadratic fields."""


class NotInOrderError(DomainError):
    """Element does not multiply the lattice Z + Z*alpha into itself."""


class ResourceCapError(QuadZetaError, RuntimeError):
    """A computation would exceed the configured size cap."""


class ResonanceError(QuadZetaError, ArithmeticError):
    """A series denominator fell below the working precision floor."""


class MethodDisagreementError(QuadZetaError):
    """Two independent exact methods (or a method and the oracle) disagree."""
