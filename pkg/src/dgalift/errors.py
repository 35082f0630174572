"""Exception types shared across the package."""


class DgaliftError(Exception):
    """Base class for errors raised by this package."""


class ExprSyntaxError(DgaliftError):
    """Malformed expression text.  Carries the 0-based offset of the problem."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class SchemaError(DgaliftError):
    """A signature / module document violates its schema or invariants."""


class NotInvertibleError(DgaliftError):
    """A degree-0 map has no exact two-sided inverse."""


class VerificationError(DgaliftError):
    """An identity guaranteed by the construction failed to re-verify.

    Raised by pipelines when a step that cannot fail on valid input does
    fail; this always indicates a bug or a violated precondition, never a
    negative mathematical verdict.
    """
