"""Exception types shared across the package.

The CLI maps these onto exit codes: InputSyntaxError -> 2,
InvalidRadiusError -> 3, MultiComponentError -> 5. Everything else is a
library-level error.
"""


class MnovError(Exception):
    """Base class for all package errors."""


class InputSyntaxError(MnovError):
    """Malformed input text (rational function, braid word, or DSL)."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class DegreeCapError(InputSyntaxError):
    """A polynomial exceeded the per-variable degree cap."""


class PoleError(MnovError):
    """Derivative requested at a zero of the denominator."""


class PreconditionError(MnovError):
    """An operation was called outside its stated domain."""


class SquarefreeError(PreconditionError):
    """The divisor polynomial failed the squarefree heuristic."""


class InvalidRadiusError(MnovError):
    """Sphere radius at or below the divisor distance, or at a critical radius."""


class MultiComponentError(MnovError):
    """A knot-only estimate was requested for a multi-component closure."""


class DisconnectedSurfaceError(MnovError):
    """Free-rank estimate on a disconnected Bennequin surface without override."""
