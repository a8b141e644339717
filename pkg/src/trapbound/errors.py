"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`TrapboundError`; the CLI maps the two families below onto exit codes
(invalid input -> 2, no convergence -> 3).
"""


class TrapboundError(Exception):
    """Base class for package errors."""


class InvalidInputError(TrapboundError, ValueError):
    """A precondition on an argument was violated."""


class ResonanceError(InvalidInputError):
    """Square-well parameter sits on a zero-energy resonance."""


class UnreachableBranchError(InvalidInputError):
    """Target scattering length is not reachable without a bound state."""


class BracketInvalidError(InvalidInputError):
    """A bisection bracket does not straddle the sought transition."""


class NoMetastableStateError(InvalidInputError):
    """The landscape has no separate metastable minimum."""


class NoConvergenceError(TrapboundError, RuntimeError):
    """An iterative solver hit its iteration cap."""


class NoInteriorMinimumError(NoConvergenceError):
    """No interior point of the bracket lies below both ends."""
