"""Variational upper bounds for the ground state of trapped attractive bosons."""

from trapbound.errors import (
    BracketInvalidError,
    InvalidInputError,
    NoConvergenceError,
    NoInteriorMinimumError,
    NoMetastableStateError,
    ResonanceError,
    TrapboundError,
    UnreachableBranchError,
)
from trapbound.model import Delta, PrefactorVariant, StepWell, TrapSystem, pair_count

__version__ = "0.1.0"

__all__ = [
    "BracketInvalidError",
    "Delta",
    "InvalidInputError",
    "NoConvergenceError",
    "NoInteriorMinimumError",
    "NoMetastableStateError",
    "PrefactorVariant",
    "ResonanceError",
    "StepWell",
    "TrapSystem",
    "TrapboundError",
    "UnreachableBranchError",
    "pair_count",
]
