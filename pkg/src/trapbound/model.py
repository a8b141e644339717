"""Shared value types: the trapped system, interactions and the pair-count switch."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

from trapbound.errors import InvalidInputError


class PrefactorVariant(enum.Enum):
    """How the Gaussian bound counts interacting pairs.

    ``PAPER_N_SQUARED`` keeps the N**2 prefactor, which wrongly lets a single
    particle interact with itself; ``CORRECTED_PAIR_COUNT`` uses N(N-1).
    """

    PAPER_N_SQUARED = "paper"
    CORRECTED_PAIR_COUNT = "corrected"


@dataclass(frozen=True)
class TrapSystem:
    n: int
    omega: float = 1.0

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise InvalidInputError(f"particle number must be an integer >= 1, got {self.n!r}")
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise InvalidInputError(f"trap frequency must be positive, got {self.omega!r}")
        object.__setattr__(self, "n", int(self.n))


@dataclass(frozen=True)
class Delta:
    """Zero-range interaction ``b * delta(r)``; attractive for b < 0."""

    b: float

    def __post_init__(self):
        if not math.isfinite(self.b):
            raise InvalidInputError(f"delta strength must be finite, got {self.b!r}")


@dataclass(frozen=True)
class StepWell:
    """Attractive square well: potential -v inside radius r, zero outside."""

    v: float
    r: float

    def __post_init__(self):
        if not (self.v > 0 and math.isfinite(self.v)):
            raise InvalidInputError(f"well depth must be positive, got {self.v!r}")
        if not (self.r > 0 and math.isfinite(self.r)):
            raise InvalidInputError(f"well range must be positive, got {self.r!r}")


Interaction = Union[Delta, StepWell]


def pair_count(system: TrapSystem, variant: PrefactorVariant = PrefactorVariant.CORRECTED_PAIR_COUNT) -> int:
    n = system.n
    if variant is PrefactorVariant.PAPER_N_SQUARED:
        return n * n
    return n * (n - 1)


class Functional(enum.Enum):
    """Which variational bound is evaluated, and over which parameter."""

    HARMONIC = "ev"
    GAUSSIAN = "k"

    @property
    def parameter_name(self) -> str:
        return "w" if self is Functional.HARMONIC else "sigma"
