"""The two variational energy functionals and their ingredients.

All quantities are in trap units.  Functions accept scalars or numpy arrays
for the variational parameter and broadcast.

* :func:`gaussian_bound_k` -- Gaussian trial state of width ``sigma``.
* :func:`harmonic_bound_ev` -- harmonic-model bound with internal frequency ``w``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special

from trapbound.errors import InvalidInputError
from trapbound.model import Delta, Functional, Interaction, PrefactorVariant, StepWell, TrapSystem, pair_count

ArrayLike = Union[float, np.ndarray]

TWO_PI_POW = (2.0 * math.pi) ** 1.5
_SERIES_CUTOFF = 1e-2
_TAIL_CUTOFF = 5.0
_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


@dataclass(frozen=True)
class EnergyBreakdown:
    """Energy split into its terms (units of hbar*Omega).

    ``total`` is computed from a rearranged form that avoids cancelling the
    two large one-body terms, so it agrees with the sum of the parts only to
    rounding of the largest part.
    """

    total: ArrayLike
    kinetic_trap: ArrayLike
    com_correction: ArrayLike
    interaction: ArrayLike

    def component_sum(self) -> ArrayLike:
        return self.kinetic_trap + self.com_correction + self.interaction


def _positive(name: str, value: ArrayLike) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if not np.all(arr > 0) or not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} must be positive and finite")
    return arr


def _out(arr: np.ndarray) -> ArrayLike:
    return float(arr) if arr.ndim == 0 else arr


def gaussian_bound_k(
    sigma: ArrayLike,
    system: TrapSystem,
    b: float,
    variant: PrefactorVariant = PrefactorVariant.CORRECTED_PAIR_COUNT,
) -> EnergyBreakdown:
    """Energy of the Gaussian trial state of width ``sigma`` with contact strength ``b``.

    ``variant`` chooses N**2 (as originally written) or N(N-1) for the pair
    prefactor of the interaction term.
    """
    s = _positive("sigma", sigma)
    n, om = system.n, system.omega
    kinetic = 0.75 * n / s**2 + 0.75 * n * om**2 * s**2
    interaction = pair_count(system, variant) * b / TWO_PI_POW / s**3
    zero = np.zeros_like(s)
    return EnergyBreakdown(
        total=_out(kinetic + interaction),
        kinetic_trap=_out(kinetic),
        com_correction=_out(zero),
        interaction=_out(interaction),
    )


def pair_correlation_g(r: ArrayLike, w: ArrayLike) -> ArrayLike:
    """Zero-temperature pair-distance density of the harmonic model."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(np.isnan(r)):
        raise InvalidInputError("r must be non-negative")
    w = _positive("w", w)
    with np.errstate(over="ignore", under="ignore"):
        return _out((w / (2.0 * math.pi)) ** 1.5 * np.exp(-0.5 * w * r * r))


def _sphere_fraction_x(x: np.ndarray) -> np.ndarray:
    # F(x) = erf(x) - 2x/sqrt(pi) exp(-x^2), the Gaussian mass inside x.
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < _SERIES_CUTOFF
    large = x > _TAIL_CUTOFF
    mid = ~(small | large)

    xs = x[small]
    x2 = xs * xs
    # 4/sqrt(pi) * sum_k (-1)^k x^(2k+3) / (k! (2k+3))
    series = 1.0 / 3.0 - x2 * (1.0 / 5.0 - x2 * (1.0 / 14.0 - x2 * (1.0 / 54.0 - x2 / 264.0)))
    out[small] = 2.0 * _TWO_OVER_SQRT_PI * xs**3 * series

    xm = x[mid]
    out[mid] = special.erf(xm) - _TWO_OVER_SQRT_PI * xm * np.exp(-xm * xm)

    xl = x[large]
    with np.errstate(under="ignore"):
        out[large] = 1.0 - (special.erfc(xl) + _TWO_OVER_SQRT_PI * xl * np.exp(-xl * xl))
    return out


def sphere_fraction(r_range: ArrayLike, w: ArrayLike) -> ArrayLike:
    """Probability that a pair sits closer than ``r_range`` at model frequency ``w``."""
    r = _positive("r_range", r_range)
    w = _positive("w", w)
    x = np.asarray(r * np.sqrt(w / 2.0))
    return _out(_sphere_fraction_x(np.atleast_1d(x)).reshape(x.shape))


def interaction_term(w: ArrayLike, system: TrapSystem, interaction: Interaction) -> ArrayLike:
    """Pair interaction energy ``N(N-1)/2 * <v2>`` under the model pair density."""
    w = _positive("w", w)
    pairs = 0.5 * system.n * (system.n - 1)
    if isinstance(interaction, Delta):
        return _out(pairs * interaction.b * (w / (2.0 * math.pi)) ** 1.5)
    if isinstance(interaction, StepWell):
        return _out(-pairs * interaction.v * np.asarray(sphere_fraction(interaction.r, w)))
    raise InvalidInputError(f"unsupported interaction {interaction!r}")


def harmonic_bound_ev(w: ArrayLike, system: TrapSystem, interaction: Interaction) -> EnergyBreakdown:
    """Harmonic-model upper bound as a function of the internal frequency ``w``."""
    w = _positive("w", w)
    n, om = system.n, system.omega
    kinetic = 0.75 * n * (w * w + om * om) / w
    com = -0.75 * (w - om) ** 2 / w
    inter = np.asarray(interaction_term(w, system, interaction))
    # kinetic + com == 3/4 (N-1)(w + om^2/w) + 3/2 om, exact for N = 1
    total = 0.75 * (n - 1) * (w + om * om / w) + 1.5 * om + inter
    return EnergyBreakdown(
        total=_out(total),
        kinetic_trap=_out(kinetic),
        com_correction=_out(com),
        interaction=_out(inter),
    )


def effective_delta_strength(step: StepWell) -> float:
    """Contact strength with the same volume integral as ``step``."""
    return -(4.0 * math.pi / 3.0) * step.r**3 * step.v


def total_energy_function(
    system: TrapSystem,
    interaction: Interaction,
    functional: Functional = Functional.HARMONIC,
    variant: PrefactorVariant = PrefactorVariant.CORRECTED_PAIR_COUNT,
):
    """Return ``f(param) -> total energy`` for the chosen bound.

    The Gaussian bound is only defined for a contact interaction.
    """
    if functional is Functional.HARMONIC:
        return lambda w: harmonic_bound_ev(w, system, interaction).total
    if not isinstance(interaction, Delta):
        raise InvalidInputError("the Gaussian bound needs a Delta interaction")
    b = interaction.b
    return lambda sigma: gaussian_bound_k(sigma, system, b, variant).total


def breakdown(
    param: ArrayLike,
    system: TrapSystem,
    interaction: Interaction,
    functional: Functional = Functional.HARMONIC,
    variant: PrefactorVariant = PrefactorVariant.CORRECTED_PAIR_COUNT,
) -> EnergyBreakdown:
    if functional is Functional.HARMONIC:
        return harmonic_bound_ev(param, system, interaction)
    if not isinstance(interaction, Delta):
        raise InvalidInputError("the Gaussian bound needs a Delta interaction")
    return gaussian_bound_k(param, system, interaction.b, variant)
