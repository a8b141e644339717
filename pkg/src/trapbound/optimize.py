"""One-dimensional minimisation and critical-point analysis of the bounds.

The landscapes of interest span many decades of the variational parameter,
so they are sampled on logarithmic grids.  Extrema are located from sign
changes of the discrete slope and then polished with Brent's method.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import optimize as sopt

from trapbound.energy import total_energy_function
from trapbound.errors import (
    BracketInvalidError,
    InvalidInputError,
    NoConvergenceError,
    NoInteriorMinimumError,
)
from trapbound.model import Delta, Functional, Interaction, PrefactorVariant, TrapSystem, pair_count

Objective = Callable[[float], float]

# Full scan windows, in units of Omega for w and of a_ho for sigma (w ~ 1/sigma^2).
DEFAULT_WINDOW = {
    Functional.HARMONIC: (1e-3, 1e12),
    Functional.GAUSSIAN: (1e-6, 10**1.5),
}
# Window in which the trap-scale (metastable) minimum is sought.
TRAP_SCALE_WINDOW = {
    Functional.HARMONIC: (1e-2, 1e2),
    Functional.GAUSSIAN: (1e-1, 1e1),
}
# Where the collapse direction is probed for a witness.
COLLAPSE_PROBE = {
    Functional.HARMONIC: 1e12,
    Functional.GAUSSIAN: 1e-4,
}
PREDICATE_POINTS_PER_DECADE = 200


class PointKind(enum.Enum):
    LOCAL_MIN = "LocalMin"
    LOCAL_MAX = "LocalMax"
    GLOBAL_MIN = "GlobalMin"
    BOUNDARY_DECREASING = "BoundaryDecreasing"


@dataclass(frozen=True)
class CriticalPoint:
    location: float
    energy: float
    kind: PointKind
    curvature_sign: int

    @property
    def is_minimum(self) -> bool:
        return self.kind in (PointKind.LOCAL_MIN, PointKind.GLOBAL_MIN)


class Stability(enum.Enum):
    BOUNDED_BELOW = "BoundedBelow"
    UNBOUNDED_BELOW = "UnboundedBelow"


@dataclass(frozen=True)
class StabilityVerdict:
    classification: Stability
    witness: tuple[float, float]
    metastable: bool
    critical_points: tuple[CriticalPoint, ...] = field(default=(), repr=False)

    @property
    def unbounded(self) -> bool:
        return self.classification is Stability.UNBOUNDED_BELOW


@dataclass(frozen=True)
class CriticalNumberResult:
    n_max: int
    bracket: tuple[int, int]
    criterion: str


def log_grid(lo: float, hi: float, points_per_decade: float) -> np.ndarray:
    """Endpoint-inclusive logarithmic grid with at least ``points_per_decade`` density."""
    if not (0 < lo < hi) or not math.isfinite(hi):
        raise InvalidInputError(f"need 0 < lo < hi, got ({lo!r}, {hi!r})")
    if not points_per_decade > 0:
        raise InvalidInputError("points_per_decade must be positive")
    decades = math.log10(hi / lo)
    n = max(int(math.ceil(decades * points_per_decade - 1e-9)), 1) + 1
    grid = np.logspace(math.log10(lo), math.log10(hi), n)
    grid[0], grid[-1] = lo, hi
    return grid


def evaluate(objective: Objective, xs: np.ndarray) -> np.ndarray:
    """Evaluate ``objective`` on ``xs``, vectorised when the objective allows it."""
    try:
        values = np.asarray(objective(xs), dtype=float)
        if values.shape == xs.shape:
            return values
    except (TypeError, ValueError):
        pass
    return np.array([float(objective(float(x))) for x in xs])


def _interior_triple(objective: Objective, lo: float, hi: float, probes: int = 64):
    if lo > 0:
        xs = np.geomspace(lo, hi, probes + 2)
    else:
        xs = np.linspace(lo, hi, probes + 2)
    fs = evaluate(objective, xs)
    k = int(np.argmin(fs[1:-1])) + 1
    if not (fs[k] < fs[0] and fs[k] < fs[-1]):
        raise NoInteriorMinimumError(f"no interior point of ({lo!r}, {hi!r}) lies below both ends")
    # widen over ties so the middle is strictly lowest
    left, right = k - 1, k + 1
    while left > 0 and fs[left] == fs[k]:
        left -= 1
    while right < len(xs) - 1 and fs[right] == fs[k]:
        right += 1
    return float(xs[left]), float(xs[k]), float(xs[right])


def minimize_local(
    objective: Objective,
    bracket: Sequence[float],
    tol: float = 1e-10,
    maxiter: int = 500,
) -> tuple[float, float]:
    """Minimise a 1D function inside ``bracket``.

    ``bracket`` is ``(lo, hi)`` or ``(lo, mid, hi)`` with ``f(mid)`` below both
    ends.  For a two-point bracket the interior is probed first.  ``tol`` is
    the relative tolerance on the location.
    """
    if len(bracket) == 2:
        lo, hi = map(float, bracket)
        if not lo < hi:
            raise InvalidInputError(f"empty bracket ({lo!r}, {hi!r})")
        triple = _interior_triple(objective, lo, hi)
    elif len(bracket) == 3:
        triple = tuple(map(float, bracket))
        fa, fb, fc = (float(objective(x)) for x in triple)
        if not (triple[0] < triple[1] < triple[2] and fb < fa and fb < fc):
            raise NoInteriorMinimumError(f"{triple!r} does not bracket a minimum")
    else:
        raise InvalidInputError("bracket must have two or three points")

    res = sopt.minimize_scalar(
        lambda x: float(objective(x)),
        bracket=triple,
        method="brent",
        tol=tol,
        options={"maxiter": maxiter},
    )
    if not res.success:
        raise NoConvergenceError(f"Brent refinement failed: {res.message}")
    return float(res.x), float(res.fun)


def _maximize_local(objective: Objective, bracket: Sequence[float]) -> tuple[float, float]:
    x, f = minimize_local(lambda t: -objective(t), bracket)
    return x, -f


def find_critical_points(
    objective: Objective,
    w_min: float,
    w_max: float,
    points_per_decade: float = PREDICATE_POINTS_PER_DECADE,
    refine: bool = True,
) -> list[CriticalPoint]:
    """Locate extrema of ``objective`` on ``[w_min, w_max]``.

    Interior extrema come from strict sign changes of the discrete slope
    (runs of exactly equal neighbours are skipped, so a constant function has
    none).  An end of the window where the energy is still falling outward is
    reported as ``BOUNDARY_DECREASING``.  When no boundary is falling, the
    lowest minimum is relabelled ``GLOBAL_MIN``.
    """
    grid = log_grid(w_min, w_max, points_per_decade)
    energies = evaluate(objective, grid)
    slopes = np.diff(energies)
    nz = np.flatnonzero(slopes)
    signs = np.sign(slopes[nz])

    points: list[CriticalPoint] = []
    for k1, k2, s1, s2 in zip(nz[:-1], nz[1:], signs[:-1], signs[1:]):
        if s1 == s2:
            continue
        triple = (grid[k1], grid[k1 + 1], grid[k2 + 1])
        if s1 < 0:
            if refine:
                x, e = minimize_local(objective, triple)
            else:
                x, e = float(grid[k1 + 1]), float(energies[k1 + 1])
            points.append(CriticalPoint(x, e, PointKind.LOCAL_MIN, 1))
        else:
            if refine:
                x, e = _maximize_local(objective, triple)
            else:
                x, e = float(grid[k1 + 1]), float(energies[k1 + 1])
            points.append(CriticalPoint(x, e, PointKind.LOCAL_MAX, -1))

    boundary = []
    if len(grid) >= 3:
        if slopes[0] > 0:
            curv = np.sign(energies[2] - 2 * energies[1] + energies[0])
            boundary.append(CriticalPoint(float(grid[0]), float(energies[0]), PointKind.BOUNDARY_DECREASING, int(curv)))
        if slopes[-1] < 0:
            curv = np.sign(energies[-1] - 2 * energies[-2] + energies[-3])
            boundary.append(CriticalPoint(float(grid[-1]), float(energies[-1]), PointKind.BOUNDARY_DECREASING, int(curv)))

    minima = [i for i, p in enumerate(points) if p.kind is PointKind.LOCAL_MIN]
    if minima and not boundary:
        lowest = min(minima, key=lambda i: points[i].energy)
        p = points[lowest]
        points[lowest] = CriticalPoint(p.location, p.energy, PointKind.GLOBAL_MIN, p.curvature_sign)

    return sorted(points + boundary, key=lambda p: p.location)


def has_minimum(points: Sequence[CriticalPoint]) -> bool:
    return any(p.is_minimum for p in points)


def critical_strength_gaussian() -> tuple[float, float]:
    """Width and reduced coupling at which the Gaussian-bound minimum disappears.

    For ``e(s) = 3/4 (s**-2 + s**2) - c s**-3`` the conditions ``e' = e'' = 0``
    give ``s* = 5**-0.25`` and ``c* = 2/5 * s*``.
    """
    s_star = 5.0**-0.25
    return s_star, 0.4 * s_star


def _parameter_scale(functional: Functional, omega: float) -> float:
    # w is measured in Omega, sigma in the oscillator length
    return omega if functional is Functional.HARMONIC else omega**-0.5


def _analytically_unbounded(
    system: TrapSystem, interaction: Interaction, functional: Functional, variant: PrefactorVariant
) -> bool:
    if not isinstance(interaction, Delta) or interaction.b >= 0:
        return False
    if functional is Functional.HARMONIC:
        return system.n >= 2
    return pair_count(system, variant) > 0


def classify_stability(
    system: TrapSystem,
    interaction: Interaction,
    functional: Functional = Functional.HARMONIC,
    variant: PrefactorVariant = PrefactorVariant.CORRECTED_PAIR_COUNT,
    floor: float = -1e6,
    points_per_decade: float = PREDICATE_POINTS_PER_DECADE,
) -> StabilityVerdict:
    """Decide whether the bound is bounded below, and whether it has a metastable well.

    The verdict itself is analytic: an attractive contact interaction with at
    least one pair makes the interaction term (~ -w**1.5, or -sigma**-3) beat
    the one-body terms, while a finite-range well saturates.  The witness is a
    numeric probe deep in the collapse direction; for an unbounded landscape
    the probe is pushed further until the energy drops below ``floor``.
    """
    f = total_energy_function(system, interaction, functional, variant)
    unbounded = _analytically_unbounded(system, interaction, functional, variant)

    scale = _parameter_scale(functional, system.omega)
    probe = COLLAPSE_PROBE[functional] * scale
    energy = float(f(probe))
    if unbounded:
        step = 100.0 if functional is Functional.HARMONIC else 0.1
        for _ in range(100):
            if energy < floor:
                break
            probe *= step
            energy = float(f(probe))
        else:
            raise NoConvergenceError("collapse probe never reached the energy floor")

    lo, hi = DEFAULT_WINDOW[functional]
    points = find_critical_points(f, lo * scale, hi * scale, points_per_decade)
    metastable = any(p.kind is PointKind.LOCAL_MIN for p in points)
    return StabilityVerdict(
        classification=Stability.UNBOUNDED_BELOW if unbounded else Stability.BOUNDED_BELOW,
        witness=(probe, energy),
        metastable=metastable,
        critical_points=tuple(points),
    )


def trap_scale_minimum_exists(
    system: TrapSystem,
    interaction: Interaction,
    functional: Functional = Functional.HARMONIC,
    variant: PrefactorVariant = PrefactorVariant.CORRECTED_PAIR_COUNT,
    points_per_decade: float = PREDICATE_POINTS_PER_DECADE,
) -> bool:
    f = total_energy_function(system, interaction, functional, variant)
    lo, hi = TRAP_SCALE_WINDOW[functional]
    scale = _parameter_scale(functional, system.omega)
    return has_minimum(find_critical_points(f, lo * scale, hi * scale, points_per_decade))


def critical_number(
    interaction: Interaction,
    omega: float = 1.0,
    variant: PrefactorVariant = PrefactorVariant.CORRECTED_PAIR_COUNT,
    n_lo: Optional[int] = None,
    n_hi: int = 10**8,
    functional: Functional = Functional.HARMONIC,
    points_per_decade: float = PREDICATE_POINTS_PER_DECADE,
) -> CriticalNumberResult:
    """Largest particle number for which a trap-scale local minimum exists.

    Integer bisection between ``n_lo`` (must have a minimum) and ``n_hi``
    (must not).  The result is defined relative to the grid policy named in
    ``criterion``: near the threshold the minimum merges with the barrier
    top and only a finite grid can decide.
    """
    if n_lo is None:
        # one particle has a flat harmonic bound, hence no strict minimum
        n_lo = 2 if functional is Functional.HARMONIC else 1
    if not n_lo < n_hi:
        raise BracketInvalidError(f"need n_lo < n_hi, got ({n_lo}, {n_hi})")

    def exists(n: int) -> bool:
        return trap_scale_minimum_exists(TrapSystem(n, omega), interaction, functional, variant, points_per_decade)

    if not exists(n_lo):
        raise BracketInvalidError(f"no trap-scale minimum at n_lo = {n_lo}")
    if exists(n_hi):
        raise BracketInvalidError(f"trap-scale minimum still present at n_hi = {n_hi}")

    lo, hi = n_lo, n_hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if exists(mid):
            lo = mid
        else:
            hi = mid

    wlo, whi = TRAP_SCALE_WINDOW[functional]
    name = functional.parameter_name
    criterion = (
        f"strict discrete slope sign change, {points_per_decade:g} points/decade, "
        f"{name} in [{wlo:g}, {whi:g}] trap units"
    )
    return CriticalNumberResult(n_max=lo, bracket=(lo, hi), criterion=criterion)
