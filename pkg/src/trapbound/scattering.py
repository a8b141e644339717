"""s-wave scattering length of an attractive square well, and its inverse.

Two identical bosons of unit mass have reduced mass 1/2, so the interior
wave number of a well of depth ``v`` is ``k0 = sqrt(v)`` and the scattering
length is ``a = r * (1 - tan(x)/x)`` with ``x = k0 * r``.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

from scipy import optimize

from trapbound.errors import InvalidInputError, NoConvergenceError, ResonanceError, UnreachableBranchError

HALF_PI = 0.5 * math.pi
RESONANCE_GAP = 1e-9
MAX_ITERATIONS = 200


@dataclass(frozen=True)
class CalibrationResult:
    v: float
    x: float
    a_achieved: float
    iterations: int
    residual: float


def _one_minus_tan_ratio(x: float) -> float:
    if x < 1e-2:
        x2 = x * x
        # series of 1 - tan(x)/x
        return -x2 * (1.0 / 3.0 + x2 * (2.0 / 15.0 + x2 * (17.0 / 315.0 + x2 * 62.0 / 2835.0)))
    return 1.0 - math.tan(x) / x


def scattering_length(v: float, r: float) -> float:
    """Scattering length of a well of depth ``v`` (> 0) and range ``r`` (> 0)."""
    if not (v > 0 and math.isfinite(v)):
        raise InvalidInputError(f"well depth must be positive, got {v!r}")
    if not (r > 0 and math.isfinite(r)):
        raise InvalidInputError(f"well range must be positive, got {r!r}")
    x = math.sqrt(v) * r
    k = round((x - HALF_PI) / math.pi)
    if k >= 0 and abs(x - (HALF_PI + k * math.pi)) < RESONANCE_GAP:
        raise ResonanceError(f"x = {x!r} is on a zero-energy resonance")
    return r * _one_minus_tan_ratio(x)


def calibrate_depth(a_target: float, r: float) -> CalibrationResult:
    """Find the well depth giving scattering length ``a_target`` at range ``r``.

    Only the branch without a two-body bound state (0 < x < pi/2) is searched;
    there ``a`` decreases monotonically from 0 to -inf, so ``a_target`` must
    be negative.
    """
    if not (r > 0 and math.isfinite(r)):
        raise InvalidInputError(f"well range must be positive, got {r!r}")
    if not math.isfinite(a_target):
        raise InvalidInputError(f"target scattering length must be finite, got {a_target!r}")
    if a_target >= 0:
        raise UnreachableBranchError(
            f"a = {a_target!r} >= 0 is unreachable on the no-bound-state branch"
        )

    ratio = a_target / r

    def residual(x: float) -> float:
        return _one_minus_tan_ratio(x) - ratio

    if -ratio > 10.0:
        lo, hi = HALF_PI - 1.0, HALF_PI - 1e-12
    else:
        lo, hi = 1e-12, HALF_PI - 1e-12
    if not residual(lo) > 0 > residual(hi):
        raise NoConvergenceError(f"no root bracketed for a/r = {ratio!r}")

    try:
        x, info = optimize.brentq(
            residual, lo, hi, xtol=1e-300, rtol=4 * sys.float_info.epsilon, maxiter=MAX_ITERATIONS, full_output=True
        )
    except RuntimeError as exc:
        raise NoConvergenceError(str(exc)) from exc
    if not info.converged:
        raise NoConvergenceError(f"calibration did not converge: {info.flag}")

    v = (x / r) ** 2
    a = scattering_length(v, r)
    return CalibrationResult(
        v=v,
        x=x,
        a_achieved=a,
        iterations=info.iterations,
        residual=abs(a - a_target) / abs(a_target),
    )
