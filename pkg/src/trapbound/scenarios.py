"""Scenario definitions in laboratory units and their conversion to trap units.

A scenario file is a JSON object, for example::

    {
      "name": "li7-hulet",
      "frequency_hz": 145.0,
      "mass_amu": 7.016,
      "n": 1000,
      "variant": "corrected",
      "interaction": {"kind": "scattering", "a_angstrom": -14.5, "r_bohr": 2.0}
    }

``interaction.kind`` is one of ``delta`` (key ``b``, trap units),
``scattering`` (``a_angstrom`` and ``r_bohr``; the depth is calibrated) or
``step`` (``v`` in hbar*Omega and ``r_bohr``).  Unknown keys are rejected.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, replace
from typing import Any, Optional, Union

import numpy as np

from trapbound import units
from trapbound.errors import InvalidInputError, UnreachableBranchError
from trapbound.model import Delta, Interaction, PrefactorVariant, StepWell, TrapSystem
from trapbound.optimize import CriticalNumberResult, critical_number
from trapbound.scattering import CalibrationResult, calibrate_depth

_TOP_KEYS = {"name", "frequency_hz", "mass_amu", "n", "variant", "interaction"}
_INTERACTION_KEYS = {
    "delta": {"kind", "b"},
    "scattering": {"kind", "a_angstrom", "r_bohr"},
    "step": {"kind", "v", "r_bohr"},
}


@dataclass(frozen=True)
class DeltaSpec:
    b: float


@dataclass(frozen=True)
class ScatteringSpec:
    a_angstrom: float
    r_bohr: float


@dataclass(frozen=True)
class StepSpec:
    v: float
    r_bohr: float


InteractionSpec = Union[DeltaSpec, ScatteringSpec, StepSpec]


@dataclass(frozen=True)
class Scenario:
    name: str
    frequency_hz: float
    mass_amu: float
    interaction: InteractionSpec
    n: int = 1
    variant: PrefactorVariant = PrefactorVariant.CORRECTED_PAIR_COUNT

    def to_dict(self) -> dict[str, Any]:
        spec = self.interaction
        if isinstance(spec, DeltaSpec):
            inter = {"kind": "delta", "b": spec.b}
        elif isinstance(spec, ScatteringSpec):
            inter = {"kind": "scattering", "a_angstrom": spec.a_angstrom, "r_bohr": spec.r_bohr}
        else:
            inter = {"kind": "step", "v": spec.v, "r_bohr": spec.r_bohr}
        return {
            "name": self.name,
            "frequency_hz": self.frequency_hz,
            "mass_amu": self.mass_amu,
            "n": self.n,
            "variant": self.variant.value,
            "interaction": inter,
        }


# Trap frequency and range are choices made here: the source only gives the
# scattering length and calls the range "a few Bohr radii".
LI7_HULET = Scenario(
    name="li7-hulet",
    frequency_hz=145.0,
    mass_amu=7.016,
    interaction=ScatteringSpec(a_angstrom=-14.5, r_bohr=2.0),
    n=1000,
)

BUILTIN = {LI7_HULET.name: LI7_HULET}

# Used when neither a scenario nor explicit unit flags are given.
DEFAULT_FREQUENCY_HZ = LI7_HULET.frequency_hz
DEFAULT_MASS_AMU = LI7_HULET.mass_amu


def _number(data: dict, key: str, where: str) -> float:
    value = data.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise InvalidInputError(f"{where}.{key} must be a finite number, got {value!r}")
    return float(value)


def scenario_from_dict(data: dict[str, Any]) -> Scenario:
    if not isinstance(data, dict):
        raise InvalidInputError("scenario must be a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise InvalidInputError(f"unknown scenario keys: {sorted(unknown)}")
    missing = {"frequency_hz", "mass_amu", "interaction"} - set(data)
    if missing:
        raise InvalidInputError(f"missing scenario keys: {sorted(missing)}")

    inter = data["interaction"]
    if not isinstance(inter, dict) or inter.get("kind") not in _INTERACTION_KEYS:
        raise InvalidInputError(
            f"interaction.kind must be one of {sorted(_INTERACTION_KEYS)}, got {inter!r}"
        )
    kind = inter["kind"]
    expected = _INTERACTION_KEYS[kind]
    if set(inter) != expected:
        raise InvalidInputError(
            f"interaction of kind {kind!r} takes exactly the keys {sorted(expected)}, got {sorted(inter)}"
        )
    if kind == "delta":
        spec: InteractionSpec = DeltaSpec(_number(inter, "b", "interaction"))
    elif kind == "scattering":
        spec = ScatteringSpec(_number(inter, "a_angstrom", "interaction"), _number(inter, "r_bohr", "interaction"))
    else:
        spec = StepSpec(_number(inter, "v", "interaction"), _number(inter, "r_bohr", "interaction"))

    n = data.get("n", 1)
    if isinstance(n, bool) or not isinstance(n, int):
        raise InvalidInputError(f"n must be an integer, got {n!r}")
    try:
        variant = PrefactorVariant(data.get("variant", "corrected"))
    except ValueError:
        raise InvalidInputError(f"variant must be 'paper' or 'corrected', got {data.get('variant')!r}") from None
    name = data.get("name", "custom")
    if not isinstance(name, str):
        raise InvalidInputError("name must be a string")
    return Scenario(
        name=name,
        frequency_hz=_number(data, "frequency_hz", "scenario"),
        mass_amu=_number(data, "mass_amu", "scenario"),
        interaction=spec,
        n=n,
        variant=variant,
    )


def load_scenario(name_or_path: Union[str, os.PathLike]) -> Scenario:
    """Return a built-in scenario by name, or parse a JSON scenario file."""
    if str(name_or_path) in BUILTIN:
        return BUILTIN[str(name_or_path)]
    try:
        with open(name_or_path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise InvalidInputError(
            f"{name_or_path!s} is neither a built-in scenario ({', '.join(BUILTIN)}) nor a file"
        ) from None
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"invalid scenario JSON: {exc}") from None
    return scenario_from_dict(data)


@dataclass(frozen=True)
class ResolvedScenario:
    """A scenario expressed in trap units."""

    scenario: Scenario
    context: units.UnitContext
    system: TrapSystem
    interaction: Interaction
    calibration: Optional[CalibrationResult] = None
    a_trap: Optional[float] = None
    r_trap: Optional[float] = None


def resolve(scenario: Scenario) -> ResolvedScenario:
    ctx = units.make_context(scenario.frequency_hz, scenario.mass_amu)
    system = TrapSystem(scenario.n)
    spec = scenario.interaction
    if isinstance(spec, DeltaSpec):
        return ResolvedScenario(scenario, ctx, system, Delta(spec.b))
    if not spec.r_bohr > 0:
        raise InvalidInputError(f"r_bohr must be positive, got {spec.r_bohr!r}")
    r = units.bohr_to_trap(spec.r_bohr, ctx)
    if isinstance(spec, StepSpec):
        return ResolvedScenario(scenario, ctx, system, StepWell(spec.v, r), r_trap=r)
    if spec.a_angstrom >= 0:
        raise UnreachableBranchError(
            f"a = {spec.a_angstrom!r} A >= 0 cannot be reached by a well without a bound state"
        )
    a = units.angstrom_to_trap(spec.a_angstrom, ctx)
    cal = calibrate_depth(a, r)
    return ResolvedScenario(scenario, ctx, system, StepWell(cal.v, r), cal, a_trap=a, r_trap=r)


@dataclass(frozen=True)
class SweepRow:
    r_bohr: float
    r_trap: float
    v: float
    x: float
    result: CriticalNumberResult


@dataclass(frozen=True)
class SweepReport:
    rows: tuple[SweepRow, ...]
    target_n: Optional[int]
    # R (Bohr) at which log N_max interpolates to target_n, if the sweep crosses it
    r_at_target: Optional[float]
    # row whose N_max is closest to target_n, with its relative deviation
    closest: Optional[tuple[float, float]]


def parse_sweep(text: str) -> tuple[float, float, int]:
    """Parse ``lo:hi:steps``."""
    try:
        lo_s, hi_s, steps_s = text.split(":")
        lo, hi, steps = float(lo_s), float(hi_s), int(steps_s)
    except ValueError:
        raise InvalidInputError(f"sweep must look like lo:hi:steps, got {text!r}") from None
    if not (0 < lo <= hi) or steps < 1 or (steps == 1 and lo != hi):
        raise InvalidInputError(f"invalid sweep {text!r}")
    return lo, hi, steps


def critical_number_sweep(
    scenario: Scenario,
    r_lo: float,
    r_hi: float,
    steps: int,
    target_n: Optional[int] = None,
    n_hi: int = 10**8,
) -> SweepReport:
    """Critical particle number as a function of well range (Bohr radii).

    The scenario must specify its interaction by scattering length, so the
    depth is recalibrated at every range.
    """
    if not isinstance(scenario.interaction, ScatteringSpec):
        raise InvalidInputError("an R sweep needs a scenario given by scattering length")
    radii = np.linspace(r_lo, r_hi, steps) if steps > 1 else np.array([r_lo])
    rows = []
    for r_bohr in radii:
        spec = replace(scenario.interaction, r_bohr=float(r_bohr))
        res = resolve(replace(scenario, interaction=spec))
        cn = critical_number(res.interaction, variant=scenario.variant, n_hi=n_hi)
        rows.append(SweepRow(float(r_bohr), res.r_trap, res.interaction.v, res.calibration.x, cn))

    r_at_target = closest = None
    if target_n is not None:
        devs = [abs(row.result.n_max - target_n) / target_n for row in rows]
        k = int(np.argmin(devs))
        closest = (rows[k].r_bohr, devs[k])
        logt = math.log(target_n)
        for a, b in zip(rows[:-1], rows[1:]):
            la, lb = math.log(a.result.n_max), math.log(b.result.n_max)
            if (la - logt) * (lb - logt) <= 0 and la != lb:
                r_at_target = a.r_bohr + (logt - la) / (lb - la) * (b.r_bohr - a.r_bohr)
                break
    return SweepReport(tuple(rows), target_n, r_at_target, closest)
