"""Conversions between laboratory units and trap units (hbar = m = Omega = 1).

Lengths are measured in the oscillator length ``a_ho = sqrt(hbar / (m Omega))``
and energies in ``hbar Omega``.  Constants are CODATA 2018.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from trapbound.errors import InvalidInputError

HBAR_SI = 1.054571817e-34  # J s
AMU_SI = 1.66053906660e-27  # kg
BOHR_ANGSTROM = 0.529177210903
ANGSTROM_SI = 1e-10  # m
BOHR_SI = BOHR_ANGSTROM * ANGSTROM_SI


@dataclass(frozen=True)
class UnitContext:
    """Trap frequency and particle mass fixing the trap-unit scales."""

    omega_si: float
    mass_si: float

    def __post_init__(self):
        if not (self.omega_si > 0 and math.isfinite(self.omega_si)):
            raise InvalidInputError(f"omega_si must be positive, got {self.omega_si!r}")
        if not (self.mass_si > 0 and math.isfinite(self.mass_si)):
            raise InvalidInputError(f"mass_si must be positive, got {self.mass_si!r}")

    @property
    def a_ho_si(self) -> float:
        """Oscillator length in metres."""
        return math.sqrt(HBAR_SI / (self.mass_si * self.omega_si))

    @property
    def energy_quantum_si(self) -> float:
        """hbar * Omega in joules."""
        return HBAR_SI * self.omega_si


def make_context(frequency_hz: float, mass_amu: float) -> UnitContext:
    """Build a context from a trap frequency in Hz and a mass in amu."""
    if not (frequency_hz > 0):
        raise InvalidInputError(f"frequency_hz must be positive, got {frequency_hz!r}")
    if not (mass_amu > 0):
        raise InvalidInputError(f"mass_amu must be positive, got {mass_amu!r}")
    return UnitContext(omega_si=2.0 * math.pi * frequency_hz, mass_si=mass_amu * AMU_SI)


def length_to_trap(x_si: float, ctx: UnitContext) -> float:
    return x_si / ctx.a_ho_si


def energy_to_trap(e_si: float, ctx: UnitContext) -> float:
    return e_si / ctx.energy_quantum_si


def angstrom_to_trap(x_angstrom: float, ctx: UnitContext) -> float:
    return length_to_trap(x_angstrom * ANGSTROM_SI, ctx)


def bohr_to_trap(x_bohr: float, ctx: UnitContext) -> float:
    return length_to_trap(x_bohr * BOHR_SI, ctx)


def trap_to_angstrom(x_trap: float, ctx: UnitContext) -> float:
    return x_trap * ctx.a_ho_si / ANGSTROM_SI
