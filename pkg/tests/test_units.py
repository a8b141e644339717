import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trapbound import units
from trapbound.errors import InvalidInputError


def test_li7_oscillator_length(li7_ctx):
    expected = math.sqrt(1.054571817e-34 / (7.016 * 1.66053906660e-27 * 2 * math.pi * 145.0))
    assert li7_ctx.a_ho_si == pytest.approx(expected, rel=1e-15)
    assert li7_ctx.a_ho_si == pytest.approx(3.152e-6, rel=1e-3)


def test_li7_angular_frequency(li7_ctx):
    assert li7_ctx.omega_si == pytest.approx(911.06, abs=0.01)
    assert li7_ctx.omega_si == 2 * math.pi * 145.0


@pytest.mark.parametrize("freq, mass", [(0, 7), (-1, 7), (145, 0), (145, -7.0)])
def test_make_context_rejects_non_positive(freq, mass):
    with pytest.raises(InvalidInputError):
        units.make_context(freq, mass)


def test_length_conversions(li7_ctx):
    assert units.length_to_trap(-14.5e-10, li7_ctx) == pytest.approx(-4.60e-4, rel=1e-3)
    assert units.length_to_trap(li7_ctx.a_ho_si, li7_ctx) == 1.0
    two_bohr = 2 * 0.529177210903e-10
    assert units.length_to_trap(two_bohr, li7_ctx) == pytest.approx(3.358e-5, rel=1e-3)
    assert units.bohr_to_trap(2.0, li7_ctx) == pytest.approx(units.length_to_trap(two_bohr, li7_ctx), rel=1e-15)
    assert units.angstrom_to_trap(-14.5, li7_ctx) == pytest.approx(-14.5e-10 / li7_ctx.a_ho_si, rel=1e-15)


def test_energy_conversions(li7_ctx):
    hw = li7_ctx.energy_quantum_si
    assert hw == pytest.approx(9.608e-32, rel=1e-3)
    assert units.energy_to_trap(hw, li7_ctx) == 1.0
    assert units.energy_to_trap(0.0, li7_ctx) == 0.0
    assert units.energy_to_trap(9.57e-23, li7_ctx) == pytest.approx(9.96e8, rel=1e-3)


positive = st.floats(min_value=1e-3, max_value=1e6, allow_nan=False)


@given(x=st.floats(min_value=-1e-3, max_value=1e-3, allow_nan=False), freq=positive, mass=positive)
def test_length_round_trip(x, freq, mass):
    ctx = units.make_context(freq, mass)
    assert units.length_to_trap(x, ctx) * ctx.a_ho_si == pytest.approx(x, rel=1e-14, abs=0)


@given(freq=positive, mass=positive)
def test_frequency_scaling(freq, mass):
    one = units.make_context(freq, mass)
    two = units.make_context(2 * freq, mass)
    x, e = 1.3e-9, 4.2e-30
    assert units.energy_to_trap(e, two) == pytest.approx(0.5 * units.energy_to_trap(e, one), rel=1e-14)
    assert units.length_to_trap(x, two) == pytest.approx(math.sqrt(2) * units.length_to_trap(x, one), rel=1e-14)
