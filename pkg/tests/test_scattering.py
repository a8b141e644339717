import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trapbound.errors import InvalidInputError, ResonanceError, UnreachableBranchError
from trapbound.scattering import calibrate_depth, scattering_length


def test_quarter_pi_well():
    assert scattering_length((math.pi / 4) ** 2, 1.0) == pytest.approx(1 - 4 / math.pi, rel=1e-14)
    assert scattering_length((math.pi / 4) ** 2, 1.0) == pytest.approx(-0.27324, abs=1e-5)


@pytest.mark.parametrize("x", [1e-6, 1e-4, 5e-3, 2e-2])
def test_weak_well_born_limit(x):
    r = 2.5
    a = scattering_length((x / r) ** 2, r)
    assert a < 0
    assert a == pytest.approx(-r * x * x / 3, rel=x * x)


def test_approaching_resonance_diverges():
    r = 1.0
    values = [scattering_length((math.pi / 2 - d) ** 2, r) for d in (1e-2, 1e-4, 1e-6)]
    assert values[0] > values[1] > values[2]
    assert values[2] < -1e5


@pytest.mark.parametrize("k", [0, 1, 2])
def test_resonance_error(k):
    x = math.pi / 2 + k * math.pi
    with pytest.raises(ResonanceError):
        scattering_length(x * x, 1.0)


def test_deeper_branch_is_evaluated():
    x = 2.0
    assert scattering_length(x * x, 1.0) == pytest.approx(1 - math.tan(2.0) / 2.0, rel=1e-14)


@pytest.mark.parametrize("v, r", [(0, 1), (-1, 1), (1, 0)])
def test_scattering_length_validation(v, r):
    with pytest.raises(InvalidInputError):
        scattering_length(v, r)


def test_calibrate_inverts_quarter_pi():
    res = calibrate_depth(1 - 4 / math.pi, 1.0)
    assert res.v == pytest.approx((math.pi / 4) ** 2, rel=1e-12)
    assert res.v == pytest.approx(0.61685, abs=1e-5)
    assert res.residual <= 1e-10
    assert 0 < res.x < math.pi / 2


def test_calibrate_li7_order_of_magnitude(li7):
    cal = li7.calibration
    assert 1e8 <= cal.v <= 1e10
    assert cal.residual <= 1e-10
    # trap-unit a and R rounded to four digits
    assert 1e8 <= calibrate_depth(-4.60e-4, 3.358e-5).v <= 1e10


@pytest.mark.parametrize("a", [0.0, 1.0, 1e-9])
def test_calibrate_rejects_non_negative(a):
    with pytest.raises(UnreachableBranchError):
        calibrate_depth(a, 1.0)


def test_calibrate_rejects_bad_range():
    with pytest.raises(InvalidInputError):
        calibrate_depth(-1.0, 0.0)


ratios = st.floats(min_value=-1e4, max_value=-1e-3)


@settings(max_examples=300)
@given(ratio=ratios, r=st.floats(min_value=1e-6, max_value=10))
def test_calibrate_round_trip(ratio, r):
    a = ratio * r
    res = calibrate_depth(a, r)
    assert res.x < math.pi / 2
    assert res.residual <= 1e-10
    assert scattering_length(res.v, r) == pytest.approx(a, rel=1e-8)


@given(r1=ratios, r2=ratios)
def test_calibrated_depth_grows_with_attraction(r1, r2):
    if r1 == r2:
        return
    hi, lo = max(r1, r2), min(r1, r2)  # lo is more negative
    assert calibrate_depth(lo, 1.0).v > calibrate_depth(hi, 1.0).v
