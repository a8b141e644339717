import io
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from trapbound.energy import total_energy_function
from trapbound.errors import InvalidInputError, NoMetastableStateError
from trapbound.landscape import (
    CSV_HEADER,
    barrier_report,
    export_csv,
    objective_barrier,
    read_csv,
    render_svg,
    scan,
)
from trapbound.model import Delta, Functional, PrefactorVariant, StepWell, TrapSystem
from trapbound.optimize import PointKind, find_critical_points

CORRECTED = PrefactorVariant.CORRECTED_PAIR_COUNT
SVG_NS = "{http://www.w3.org/2000/svg}"


def test_scan_single_particle_is_flat():
    land = scan(TrapSystem(1), StepWell(3.0, 0.2), CORRECTED, 1e-3, 1e3, 10)
    assert len(land) == 61
    assert np.all(np.abs(land.totals - 1.5) <= 1e-12)


def test_scan_grid_size_and_order():
    land = scan(TrapSystem(2), Delta(-1.0), CORRECTED, 1.0, 1e3, 100)
    assert len(land) == 301
    assert land.locations[0] == 1.0 and land.locations[-1] == 1e3
    assert np.all(np.diff(land.locations) > 0)


def test_scan_collapsing_landscape_decreases_at_large_w():
    land = scan(TrapSystem(2), Delta(-1.0), CORRECTED, 1e-3, 1e12, 20)
    tail = land.totals[land.locations > 1e3]
    assert np.all(np.diff(tail) < 0)


def test_scan_breakdown_invariant():
    land = scan(TrapSystem(50), StepWell(1e4, 0.01), CORRECTED, 1e-3, 1e12, 20)
    e = land.energies
    scale = np.max(np.abs([e.kinetic_trap, e.com_correction, e.interaction, e.total]), axis=0)
    assert np.all(np.abs(e.total - e.component_sum()) <= 1e-14 * scale)
    loc, parts = next(iter(land))
    assert loc == land.locations[0] and parts.total == e.total[0]


def test_scan_gaussian_parameter_name():
    land = scan(TrapSystem(3), Delta(-0.1), CORRECTED, 0.1, 10, 10, Functional.GAUSSIAN)
    assert land.parameter_name == "sigma"
    assert np.all(land.energies.com_correction == 0)


def test_scan_validation():
    with pytest.raises(InvalidInputError):
        scan(TrapSystem(2), Delta(-1.0), CORRECTED, 10.0, 1.0, 10)
    with pytest.raises(InvalidInputError):
        scan(TrapSystem(2), Delta(-1.0), CORRECTED, 1.0, 10.0, 0.5)
    with pytest.raises(InvalidInputError):
        scan(TrapSystem(2), StepWell(1.0, 1.0), CORRECTED, 0.1, 10, 10, Functional.GAUSSIAN)


# --- barrier -------------------------------------------------------------------


def test_li7_barrier_report_structure(li7):
    br = barrier_report(li7.system, li7.interaction)
    assert br.global_min is not None
    assert br.barrier_height >= 0
    assert br.local_min.location < br.barrier_top.location < br.global_min.location
    assert br.depth_ratio == pytest.approx(br.barrier_height / li7.interaction.v, rel=1e-15)
    # single source of truth: the report reuses the critical-point search verbatim
    f = total_energy_function(li7.system, li7.interaction)
    pts = find_critical_points(f, 1e-3, 1e12, 200)
    assert br.local_min in pts and br.barrier_top in pts and br.global_min in pts


def test_weak_well_has_no_metastable_state():
    with pytest.raises(NoMetastableStateError):
        barrier_report(TrapSystem(2), StepWell(0.1, 0.1))


def test_barrier_needs_step_well():
    with pytest.raises(InvalidInputError):
        barrier_report(TrapSystem(2), Delta(-1.0))


def test_barrier_for_collapsing_landscape():
    f = total_energy_function(TrapSystem(2), Delta(-1.0))
    br = objective_barrier(f, 1e-3, 1e12)
    assert br.global_min is None
    assert br.barrier_top.kind is PointKind.LOCAL_MAX
    assert br.depth_ratio is None


@pytest.mark.parametrize("shift", [-1e6, -3.5, 0.25, 1e4])
def test_barrier_height_shift_invariant(li7, shift):
    f = total_energy_function(TrapSystem(100), li7.interaction)
    base = objective_barrier(f, 1e-3, 1e12)
    moved = objective_barrier(lambda w: f(w) + shift, 1e-3, 1e12)
    assert moved.barrier_height == pytest.approx(base.barrier_height, rel=1e-9)
    assert moved.barrier_top.location == pytest.approx(base.barrier_top.location, rel=1e-6)


# --- CSV -----------------------------------------------------------------------


def test_csv_layout():
    land = scan(TrapSystem(2), Delta(-1.0), CORRECTED, 1.0, 100.0, 1)
    assert len(land) == 3
    data = export_csv(land)
    text = data.decode("ascii")
    assert "\r" not in text
    lines = text.split("\n")
    assert lines[-1] == ""
    assert len(lines[:-1]) == 4
    assert lines[0] == CSV_HEADER == "param,total,kinetic_trap,com_correction,interaction"


def test_csv_single_particle_totals():
    land = scan(TrapSystem(1), Delta(-2.0), CORRECTED, 1e-3, 1e3, 10)
    cols = read_csv(export_csv(land))
    assert np.all(np.abs(cols["total"] - 1.5) <= 1e-12)


def test_csv_round_trip_is_bit_identical(tmp_path, li7):
    land = scan(li7.system, li7.interaction, CORRECTED, 1e-3, 1e12, 30)
    path = tmp_path / "land.csv"
    written = export_csv(land, path)
    assert path.read_bytes() == written
    cols = read_csv(path)
    e = land.energies
    for name, ref in zip(cols, (land.locations, e.total, e.kinetic_trap, e.com_correction, e.interaction)):
        assert np.array_equal(cols[name], ref), name


def test_csv_to_file_object():
    land = scan(TrapSystem(2), Delta(-1.0), CORRECTED, 1.0, 10.0, 5)
    buf = io.BytesIO()
    assert export_csv(land, buf) == buf.getvalue()


def test_read_csv_rejects_foreign_header():
    with pytest.raises(InvalidInputError):
        read_csv(b"a,b\n1,2\n")


# --- SVG -----------------------------------------------------------------------


def _polyline_ys(svg: bytes):
    root = ET.fromstring(svg)
    line = root.find(f"{SVG_NS}polyline")
    return [float(p.split(",")[1]) for p in line.get("points").split()]


def test_svg_root_and_markers(li7):
    land = scan(li7.system, li7.interaction, CORRECTED, 1e-3, 1e12, 20)
    pts = find_critical_points(total_energy_function(li7.system, li7.interaction), 1e-3, 1e12, 200)
    svg = render_svg(land, pts)
    assert svg.startswith(b"<svg")
    root = ET.fromstring(svg)
    assert root.tag == f"{SVG_NS}svg"
    circles = [c for c in root.iter(f"{SVG_NS}circle") if c.get("class") == "critical-point"]
    assert len(circles) == len(pts) == 3
    assert b"symlog" in svg


def test_svg_flat_landscape_is_horizontal(tmp_path):
    land = scan(TrapSystem(1), Delta(-1.0), CORRECTED, 1e-3, 1e3, 10)
    path = tmp_path / "flat.svg"
    svg = render_svg(land, [], path)
    assert path.read_bytes() == svg
    ys = _polyline_ys(svg)
    assert len(ys) == len(land) and len(set(ys)) == 1
    assert b">1.5<" in svg  # the ordinate label at the line
    assert b"symlog" not in svg


def test_svg_needs_two_points():
    land = scan(TrapSystem(2), Delta(-1.0), CORRECTED, 1.0, 100.0, 1)
    short = type(land)(land.parameter_name, land.locations[:1], land.energies, land.system,
                       land.interaction, land.variant)
    with pytest.raises(InvalidInputError):
        render_svg(short)
