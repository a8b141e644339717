"""Sampled energy landscapes, barrier reports, and their CSV/SVG output."""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass
from typing import BinaryIO, Iterator, Optional, Sequence, Union

import numpy as np

from trapbound.energy import EnergyBreakdown, breakdown, total_energy_function
from trapbound.errors import InvalidInputError, NoMetastableStateError, TrapboundError
from trapbound.model import Functional, Interaction, PrefactorVariant, StepWell, TrapSystem
from trapbound.optimize import (
    DEFAULT_WINDOW,
    PREDICATE_POINTS_PER_DECADE,
    CriticalPoint,
    Objective,
    PointKind,
    find_critical_points,
    log_grid,
)

CSV_HEADER = "param,total,kinetic_trap,com_correction,interaction"
CSV_COLUMNS = CSV_HEADER.split(",")

Destination = Union[str, os.PathLike, BinaryIO, None]


@dataclass(frozen=True)
class EnergyLandscape:
    parameter_name: str
    locations: np.ndarray
    energies: EnergyBreakdown
    system: TrapSystem
    interaction: Interaction
    variant: PrefactorVariant
    functional: Functional = Functional.HARMONIC

    def __len__(self) -> int:
        return len(self.locations)

    def __iter__(self) -> Iterator[tuple[float, EnergyBreakdown]]:
        e = self.energies
        for i, x in enumerate(self.locations):
            yield float(x), EnergyBreakdown(
                float(e.total[i]), float(e.kinetic_trap[i]), float(e.com_correction[i]), float(e.interaction[i])
            )

    @property
    def totals(self) -> np.ndarray:
        return np.asarray(self.energies.total)


@dataclass(frozen=True)
class BarrierReport:
    local_min: CriticalPoint
    barrier_top: CriticalPoint
    global_min: Optional[CriticalPoint]
    barrier_height: float
    depth_ratio: Optional[float]


def scan(
    system: TrapSystem,
    interaction: Interaction,
    variant: PrefactorVariant = PrefactorVariant.CORRECTED_PAIR_COUNT,
    w_min: Optional[float] = None,
    w_max: Optional[float] = None,
    points_per_decade: float = 50,
    functional: Functional = Functional.HARMONIC,
) -> EnergyLandscape:
    """Evaluate a bound on a log grid, keeping each term of the energy."""
    lo, hi = DEFAULT_WINDOW[functional]
    w_min = lo if w_min is None else w_min
    w_max = hi if w_max is None else w_max
    if not points_per_decade >= 1:
        raise InvalidInputError("points_per_decade must be >= 1")
    grid = log_grid(w_min, w_max, points_per_decade)
    try:
        parts = breakdown(grid, system, interaction, functional, variant)
    except TrapboundError:
        for x in grid:
            try:
                breakdown(float(x), system, interaction, functional, variant)
            except TrapboundError as exc:
                raise type(exc)(f"{functional.parameter_name} = {x!r}: {exc}") from exc
        raise
    arrays = EnergyBreakdown(*(np.asarray(v, dtype=float) for v in
                               (parts.total, parts.kinetic_trap, parts.com_correction, parts.interaction)))
    return EnergyLandscape(functional.parameter_name, grid, arrays, system, interaction, variant, functional)


def barrier_from_points(points: Sequence[CriticalPoint], depth: Optional[float] = None) -> BarrierReport:
    """Assemble a barrier report from ``find_critical_points`` output.

    The metastable minimum is the lowest-lying (in parameter) non-global
    minimum; the barrier is the highest maximum between it and the global
    minimum, or the first maximum past it when the landscape collapses.
    """
    locals_ = [p for p in points if p.kind is PointKind.LOCAL_MIN]
    if not locals_:
        raise NoMetastableStateError("landscape has a single minimum; nothing is metastable")
    local_min = min(locals_, key=lambda p: p.location)
    global_min = next((p for p in points if p.kind is PointKind.GLOBAL_MIN), None)
    maxima = [p for p in points if p.kind is PointKind.LOCAL_MAX]
    if global_min is not None:
        lo, hi = sorted((local_min.location, global_min.location))
        between = [p for p in maxima if lo < p.location < hi]
    else:
        between = [p for p in maxima if p.location > local_min.location][:1]
    if not between:
        raise NoMetastableStateError("no barrier separates the local minimum")
    top = max(between, key=lambda p: p.energy)
    height = top.energy - local_min.energy
    ratio = height / abs(depth) if depth else None
    return BarrierReport(local_min, top, global_min, height, ratio)


def objective_barrier(
    objective: Objective,
    w_min: float,
    w_max: float,
    points_per_decade: float = PREDICATE_POINTS_PER_DECADE,
    depth: Optional[float] = None,
) -> BarrierReport:
    return barrier_from_points(find_critical_points(objective, w_min, w_max, points_per_decade), depth)


def barrier_report(
    system: TrapSystem,
    interaction: StepWell,
    variant: PrefactorVariant = PrefactorVariant.CORRECTED_PAIR_COUNT,
    w_min: float = 1e-3,
    w_max: float = 1e12,
    points_per_decade: float = PREDICATE_POINTS_PER_DECADE,
) -> BarrierReport:
    """Barrier between the trap-scale minimum and the collapsed cluster minimum."""
    if not isinstance(interaction, StepWell):
        raise InvalidInputError("barrier_report needs a StepWell interaction")
    f = total_energy_function(system, interaction, Functional.HARMONIC, variant)
    return objective_barrier(f, w_min * system.omega, w_max * system.omega, points_per_decade, interaction.v)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _emit(data: bytes, destination: Destination) -> bytes:
    if destination is None:
        return data
    if hasattr(destination, "write"):
        destination.write(data)
    else:
        with open(destination, "wb") as fh:
            fh.write(data)
    return data


def export_csv(landscape: EnergyLandscape, destination: Destination = None) -> bytes:
    """Write the landscape as CSV; returns the bytes written."""
    e = landscape.energies
    columns = (landscape.locations, e.total, e.kinetic_trap, e.com_correction, e.interaction)
    lines = [CSV_HEADER]
    lines.extend(",".join(_fmt(c[i]) for c in columns) for i in range(len(landscape)))
    return _emit(("\n".join(lines) + "\n").encode("ascii"), destination)


def read_csv(source: Union[str, os.PathLike, bytes]) -> dict[str, np.ndarray]:
    """Parse CSV written by :func:`export_csv` into column arrays."""
    if isinstance(source, bytes):
        text = source.decode("ascii")
    else:
        with open(source, encoding="ascii") as fh:
            text = fh.read()
    rows = text.rstrip("\n").split("\n")
    if rows[0] != CSV_HEADER:
        raise InvalidInputError(f"unexpected CSV header {rows[0]!r}")
    values = np.array([[float(v) for v in row.split(",")] for row in rows[1:]], dtype=float)
    values = values.reshape(-1, len(CSV_COLUMNS))
    return {name: values[:, i] for i, name in enumerate(CSV_COLUMNS)}


# --- SVG -------------------------------------------------------------------

_W, _H = 800, 500
_LEFT, _RIGHT, _TOP, _BOTTOM = 90, 30, 30, 60
_KIND_COLOURS = {
    PointKind.LOCAL_MIN: "#1f77b4",
    PointKind.GLOBAL_MIN: "#2ca02c",
    PointKind.LOCAL_MAX: "#d62728",
    PointKind.BOUNDARY_DECREASING: "#9467bd",
}


def _uses_symlog(totals: np.ndarray) -> bool:
    if totals.min() < 0 < totals.max():
        return True
    mags = np.abs(totals[totals != 0])
    return mags.size > 0 and mags.max() / mags.min() > 1e6


def _symlog(y: np.ndarray) -> np.ndarray:
    return np.sign(y) * np.log10(1.0 + np.abs(y))


def render_svg(
    landscape: EnergyLandscape,
    critical_points: Sequence[CriticalPoint] = (),
    destination: Destination = None,
) -> bytes:
    """Plot the total energy against the variational parameter as standalone SVG.

    The abscissa is log10 of the parameter.  The ordinate switches to a
    symmetric log, sign(E) log10(1 + |E|), when the energies change sign or
    span more than six decades.
    """
    if len(landscape) < 2:
        raise InvalidInputError("need at least two points to plot")
    xs = np.log10(landscape.locations)
    totals = landscape.totals
    symlog = _uses_symlog(totals)
    transform = _symlog if symlog else (lambda y: np.asarray(y, dtype=float))
    ys = transform(totals)

    x_lo, x_hi = float(xs[0]), float(xs[-1])
    y_lo, y_hi = float(ys.min()), float(ys.max())
    if y_hi - y_lo < 1e-12 * max(1.0, abs(y_hi)):
        pad = max(0.5, 0.5 * abs(y_hi))
        y_lo, y_hi = y_lo - pad, y_hi + pad
    else:
        pad = 0.05 * (y_hi - y_lo)
        y_lo, y_hi = y_lo - pad, y_hi + pad

    def px(x):
        return _LEFT + (x - x_lo) / (x_hi - x_lo) * (_W - _LEFT - _RIGHT)

    def py(y):
        return _TOP + (y_hi - y) / (y_hi - y_lo) * (_H - _TOP - _BOTTOM)

    out = io.StringIO()
    out.write(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">\n'
    )
    out.write(f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>\n')
    x0, y0, x1, y1 = _LEFT, _H - _BOTTOM, _W - _RIGHT, _TOP
    out.write(f'<path class="axes" d="M{x0} {y1} L{x0} {y0} L{x1} {y0}" stroke="black" fill="none"/>\n')

    for dec in range(math.ceil(x_lo), math.floor(x_hi) + 1):
        x = px(dec)
        out.write(f'<line x1="{x:.3f}" y1="{y0}" x2="{x:.3f}" y2="{y0 + 5}" stroke="black"/>\n')
        out.write(f'<text x="{x:.3f}" y="{y0 + 20}" font-size="11" text-anchor="middle">1e{dec}</text>\n')
    for frac in (0.0, 0.5, 1.0):
        yv = y_lo + frac * (y_hi - y_lo)
        label = _fmt_energy(yv, symlog)
        out.write(f'<text x="{x0 - 6}" y="{py(yv) + 4:.3f}" font-size="11" text-anchor="end">{label}</text>\n')

    name = "w / Omega" if landscape.parameter_name == "w" else "sigma / a_ho"
    ylabel = "E / hbar Omega" + (" (symlog)" if symlog else "")
    out.write(f'<text x="{(x0 + x1) / 2:.1f}" y="{_H - 15}" font-size="13" text-anchor="middle">{name}</text>\n')
    out.write(
        f'<text x="15" y="{(y0 + y1) / 2:.1f}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 15 {(y0 + y1) / 2:.1f})">{ylabel}</text>\n'
    )

    coords = " ".join(f"{px(x):.3f},{py(y):.3f}" for x, y in zip(xs, ys))
    out.write(f'<polyline class="landscape" points="{coords}" fill="none" stroke="black" stroke-width="1.5"/>\n')

    for p in critical_points:
        cx = px(math.log10(p.location))
        cy = py(float(transform(np.array([p.energy]))[0]))
        colour = _KIND_COLOURS[p.kind]
        out.write(
            f'<circle class="critical-point" cx="{cx:.3f}" cy="{cy:.3f}" r="5" fill="{colour}">'
            f"<title>{p.kind.value} at {p.location:.6g}, E = {p.energy:.6g}</title></circle>\n"
        )
    out.write("</svg>\n")
    return _emit(out.getvalue().encode("utf-8"), destination)


def _fmt_energy(y: float, symlog: bool) -> str:
    if symlog:
        y = math.copysign(10 ** abs(y) - 1.0, y)
    return f"{y:.3g}"
