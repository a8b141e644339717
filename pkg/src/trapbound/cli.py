"""Command-line interface.

Exit codes: 0 ok, 2 invalid input, 3 no convergence, 4 the landscape is
unbounded below (``minimize`` only).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from typing import Any, Optional, Sequence

import numpy as np

from trapbound import units
from trapbound.energy import total_energy_function
from trapbound.errors import InvalidInputError, NoConvergenceError, NoMetastableStateError
from trapbound.landscape import barrier_report, export_csv, render_svg, scan
from trapbound.model import Functional, PrefactorVariant, StepWell
from trapbound.optimize import (
    DEFAULT_WINDOW,
    PREDICATE_POINTS_PER_DECADE,
    CriticalPoint,
    classify_stability,
    critical_number,
    find_critical_points,
)
from trapbound.scattering import scattering_length
from trapbound.scenarios import (
    DEFAULT_FREQUENCY_HZ,
    DEFAULT_MASS_AMU,
    DeltaSpec,
    ResolvedScenario,
    Scenario,
    ScatteringSpec,
    StepSpec,
    critical_number_sweep,
    load_scenario,
    parse_sweep,
    resolve,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NO_CONVERGENCE = 3
EXIT_UNBOUNDED = 4

EXPLORATORY_NOTE = "exploratory: the well range R is not fixed by the source data"


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", help="built-in scenario name (li7-hulet) or JSON scenario file")
    p.add_argument("--n", type=int, help="particle number")
    p.add_argument("--omega-hz", type=float, help="trap frequency in Hz")
    p.add_argument("--mass-amu", type=float, help="particle mass in amu")
    p.add_argument("--interaction", choices=("delta", "step"))
    p.add_argument("--b", type=float, help="contact strength (trap units)")
    p.add_argument("--v", type=float, help="well depth in units of hbar*Omega")
    p.add_argument("--r-bohr", type=float, help="well range in Bohr radii")
    p.add_argument("--a-angstrom", type=float, help="target scattering length in Angstrom")
    p.add_argument("--variant", choices=("paper", "corrected"))
    p.add_argument("--functional", choices=("ev", "k"), default="ev",
                   help="harmonic-model bound (ev, parameter w) or Gaussian bound (k, parameter sigma)")
    p.add_argument("--json", dest="json_out", help="write the report as JSON to this file")


def _add_window(p: argparse.ArgumentParser, default_ppd: float) -> None:
    p.add_argument("--wmin", type=float, help="lower end of the parameter window")
    p.add_argument("--wmax", type=float, help="upper end of the parameter window")
    p.add_argument("--points-per-decade", type=float, default=default_ppd)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trapbound",
        description="Variational energy bounds for attractive bosons in a harmonic trap.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="sample the energy landscape and list its critical points")
    _add_common(p)
    _add_window(p, 50)
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--svg", help="SVG output path")

    p = sub.add_parser("minimize", help="report minima and stability of the landscape")
    _add_common(p)
    _add_window(p, PREDICATE_POINTS_PER_DECADE)

    p = sub.add_parser("critical-n", help="largest N with a trap-scale local minimum")
    _add_common(p)
    p.add_argument("--n-lo", type=int)
    p.add_argument("--n-hi", type=int, default=10**8)
    p.add_argument("--r-sweep", help="lo:hi:steps range sweep in Bohr radii")
    p.add_argument("--target-n", type=int, help="reference N_max to locate in an R sweep")

    p = sub.add_parser("calibrate", help="well depth reproducing a scattering length")
    _add_common(p)
    return parser


def scenario_from_args(args: argparse.Namespace) -> Scenario:
    """Merge an optional scenario with command-line overrides."""
    if args.scenario:
        base = load_scenario(args.scenario)
    else:
        base = Scenario("custom", DEFAULT_FREQUENCY_HZ, DEFAULT_MASS_AMU, DeltaSpec(0.0))
        if args.interaction is None and args.b is None and args.v is None and args.a_angstrom is None:
            raise InvalidInputError("no interaction given: use --scenario or --interaction")

    spec = base.interaction
    style = args.interaction
    if style is None:
        if args.b is not None:
            style = "delta"
        elif args.v is not None or args.a_angstrom is not None:
            style = "step"
    if style == "delta":
        b = args.b if args.b is not None else getattr(spec, "b", None)
        if b is None:
            raise InvalidInputError("--interaction delta needs --b")
        spec = DeltaSpec(b)
    elif style == "step" or args.r_bohr is not None:
        if args.v is not None and args.a_angstrom is not None:
            raise InvalidInputError("give either --v or --a-angstrom, not both")
        r = args.r_bohr if args.r_bohr is not None else getattr(spec, "r_bohr", None)
        if r is None:
            raise InvalidInputError("a step well needs --r-bohr")
        if args.v is not None:
            spec = StepSpec(args.v, r)
        elif args.a_angstrom is not None:
            spec = ScatteringSpec(args.a_angstrom, r)
        elif isinstance(spec, StepSpec):
            spec = StepSpec(spec.v, r)
        elif isinstance(spec, ScatteringSpec):
            spec = ScatteringSpec(spec.a_angstrom, r)
        else:
            raise InvalidInputError("a step well needs --v or --a-angstrom")

    changes: dict[str, Any] = {"interaction": spec}
    if args.n is not None:
        changes["n"] = args.n
    if args.omega_hz is not None:
        changes["frequency_hz"] = args.omega_hz
    if args.mass_amu is not None:
        changes["mass_amu"] = args.mass_amu
    if args.variant is not None:
        changes["variant"] = PrefactorVariant(args.variant)
    return replace(base, **changes)


def _point_dict(p: CriticalPoint) -> dict[str, Any]:
    return {"kind": p.kind.value, "location": p.location, "energy": p.energy, "curvature_sign": p.curvature_sign}


def _interaction_dict(res: ResolvedScenario) -> dict[str, Any]:
    inter = res.interaction
    if isinstance(inter, StepWell):
        out = {"kind": "step", "v": inter.v, "r": inter.r}
    else:
        out = {"kind": "delta", "b": inter.b}
    if res.calibration is not None:
        out["calibration_x"] = res.calibration.x
    return out


def _print_points(points: Sequence[CriticalPoint], name: str) -> None:
    if not points:
        print("  (no critical points)")
        return
    print(f"  {'kind':<20} {name + ' (trap units)':>24} {'E / hbar Omega':>24}")
    for p in points:
        print(f"  {p.kind.value:<20} {p.location:>24.10g} {p.energy:>24.12g}")


def _write_json(path: Optional[str], report: dict[str, Any]) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _window(args: argparse.Namespace, functional: Functional) -> tuple[float, float]:
    lo, hi = DEFAULT_WINDOW[functional]
    return (args.wmin if args.wmin is not None else lo, args.wmax if args.wmax is not None else hi)


def _header(res: ResolvedScenario, functional: Functional) -> dict[str, Any]:
    return {
        "scenario": res.scenario.to_dict(),
        "functional": functional.value,
        "interaction_trap_units": _interaction_dict(res),
    }


def cmd_scan(args: argparse.Namespace) -> int:
    functional = Functional(args.functional)
    res = resolve(scenario_from_args(args))
    w_min, w_max = _window(args, functional)
    land = scan(res.system, res.interaction, res.scenario.variant, w_min, w_max,
                args.points_per_decade, functional)
    f = total_energy_function(res.system, res.interaction, functional, res.scenario.variant)
    points = find_critical_points(f, w_min, w_max, max(args.points_per_decade, 50))

    if args.out:
        export_csv(land, args.out)
    if args.svg:
        render_svg(land, points, args.svg)

    totals = land.totals
    flat = bool(np.all(totals == totals[0]))
    print(f"scenario {res.scenario.name}: N = {res.system.n}, {len(land)} grid points "
          f"in {functional.parameter_name} = [{w_min:g}, {w_max:g}]")
    if flat:
        print(f"  flat landscape: E = {totals[0]:.12g} hbar Omega everywhere")
    _print_points(points, functional.parameter_name)

    report = _header(res, functional)
    report.update({
        "grid_points": len(land),
        "window": [w_min, w_max],
        "flat": flat,
        "critical_points": [_point_dict(p) for p in points],
    })
    _write_json(args.json_out, report)
    return EXIT_OK


def cmd_minimize(args: argparse.Namespace) -> int:
    functional = Functional(args.functional)
    res = resolve(scenario_from_args(args))
    variant = res.scenario.variant
    verdict = classify_stability(res.system, res.interaction, functional, variant,
                                 points_per_decade=args.points_per_decade)
    w_min, w_max = _window(args, functional)
    f = total_energy_function(res.system, res.interaction, functional, variant)
    if args.wmin is None and args.wmax is None:
        points = list(verdict.critical_points)
    else:
        points = find_critical_points(f, w_min, w_max, args.points_per_decade)
    minima = [p for p in points if p.is_minimum]

    report = _header(res, functional)
    report.update({
        "classification": verdict.classification.value,
        "metastable": verdict.metastable,
        "witness": {"location": verdict.witness[0], "energy": verdict.witness[1]},
        "minima": [_point_dict(p) for p in minima],
    })

    name = functional.parameter_name
    print(f"scenario {res.scenario.name}: N = {res.system.n}, {verdict.classification.value}"
          + (" (metastable)" if verdict.metastable else ""))
    for p in minima:
        print(f"  {p.kind.value}: {name} = {p.location:.10g}, E = {p.energy:.12g} hbar Omega")

    if verdict.unbounded:
        print(f"  unbounded collapse: E({name} = {verdict.witness[0]:.6g}) = {verdict.witness[1]:.6g} hbar Omega;"
              " the energy falls without limit as the cloud shrinks")
        _write_json(args.json_out, report)
        return EXIT_UNBOUNDED

    if not minima:
        grid = np.geomspace(w_min, w_max, 64)
        values = np.asarray(f(grid))
        if np.all(values == values[0]):
            print(f"  flat landscape: E = {values[0]:.12g} hbar Omega for every {name}")
            report["flat_energy"] = float(values[0])
            _write_json(args.json_out, report)
            return EXIT_OK
        print("  no minimum found in the window")
        _write_json(args.json_out, report)
        return EXIT_NO_CONVERGENCE

    if isinstance(res.interaction, StepWell) and functional is Functional.HARMONIC and verdict.metastable:
        try:
            br = barrier_report(res.system, res.interaction, variant)
        except NoMetastableStateError:
            br = None
        if br is not None:
            print(f"  barrier: top at {name} = {br.barrier_top.location:.6g}, height = "
                  f"{br.barrier_height:.6g} hbar Omega, height / |V| = {br.depth_ratio:.3g}")
            report["barrier"] = {
                "top": _point_dict(br.barrier_top),
                "height": br.barrier_height,
                "depth_ratio": br.depth_ratio,
            }
    _write_json(args.json_out, report)
    return EXIT_OK


def cmd_critical_n(args: argparse.Namespace) -> int:
    functional = Functional(args.functional)
    scenario = scenario_from_args(args)

    if args.r_sweep:
        lo, hi, steps = parse_sweep(args.r_sweep)
        rep = critical_number_sweep(scenario, lo, hi, steps, args.target_n, args.n_hi)
        print(f"scenario {scenario.name}: N_max against well range ({EXPLORATORY_NOTE})")
        print(f"  {'R / a0':>8} {'V / hbar Omega':>16} {'k0 R':>12} {'N_max':>10}")
        for row in rep.rows:
            print(f"  {row.r_bohr:>8.4g} {row.v:>16.6e} {row.x:>12.8f} {row.result.n_max:>10d}")
        print(f"  criterion: {rep.rows[0].result.criterion}")
        if rep.target_n is not None:
            if rep.r_at_target is not None:
                print(f"  N_max = {rep.target_n} reached near R = {rep.r_at_target:.4g} a0 (log interpolation)")
            else:
                print(f"  N_max = {rep.target_n} is not reached for R in [{lo:g}, {hi:g}] a0")
            r_best, dev = rep.closest
            verdict = "within 5%" if dev <= 0.05 else "outside 5%"
            print(f"  closest row: R = {r_best:.4g} a0, deviation {dev:.1%} ({verdict})")
        report = {
            "scenario": scenario.to_dict(),
            "note": EXPLORATORY_NOTE,
            "rows": [
                {"r_bohr": r.r_bohr, "r_trap": r.r_trap, "v": r.v, "x": r.x,
                 "n_max": r.result.n_max, "bracket": list(r.result.bracket)}
                for r in rep.rows
            ],
            "criterion": rep.rows[0].result.criterion,
            "target_n": rep.target_n,
            "r_at_target": rep.r_at_target,
            "closest": list(rep.closest) if rep.closest else None,
        }
        _write_json(args.json_out, report)
        return EXIT_OK

    res = resolve(scenario)
    result = critical_number(res.interaction, variant=scenario.variant, n_lo=args.n_lo,
                             n_hi=args.n_hi, functional=functional)
    print(f"scenario {scenario.name}: N_max = {result.n_max} "
          f"(minimum at N = {result.bracket[0]}, none at N = {result.bracket[1]})")
    print(f"  criterion: {result.criterion}")
    if isinstance(res.interaction, StepWell):
        print(f"  ({EXPLORATORY_NOTE})")
    report = _header(res, functional)
    report.update({"n_max": result.n_max, "bracket": list(result.bracket), "criterion": result.criterion})
    _write_json(args.json_out, report)
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace) -> int:
    scenario = scenario_from_args(args)
    if not isinstance(scenario.interaction, ScatteringSpec):
        raise InvalidInputError("calibrate needs a scattering length (--a-angstrom) and range (--r-bohr)")
    res = resolve(scenario)
    cal = res.calibration
    ctx = res.context
    v_si = cal.v * ctx.energy_quantum_si
    a_back = scattering_length(cal.v, res.r_trap)
    a_back_angstrom = units.trap_to_angstrom(a_back, ctx)

    print(f"scenario {scenario.name}: a = {scenario.interaction.a_angstrom:g} A, R = {scenario.interaction.r_bohr:g} a0")
    print(f"  a_ho = {ctx.a_ho_si:.6e} m, hbar Omega = {ctx.energy_quantum_si:.6e} J")
    print(f"  V = {cal.v:.10e} hbar Omega = {v_si:.6e} J")
    print(f"  k0 R = {cal.x:.15f} (pi/2 - k0 R = {np.pi / 2 - cal.x:.3e})")
    print(f"  residual = {cal.residual:.3e}, iterations = {cal.iterations}")
    print(f"  round trip: a = {a_back_angstrom:.12g} A")
    report = {
        "scenario": scenario.to_dict(),
        "a_trap": res.a_trap,
        "r_trap": res.r_trap,
        "v": cal.v,
        "v_si": v_si,
        "x": cal.x,
        "a_achieved": cal.a_achieved,
        "a_roundtrip_angstrom": a_back_angstrom,
        "iterations": cal.iterations,
        "residual": cal.residual,
    }
    _write_json(args.json_out, report)
    return EXIT_OK


COMMANDS = {
    "scan": cmd_scan,
    "minimize": cmd_minimize,
    "critical-n": cmd_critical_n,
    "calibrate": cmd_calibrate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NoConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
