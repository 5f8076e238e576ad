"""
Command-line interface for ellk3-stab
"""

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional

from .cce import check_g, check_h, psi_z, solve_charge_equation, solve_simple, solve_todd
from .charges import (
    ChargeSpec,
    Family,
    PhaseValue,
    eval_charge,
    phase,
)
from .errors import KernelWithoutTable, ParseError, StabilityError
from .fmt import MAP_BUILDERS
from .lattice import (
    ChernVector,
    DivisorClass,
    NamedObject,
    RdvCoords,
    SurfaceParams,
    alpha_class,
    chern_named,
    format_rational,
    line_bundle,
    parse_divisor,
    parse_rational,
    point_class,
    twist,
)
from .profiles import OUTPUT_FORMATS, Config, get_profile_description, list_profiles, load_config
from .regions import (
    RasterWindow,
    RegionQuery,
    classify,
    raster,
    tangency_data,
    transformed_conditions,
    witness_stable_not_twisted_ample,
)
from .render import raster_format, render, write_raster
from .verify import SUITES, VerificationRunner
from .walls import (
    SearchBounds,
    WallFrame,
    displayed_wall_diagnostic,
    mini_walls_on_ray,
    rank_bound,
    slice_circle,
    stability_certificate,
    wall_quadric,
)


class CliParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors raise ParseError instead of exiting"""

    def error(self, message):
        raise ParseError(f"{self.prog}: {message}")


# Parsing helpers

def _divisor(text: Optional[str], default: str = "0,0") -> DivisorClass:
    return parse_divisor(text if text is not None else default)


def _rational(text: Optional[str], name: str) -> Fraction:
    if text is None:
        raise ParseError(f"--{name} is required")
    return parse_rational(text)


def parse_chern(text: str, surface: SurfaceParams) -> ChernVector:
    """
    Parse a Chern vector given as JSON {"n", "theta", "fiber", "ch2"} or as a
    parameter-free object name (O_X, O_f, O_x)

    Raises:
        ParseError: If the text is neither
    """
    if text in (NamedObject.STRUCTURE_SHEAF.value, NamedObject.FIBER_SHEAF.value,
                NamedObject.POINT.value):
        return chern_named(text, surface)
    try:
        data = json.loads(text)
    except (json.JSONDecodeError, TypeError) as e:
        raise ParseError(f"Malformed Chern vector JSON: {text!r} ({e})")
    return ChernVector.from_json(data)


def parse_charge_spec(text: str, surface: SurfaceParams) -> ChargeSpec:
    """
    Parse a compact charge description

    Grammar: "vd:V,D", "standard:a,b[@a,b]", "todd:a,b[@a,b]",
    "ray:ha,hb,t[@a,b]", "weak-h", "weak-vh:V", "weak-d:D",
    "weak-special:D_alpha". Divisors are aΘ + bf; "@a,b" sets B.

    Raises:
        ParseError: If the text does not follow the grammar
    """
    family, _, rest = text.partition(":")
    body, _, b_text = rest.partition("@")
    b_field = parse_divisor(b_text) if b_text else DivisorClass.zero()
    values = [parse_rational(p) for p in body.split(",")] if body else []

    def expect(count: int):
        if len(values) != count:
            raise ParseError(f"Charge '{family}' needs {count} values, got {text!r}")

    if family == Family.VD.value:
        expect(2)
        return ChargeSpec.vd(values[0], values[1], surface)
    if family in (Family.STANDARD.value, Family.TODD.value):
        expect(2)
        build = ChargeSpec.standard if family == Family.STANDARD.value else ChargeSpec.todd
        return build(DivisorClass(values[0], values[1]), b_field, surface)
    if family == Family.RAY.value:
        expect(3)
        return ChargeSpec.ray(DivisorClass(values[0], values[1]), b_field, values[2], surface)
    if family == Family.WEAK_H.value:
        expect(0)
        return ChargeSpec.weak_h(surface)
    if family == Family.WEAK_VH.value:
        expect(1)
        return ChargeSpec.weak_vh(values[0], surface)
    if family == Family.WEAK_D.value:
        expect(1)
        return ChargeSpec.weak_d(values[0], surface)
    if family == Family.WEAK_SPECIAL.value:
        expect(1)
        return ChargeSpec.weak_special(values[0], surface)
    raise ParseError(f"Unknown charge family: {family!r}")


def _charge_from_flags(args, surface: SurfaceParams) -> ChargeSpec:
    if args.spec:
        return parse_charge_spec(args.spec, surface)
    family = Family(args.family)
    kernel_b = parse_rational(args.b) if args.b is not None else None
    if family is Family.VD:
        return ChargeSpec.vd(_rational(args.V, "V"), _rational(args.D, "D"), surface)
    if family in (Family.STANDARD, Family.TODD):
        if args.omega is None:
            raise ParseError(f"--omega is required for {family.value}")
        build = ChargeSpec.standard if family is Family.STANDARD else ChargeSpec.todd
        return build(parse_divisor(args.omega), _divisor(args.B), surface)
    if family is Family.RAY:
        if args.H is None:
            raise ParseError("--H is required for ray")
        return ChargeSpec.ray(parse_divisor(args.H), _divisor(args.B), _rational(args.t, "t"), surface)
    if family is Family.WEAK_H:
        return ChargeSpec.weak_h(surface, kernel_b)
    if family is Family.WEAK_VH:
        return ChargeSpec.weak_vh(_rational(args.V, "V"), surface)
    if family is Family.WEAK_D:
        return ChargeSpec.weak_d(_rational(args.D, "D"), surface)
    return ChargeSpec.weak_special(_rational(args.dalpha, "dalpha"), surface, kernel_b)


def _phase_json(value: PhaseValue) -> Dict[str, Any]:
    return {
        "kind": value.kind.value,
        "band": value.band,
        "rho": None if value.rho is None else format_rational(value.rho),
        "scale": format_rational(value.scale),
        "phi": None if value.phi is None else format_rational(value.phi),
        "value": repr(value.to_float()),
    }


def _emit(payload: Any):
    print(json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2))


# Command handlers

def cmd_charge(args, config: Config) -> int:
    surface = config.surface
    spec = _charge_from_flags(args, surface)
    v = parse_chern(args.chern, surface)
    value = eval_charge(spec, v)
    payload = {
        "family": spec.family.value,
        "chern": v.to_json(),
        "re": format_rational(value.re),
        "im": format_rational(value.im),
        "im_scale": format_rational(value.im_scale),
        "scale_note": value.scale_note.value,
    }
    try:
        payload["phase"] = _phase_json(phase(spec, v))
    except KernelWithoutTable as e:
        payload["phase"] = None
        payload["phase_error"] = str(e)
    _emit(payload)
    return 0


def cmd_fmt(args, config: Config) -> int:
    surface = config.surface
    lattice_map = MAP_BUILDERS[args.map](surface, parse_rational(args.dalpha))
    v = parse_chern(args.chern, surface)
    _emit({"map": args.map, "input": v.to_json(), "output": lattice_map(v).to_json()})
    return 0


def cmd_cce(args, config: Config) -> int:
    surface = config.surface
    if args.cce_command == "solve":
        omega_rdv = RdvCoords.from_dv(_rational(args.domega, "domega"),
                                      _rational(args.vomega, "vomega"), surface)
        b_field = _divisor(args.b)
        if args.todd:
            data = solve_todd(surface, omega_rdv, b_field)
        elif b_field.a == 0:
            data = solve_simple(surface, omega_rdv, b_field.b)
        else:
            data = solve_charge_equation(surface, omega_rdv, b_field, todd=False)
        _emit(data.to_json(config.tolerance))
        return 0
    if args.cce_command == "psi-z":
        target = psi_z(_rational(args.domega, "domega"), _rational(args.vomega, "vomega"),
                       parse_rational(args.dalpha))
        _emit(target.to_json())
        return 0
    if args.cce_command == "check":
        _emit({
            "g_residual": format_rational(check_g(parse_rational(args.dalpha), surface)),
            "h_residual": format_rational(check_h(parse_rational(args.v), surface)),
        })
        return 0
    return cmd_verify(args, config)


def _window(text: str) -> RasterWindow:
    parts = text.split(",")
    if len(parts) != 4:
        raise ParseError(f"Malformed window: {text!r} (expected 'Dmin,Vmin,Dmax,Vmax')")
    return RasterWindow(*(parse_rational(p) for p in parts))


def cmd_region(args, config: Config) -> int:
    surface = config.surface
    d_alpha = parse_rational(args.dalpha)
    if args.region_command == "classify":
        q = RegionQuery(d_alpha, _rational(args.d, "d"), _rational(args.v, "v"), surface,
                        allow_boundary=args.boundary)
        payload = classify(q).to_json()
        payload["transformed"] = transformed_conditions(q)._asdict()
        _emit(payload)
        return 0
    if args.region_command == "tangency":
        data = tangency_data(surface, d_alpha)
        d0 = data.point[0]
        _emit({
            "point": [format_rational(x) for x in data.point],
            "boundary_value_at_point": format_rational(data.boundary_value_at(d0)),
            "derivative_at_point": format_rational(data.derivative_at(d0)),
            "g_at_point": format_rational(data.g_at_point),
            "neighborhood_ok": data.neighborhood_ok,
        })
        return 0
    if args.region_command == "witness":
        d, v = witness_stable_not_twisted_ample(surface, d_alpha)
        _emit({"D": format_rational(d), "V": format_rational(v),
               "label": classify(RegionQuery(d_alpha, d, v, surface)).to_json()})
        return 0

    out_format = None
    if args.out:
        try:
            out_format = raster_format(args.out, args.format)
        except ValueError as e:
            raise ParseError(str(e)) from e
    grid = raster(surface, d_alpha, _window(args.window), args.nx, args.ny,
                  threads=config.threads, progress=args.progress)
    if args.out:
        path = write_raster(grid, args.out, out_format)
        _emit({"path": path, "cells": grid.nx * grid.ny})
        return 0
    if config.output_format == "json":
        _emit({"e": format_rational(surface.e), "D_alpha": format_rational(grid.d_alpha),
               "nx": grid.nx, "ny": grid.ny, "cells": [c.to_json() for c in grid.cells()]})
        return 0
    data = render(grid, config.output_format)
    if config.output_format == "png":
        sys.stdout.buffer.write(data)
    else:
        sys.stdout.write(data.decode("utf-8"))
    return 0


def _default_ray_candidates(target: ChernVector, bounds: SearchBounds,
                            surface: SurfaceParams) -> List[ChernVector]:
    # rank-one subobjects L(-C) with n points for effective C != 0 in the box
    candidates = []
    for p in range(bounds.max_c_theta + 1):
        for q in range(bounds.max_c_f + 1):
            if p == q == 0:
                continue
            twisted = twist(target, -DivisorClass(p, q), surface)
            for n in range(bounds.max_points + 1):
                candidates.append(twisted - point_class() * n)
    return candidates


def _certify(args, config: Config) -> int:
    surface = config.surface
    spec = parse_charge_spec(args.spec, surface)
    v_l = line_bundle(alpha_class(parse_rational(args.alpha), surface), surface)
    bounds = SearchBounds(*config.bounds)
    certificate = stability_certificate(spec, v_l, bounds, strong_bg=config.strong_bg,
                                        threads=config.threads, progress=args.progress)
    payload = certificate.to_json()
    payload["spec"] = args.spec
    payload["line_bundle"] = v_l.to_json()
    payload["bounds"] = list(bounds)
    _emit(payload)
    return 0


def cmd_wall(args, config: Config) -> int:
    surface = config.surface
    if args.wall_command in ("quadric", "slice"):
        frame = WallFrame(parse_rational(args.d0), surface)
        v_e = parse_chern(args.ve, surface)
        v_f = parse_chern(args.vf, surface)
        record = wall_quadric(frame, v_e, v_f)
        if args.wall_command == "slice":
            circle = slice_circle(record, parse_rational(args.z))
            _emit({"wall": record.to_json(), "circle": None if circle is None else circle.to_json()})
            return 0
        payload = record.to_json()
        diagnostic = displayed_wall_diagnostic(frame, v_e, v_f)
        payload["diagnostic"] = None if diagnostic is None else diagnostic.to_json()
        _emit(payload)
        return 0
    if args.wall_command == "ray":
        h, b_field = parse_divisor(args.H), _divisor(args.B)
        target = parse_chern(args.target, surface)
        if args.candidate:
            candidates = [parse_chern(c, surface) for c in args.candidate]
        else:
            candidates = _default_ray_candidates(target, SearchBounds(*config.bounds), surface)
        walls = mini_walls_on_ray(h, b_field, target, candidates, surface)
        _emit({"target": target.to_json(), "walls": [w.to_json() for w in walls]})
        return 0
    if args.wall_command == "rank-bound":
        bound = rank_bound(surface, parse_divisor(args.alpha), parse_divisor(args.omega))
        _emit(bound.to_json())
        return 0
    return _certify(args, config)


def cmd_certify(args, config: Config) -> int:
    return _certify(args, config)


def cmd_verify(args, config: Config) -> int:
    runner = VerificationRunner(config, stream=sys.stderr)
    report = runner.run(args.suite)
    _emit(report.to_json())
    return 0 if report.passed else 1


# Parser construction

def _common_options() -> argparse.ArgumentParser:
    common = CliParser(add_help=False)
    common.add_argument("--e", help="Fibration invariant e = -Θ² as 'p/q' (default: 2)")
    common.add_argument("--tol", type=float, help="Residual tolerance (default: 1e-9)")
    common.add_argument("--format", choices=OUTPUT_FORMATS, help="Output format (default: json)")
    common.add_argument("--seed", type=int, help="Seed for sampled checks (default: 0)")
    common.add_argument("--threads", type=int, help="Worker threads (capped by ELLK3_STAB_THREADS)")
    common.add_argument("--profile", choices=list_profiles(),
                        help="Named profile: " + ", ".join(
                            f"{name} ({get_profile_description(name)})" for name in list_profiles()))
    common.add_argument("--config", help="Path of config.json (default: ./config.json)")
    common.add_argument("--progress", action="store_true", help="Show progress bars on standard error")
    return common


def _search_options() -> argparse.ArgumentParser:
    search = CliParser(add_help=False)
    search.add_argument("--spec", required=True, help="Charge, e.g. 'vd:2,2' or 'ray:1,4,3/2@0,0'")
    search.add_argument("--alpha", required=True, help="D_α of L = 𝒪(Θ + (D_α+e)f)")
    search.add_argument("--bounds", help="maxC_Θ,maxC_f,maxPoints (default: 5,5,5)")
    search.add_argument("--strong-bg", action="store_true", help="Use the strong K3 Bogomolov-Gieseker inequality")
    return search


def build_parser() -> CliParser:
    """Assemble the full command tree"""
    common = _common_options()
    parser = CliParser(
        prog="ellk3-stab",
        description="ellk3-stab - exact Bridgeland stability computations on Weierstraß elliptic surfaces",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Fourier-Mukai image of ch(O_X)
  ellk3-stab fmt apply --map phi --e 2 --chern '{"n":"1","theta":"0","fiber":"0","ch2":"0"}'

  # Evaluate a central charge
  ellk3-stab charge eval --family vd --V 1/2 --D 3 --chern O_X

  # Solve the central charge equation
  ellk3-stab cce solve --e 2 --domega 3 --vomega 1/2 --b 0,0

  # Classify a point of the (D, V) quadrant
  ellk3-stab region classify --e 2 --dalpha -1 --d 2 --v 2

  # Plot the regions
  ellk3-stab region raster --dalpha -1 --window 0,0,10,10 --nx 400 --ny 400 --out region.svg

  # Certify a line bundle
  ellk3-stab wall certify --spec vd:2,2 --alpha -1 --bounds 5,5,5

  # Run the acceptance suite
  ellk3-stab verify --suite all --profile acceptance
        """
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")

    charge = commands.add_parser("charge", help="Central charges").add_subparsers(dest="charge_command")
    evaluate = charge.add_parser("eval", parents=[common], help="Evaluate Z(v) and the phase of v")
    evaluate.add_argument("--family", choices=[f.value for f in Family], default=Family.VD.value)
    evaluate.add_argument("--spec", help="Compact charge description; overrides --family")
    evaluate.add_argument("--V")
    evaluate.add_argument("--D")
    evaluate.add_argument("--omega", help="Polarization 'a,b' for standard and todd")
    evaluate.add_argument("--B", help="B-field 'a,b' (default: 0,0)")
    evaluate.add_argument("--H", help="Ray polarization 'a,b'")
    evaluate.add_argument("--t")
    evaluate.add_argument("--dalpha")
    evaluate.add_argument("--b", help="Projective parameter ordering mixed kernel sums")
    evaluate.add_argument("--chern", required=True, help="Chern vector JSON or O_X, O_f, O_x")
    evaluate.set_defaults(handler=cmd_charge)

    fmt = commands.add_parser("fmt", help="Fourier-Mukai maps").add_subparsers(dest="fmt_command")
    apply = fmt.add_parser("apply", parents=[common], help="Apply a lattice map")
    apply.add_argument("--map", required=True, choices=sorted(MAP_BUILDERS))
    apply.add_argument("--dalpha", default="0")
    apply.add_argument("--chern", required=True)
    apply.set_defaults(handler=cmd_fmt)

    cce = commands.add_parser("cce", help="Central charge equation").add_subparsers(dest="cce_command")
    solve = cce.add_parser("solve", parents=[common], help="Solve Z'(Φ(-)) = T·Z(-)")
    solve.add_argument("--domega", required=True)
    solve.add_argument("--vomega", required=True)
    solve.add_argument("--b", help="B-field 'a,b' (default: 0,0)")
    solve.add_argument("--todd", action="store_true", help="Todd-twisted target charge")
    psi = cce.add_parser("psi-z", parents=[common], help="Closed-form target at B = -α")
    psi.add_argument("--domega", required=True)
    psi.add_argument("--vomega", required=True)
    psi.add_argument("--dalpha", default="0")
    check = cce.add_parser("check", parents=[common], help="Residuals of the g and h identities")
    check.add_argument("--dalpha", default="0")
    check.add_argument("--v", default="1")
    cce_verify = cce.add_parser("verify", parents=[common], help="Run an acceptance suite")
    cce_verify.add_argument("--suite", choices=("all",) + SUITES, default="cce")
    for sub in (solve, psi, check, cce_verify):
        sub.set_defaults(handler=cmd_cce)

    region = commands.add_parser("region", help="Stability regions").add_subparsers(dest="region_command")
    classify_cmd = region.add_parser("classify", parents=[common], help="Label one point")
    classify_cmd.add_argument("--dalpha", required=True)
    classify_cmd.add_argument("--d", required=True)
    classify_cmd.add_argument("--v", required=True)
    classify_cmd.add_argument("--boundary", action="store_true", help="Admit D = 0 or V = 0")
    raster_cmd = region.add_parser("raster", parents=[common], help="Classify a grid")
    raster_cmd.add_argument("--dalpha", default="0")
    raster_cmd.add_argument("--window", required=True, help="Dmin,Vmin,Dmax,Vmax")
    raster_cmd.add_argument("--nx", type=int, default=200)
    raster_cmd.add_argument("--ny", type=int, default=200)
    raster_cmd.add_argument("--out", help="Artifact path; the format follows --format or the extension")
    tangency = region.add_parser("tangency", parents=[common], help="Tangency geometry for D_α < -e")
    tangency.add_argument("--dalpha", required=True)
    witness = region.add_parser("witness", parents=[common], help="Stable but not twisted ample point")
    witness.add_argument("--dalpha", default="0")
    for sub in (classify_cmd, raster_cmd, tangency, witness):
        sub.set_defaults(handler=cmd_region)

    wall = commands.add_parser("wall", help="Walls and certificates").add_subparsers(dest="wall_command")
    quadric = wall.add_parser("quadric", parents=[common], help="Potential wall of vE against vF")
    slice_cmd = wall.add_parser("slice", parents=[common], help="Slice of a wall at z̃ = z")
    for sub in (quadric, slice_cmd):
        sub.add_argument("--d0", default="1", help="Frame base D₀ > 0")
        sub.add_argument("--ve", required=True)
        sub.add_argument("--vf", default=NamedObject.FIBER_SHEAF.value)
    slice_cmd.add_argument("--z", required=True)
    ray = wall.add_parser("ray", parents=[common], help="Mini-walls on a volume ray")
    ray.add_argument("--H", required=True)
    ray.add_argument("--B", help="B-field 'a,b' (default: 0,0)")
    ray.add_argument("--target", required=True)
    ray.add_argument("--candidate", action="append",
                     help="Candidate Chern vector; repeatable (default: rank-one subobjects in --bounds)")
    ray.add_argument("--bounds")
    bound = wall.add_parser("rank-bound", parents=[common], help="Rank bound on destabilizers")
    bound.add_argument("--alpha", required=True, help="c₁ of the line bundle 'a,b'")
    bound.add_argument("--omega", required=True, help="Polarization 'a,b'")
    wall_certify = wall.add_parser("certify", parents=[common, _search_options()],
                                   help="Stability certificate")
    for sub in (quadric, slice_cmd, ray, bound, wall_certify):
        sub.set_defaults(handler=cmd_wall)

    certify = commands.add_parser("certify", parents=[common, _search_options()],
                                  help="Stability certificate for a line bundle")
    certify.set_defaults(handler=cmd_certify)

    verify = commands.add_parser("verify", parents=[common], help="Run the acceptance suite")
    verify.add_argument("--suite", choices=("all",) + SUITES, default="all")
    verify.set_defaults(handler=cmd_verify)
    return parser


def _resolve_config(args) -> Config:
    bounds = getattr(args, "bounds", None)
    overrides = {
        "e": parse_rational(args.e) if args.e is not None else None,
        "tolerance": args.tol,
        "output_format": args.format,
        "seed": args.seed,
        "threads": args.threads,
        "bounds": tuple(SearchBounds.parse(bounds)) if bounds else None,
        "strong_bg": True if getattr(args, "strong_bg", False) else None,
    }
    return load_config(overrides, profile=args.profile, config_path=args.config)


def run_cli(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, dispatch and map errors to exit codes

    Returns:
        0 on success, 1 on failed checks or interruption, 2 on domain
        errors, 3 on malformed input
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not hasattr(args, "handler"):
            parser.print_usage(sys.stderr)
            return 3
        return args.handler(args, _resolve_config(args))
    except ParseError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 3
    except StabilityError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        print("\n\nInterrupted by user", file=sys.stderr)
        return 1


def main():
    """Main CLI entry point"""
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
