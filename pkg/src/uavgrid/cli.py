"""Batch command-line interface.

Five subcommands: distribution, outage-curve, optimize, contour, validate.
Densities cross this boundary in UAVs per km2 and are converted to per-m2
exactly once, here.  Exit codes: 0 success, 1 validation failure, 2 bad
configuration or geometry.
"""

from __future__ import annotations

import argparse
import json
import math
import subprocess
import sys
from pathlib import Path

from . import __version__
from .connectivity import (
    PlacementMode,
    ScenarioConfig,
    estimate_distribution,
    mixture_cdf,
    outage_grid,
)
from .geometry import (
    CityModel,
    HeightDistribution,
    InvalidGeometryError,
    PRESETS,
    RadioParams,
    SamplingEnvelope,
    ground_range,
)
from .los import Placement
from .optimize import (
    HeightSearchSpec,
    grid_points,
    min_density_for_outage,
    optimize_height,
    sweep_contour,
)

PER_KM2 = 1e-6  # one UAV per km2, expressed per m2


class ConfigError(ValueError):
    """Bad config file or inconsistent options."""


def _add_city_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("city")
    g.add_argument("--preset", choices=sorted(PRESETS), help="named city model")
    g.add_argument("--mu-s", type=float, help="mean street width, m (explicit city)")
    g.add_argument("--mu-b", type=float, help="mean block side, m (explicit city)")
    g.add_argument("--mu-h", type=float, help="mean building height, m (explicit city)")
    g.add_argument("--w-v", type=float, help="vehicle street width, m (default mu_s)")
    g.add_argument("--w-h", type=float, help="crossing street width, m (default mu_s)")
    g.add_argument("--building-h-min", type=float, help="min building height, m (default mu_h/2)")
    g.add_argument("--building-h-max", type=float, help="max building height, m (default 1.5*mu_h)")


def _add_scenario_options(p: argparse.ArgumentParser, placement: bool = True) -> None:
    g = p.add_argument_group("scenario")
    g.add_argument("--r-max", type=float, default=250.0, help="max 3D link range, m")
    g.add_argument("--h-v", type=float, default=10.0, help="vehicle antenna height, m")
    g.add_argument("--gamma-th", type=float, default=0.8, help="connectivity threshold")
    g.add_argument("--n-realizations", type=int, default=100_000, help="Monte Carlo realizations")
    g.add_argument("--seed", type=int, default=0, help="base seed of the run")
    g.add_argument("--workers", type=int, default=1, help="worker processes")
    if placement:
        g.add_argument(
            "--placement",
            choices=[m.value for m in PlacementMode],
            default=PlacementMode.MIXTURE.value,
            help="vehicle placement mode",
        )
    g.add_argument("--lambda-cap", type=float, help="envelope density cap, per km2")
    g.add_argument("--d-cap", type=float, help="envelope disk radius cap, m")


def _add_output_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("output")
    g.add_argument("--output", default="-", help="output path, or - for stdout")
    g.add_argument("--format", choices=["csv", "structured"], default="csv")
    g.add_argument("--config", help="key=value file parsed before the flags")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="uavgrid",
        description="LoS connectivity of UAV swarms over grid cities",
    )
    parser.add_argument("--version", action="version", version=f"uavgrid {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    table: dict[str, argparse.ArgumentParser] = {}

    p = sub.add_parser("distribution", help="connectivity CDF on a gamma grid")
    p.add_argument("--lambda-uav", type=float, required=True, help="UAV density, per km2")
    p.add_argument("--h-uav", type=float, required=True, help="UAV altitude, m")
    p.add_argument("--gamma-step", type=float, default=0.01, help="gamma grid step")
    _add_city_options(p)
    _add_scenario_options(p, placement=False)
    _add_output_options(p)
    table["distribution"] = p

    p = sub.add_parser("outage-curve", help="outage vs altitude at fixed density")
    p.add_argument("--lambda-uav", type=float, required=True, help="UAV density, per km2")
    p.add_argument("--h-lo", type=float, required=True, help="lowest altitude, m")
    p.add_argument("--h-hi", type=float, required=True, help="highest altitude, m")
    p.add_argument("--h-step", type=float, default=5.0, help="altitude step, m")
    _add_city_options(p)
    _add_scenario_options(p)
    _add_output_options(p)
    table["outage-curve"] = p

    p = sub.add_parser("optimize", help="altitude minimizing outage")
    p.add_argument("--lambda-uav", type=float, required=True, help="UAV density, per km2")
    p.add_argument("--h-lo", type=float, required=True, help="window low edge, m")
    p.add_argument("--h-hi", type=float, required=True, help="window high edge, m")
    p.add_argument("--grid-step", type=float, default=5.0, help="coarse grid step, m")
    p.add_argument("--refine-tol", type=float, default=1.0, help="refinement tolerance, m")
    _add_city_options(p)
    _add_scenario_options(p)
    _add_output_options(p)
    table["optimize"] = p

    p = sub.add_parser("contour", help="outage over a density-altitude grid")
    p.add_argument("--lambda-lo", type=float, required=True, help="lowest density, per km2")
    p.add_argument("--lambda-hi", type=float, required=True, help="highest density, per km2")
    p.add_argument("--lambda-step", type=float, default=1.0, help="density step, per km2")
    p.add_argument("--h-lo", type=float, required=True, help="lowest altitude, m")
    p.add_argument("--h-hi", type=float, required=True, help="highest altitude, m")
    p.add_argument("--h-step", type=float, default=5.0, help="altitude step, m")
    p.add_argument(
        "--target-outage",
        type=float,
        help="also report the smallest density meeting this outage",
    )
    _add_city_options(p)
    _add_scenario_options(p)
    _add_output_options(p)
    table["contour"] = p

    p = sub.add_parser("validate", help="closed forms vs explicit building draws")
    p.add_argument("--cases", type=int, default=200, help="randomized cases")
    p.add_argument("--n-draws", type=int, default=100_000, help="city draws per case")
    p.add_argument("--max-outliers", type=int, default=2, help="tolerated cases beyond z-limit")
    p.add_argument("--z-limit", type=float, default=3.0, help="pass threshold in standard errors")
    p.add_argument("--r-max", type=float, default=250.0, help="max 3D link range, m")
    p.add_argument("--h-v", type=float, default=10.0, help="vehicle antenna height, m")
    p.add_argument("--seed", type=int, default=0, help="base seed of the run")
    _add_output_options(p)
    table["validate"] = p

    return parser, table


def _parse_config_value(action: argparse.Action, raw: str):
    if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return isinstance(action, argparse._StoreTrueAction)
        if low in ("0", "false", "no", "off"):
            return not isinstance(action, argparse._StoreTrueAction)
        raise ConfigError(f"cannot read boolean from {raw!r}")
    if action.type is not None:
        try:
            value = action.type(raw)
        except ValueError as e:
            raise ConfigError(f"bad value {raw!r} for {action.dest}: {e}") from None
    else:
        value = raw
    if action.choices is not None and value not in action.choices:
        raise ConfigError(f"{value!r} not one of {sorted(action.choices)}")
    return value


def _load_config(path: str, subparser: argparse.ArgumentParser) -> dict:
    options: dict[str, argparse.Action] = {}
    for action in subparser._actions:
        for opt in action.option_strings:
            if opt.startswith("--"):
                name = opt[2:]
                options[name] = action
                options[name.replace("-", "_")] = action
    overrides: dict[str, object] = {}
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key in ("config", "help", "version"):
            raise ConfigError(f"{path}:{lineno}: {key!r} cannot be set from a config file")
        action = options.get(key) or options.get(key.replace("-", "_"))
        if action is None:
            raise ConfigError(f"{path}:{lineno}: unknown option {key!r}")
        overrides[action.dest] = _parse_config_value(action, raw.strip())
    return overrides


def _build_city(args) -> CityModel:
    explicit = [v is not None for v in (args.mu_s, args.mu_b, args.mu_h)]
    if args.preset is not None:
        if any(explicit):
            raise ConfigError("give either --preset or explicit --mu-s/--mu-b/--mu-h, not both")
        city = PRESETS[args.preset]
    else:
        if not all(explicit):
            raise ConfigError("an explicit city needs --mu-s, --mu-b and --mu-h")
        mu_s, mu_b, mu_h = args.mu_s, args.mu_b, args.mu_h
        city = CityModel(
            mu_s=mu_s,
            mu_b=mu_b,
            mu_H=mu_h,
            w_v=mu_s,
            w_h=mu_s,
            heights=HeightDistribution(0.5 * mu_h, 1.5 * mu_h),
        )
    heights = city.heights
    if args.building_h_min is not None or args.building_h_max is not None:
        h_min = args.building_h_min if args.building_h_min is not None else heights.h_min
        h_max = args.building_h_max if args.building_h_max is not None else heights.h_max
        heights = HeightDistribution(h_min, h_max)
    return CityModel(
        mu_s=city.mu_s,
        mu_b=city.mu_b,
        mu_H=city.mu_H,
        w_v=args.w_v if args.w_v is not None else city.w_v,
        w_h=args.w_h if args.w_h is not None else city.w_h,
        heights=heights,
    )


def _build_envelope(args, lambda_uav: float, d_max: float) -> SamplingEnvelope | None:
    if args.lambda_cap is None and args.d_cap is None:
        return None
    lambda_cap = args.lambda_cap * PER_KM2 if args.lambda_cap is not None else lambda_uav
    d_cap = args.d_cap if args.d_cap is not None else d_max
    return SamplingEnvelope(lambda_cap=lambda_cap, d_cap=d_cap)


def _revision() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).parent,
            capture_output=True,
            text=True,
            timeout=10,
        )
    except OSError:
        return "unknown"
    return out.stdout.strip() if out.returncode == 0 else "unknown"


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit(args, columns: list[str], rows: list[list], metadata: dict) -> None:
    if args.format == "csv":
        lines = [",".join(columns)]
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        text = "\n".join(lines) + "\n"
    else:
        payload = {
            "tool": "uavgrid",
            "version": __version__,
            "revision": _revision(),
            "command": args.command,
            **metadata,
            "columns": columns,
            "rows": rows,
        }
        text = json.dumps(payload, indent=2) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)


def _placement_mode(args) -> PlacementMode:
    return PlacementMode(getattr(args, "placement", PlacementMode.MIXTURE.value))


def _cmd_distribution(args) -> int:
    city = _build_city(args)
    lam = args.lambda_uav * PER_KM2
    radio = RadioParams(r_max=args.r_max, h_uav=args.h_uav, h_v=args.h_v, lambda_uav=lam)
    if radio.h_uav <= radio.h_v:
        raise InvalidGeometryError("need h_uav > h_v")
    envelope = _build_envelope(args, lam, ground_range(radio))
    config = ScenarioConfig(
        city=city,
        radio=radio,
        placement_mode=PlacementMode.MIXTURE,
        n_realizations=args.n_realizations,
        seed=args.seed,
        workers=args.workers,
        envelope=envelope,
    )
    dists = estimate_distribution(config)
    mix = mixture_cdf(dists[Placement.INTERSECTION], dists[Placement.STREET], city)
    gammas = grid_points(0.0, 1.0, args.gamma_step)
    rows = [
        [
            g,
            float(dists[Placement.INTERSECTION].evaluate(g)),
            float(dists[Placement.STREET].evaluate(g)),
            float(mix.evaluate(g)),
        ]
        for g in gammas
    ]
    _emit(
        args,
        ["gamma", "F_intersection", "F_street", "F_mixture"],
        rows,
        {
            "seed": args.seed,
            "n_realizations": args.n_realizations,
            "lambda_uav_per_km2": args.lambda_uav,
            "h_uav_m": args.h_uav,
        },
    )
    return 0


def _check_height_window(heights: list[float], h_v: float, r_max: float) -> None:
    if not (h_v < heights[0] and heights[-1] < h_v + r_max):
        raise InvalidGeometryError(
            f"altitudes [{heights[0]}, {heights[-1]}] outside the feasible range "
            f"({h_v}, {h_v + r_max})"
        )


def _cmd_outage_curve(args) -> int:
    city = _build_city(args)
    lam = args.lambda_uav * PER_KM2
    heights = grid_points(args.h_lo, args.h_hi, args.h_step)
    _check_height_window(heights, args.h_v, args.r_max)
    d_top = math.sqrt(args.r_max * args.r_max - (heights[0] - args.h_v) ** 2)
    envelope = _build_envelope(args, lam, d_top)
    values = outage_grid(
        city,
        args.r_max,
        args.h_v,
        [lam],
        heights,
        args.gamma_th,
        args.n_realizations,
        args.seed,
        placement_mode=_placement_mode(args),
        envelope=envelope,
        workers=args.workers,
    )[0]
    rows = [[h, float(v)] for h, v in zip(heights, values)]
    _emit(
        args,
        ["h_uav_m", "outage"],
        rows,
        {
            "seed": args.seed,
            "n_realizations": args.n_realizations,
            "lambda_uav_per_km2": args.lambda_uav,
            "gamma_th": args.gamma_th,
        },
    )
    return 0


def _cmd_optimize(args) -> int:
    city = _build_city(args)
    lam = args.lambda_uav * PER_KM2
    search = HeightSearchSpec(
        h_lo=args.h_lo,
        h_hi=args.h_hi,
        grid_step=args.grid_step,
        refine_tol=args.refine_tol,
        gamma_th=args.gamma_th,
    )
    h_star, outage_star = optimize_height(
        city,
        args.r_max,
        args.h_v,
        lam,
        search,
        n_realizations=args.n_realizations,
        seed=args.seed,
        placement_mode=_placement_mode(args),
        workers=args.workers,
    )
    _emit(
        args,
        ["h_star_m", "outage_star"],
        [[h_star, outage_star]],
        {
            "seed": args.seed,
            "n_realizations": args.n_realizations,
            "lambda_uav_per_km2": args.lambda_uav,
            "gamma_th": args.gamma_th,
        },
    )
    return 0


def _cmd_contour(args) -> int:
    city = _build_city(args)
    lambdas_km2 = grid_points(args.lambda_lo, args.lambda_hi, args.lambda_step)
    heights = grid_points(args.h_lo, args.h_hi, args.h_step)
    _check_height_window(heights, args.h_v, args.r_max)
    grid = sweep_contour(
        city,
        args.r_max,
        args.h_v,
        [v * PER_KM2 for v in lambdas_km2],
        heights,
        args.gamma_th,
        n_realizations=args.n_realizations,
        seed=args.seed,
        placement_mode=_placement_mode(args),
        envelope=_build_envelope(
            args,
            max(lambdas_km2) * PER_KM2,
            math.sqrt(args.r_max * args.r_max - (heights[0] - args.h_v) ** 2),
        ),
        workers=args.workers,
    )
    rows = [
        [lam_km2, h, float(grid.outage[i, j])]
        for i, lam_km2 in enumerate(lambdas_km2)
        for j, h in enumerate(heights)
    ]
    metadata = {
        "seed": args.seed,
        "n_realizations": args.n_realizations,
        "gamma_th": args.gamma_th,
        "lambda_axis_per_km2": lambdas_km2,
        "height_axis_m": heights,
    }
    if args.target_outage is not None:
        best = min_density_for_outage(grid, args.target_outage)
        if best is None:
            metadata["min_density_per_km2"] = None
            metadata["h_star_m"] = None
            print(
                f"no density in the grid meets outage <= {args.target_outage}",
                file=sys.stderr,
            )
        else:
            lam_min, h_star = best
            metadata["min_density_per_km2"] = lam_min / PER_KM2
            metadata["h_star_m"] = h_star
            print(
                f"min density {lam_min / PER_KM2:g} per km2 at h = {h_star:g} m "
                f"for outage <= {args.target_outage}",
                file=sys.stderr,
            )
    _emit(args, ["lambda_per_km2", "h_uav_m", "outage"], rows, metadata)
    return 0


def _cmd_validate(args) -> int:
    from .oracle import validation_sweep

    results = validation_sweep(
        cases=args.cases,
        n=args.n_draws,
        seed=args.seed,
        r_max=args.r_max,
        h_v=args.h_v,
        z_limit=args.z_limit,
    )
    rows = [
        [r.case_id, r.d, r.phi, r.placement.value, r.p_analytic, r.p_oracle, r.se, r.passed]
        for r in results
    ]
    outliers = sum(1 for r in results if not r.passed)
    _emit(
        args,
        ["case_id", "d_m", "phi_rad", "placement", "p_analytic", "p_oracle", "se", "pass"],
        rows,
        {
            "seed": args.seed,
            "cases": args.cases,
            "n_draws": args.n_draws,
            "z_limit": args.z_limit,
            "outliers": outliers,
            "max_outliers": args.max_outliers,
        },
    )
    print(
        f"{outliers} of {args.cases} cases beyond {args.z_limit} se "
        f"(allowed: {args.max_outliers})",
        file=sys.stderr,
    )
    return 0 if outliers <= args.max_outliers else 1


_COMMANDS = {
    "distribution": _cmd_distribution,
    "outage-curve": _cmd_outage_curve,
    "optimize": _cmd_optimize,
    "contour": _cmd_contour,
    "validate": _cmd_validate,
}


def _scout(argv: list[str]) -> tuple[str | None, str | None]:
    # find the subcommand and --config before real parsing, so a config file
    # can satisfy options argparse considers required
    command = None
    config = None
    i = 0
    while i < len(argv):
        tok = argv[i]
        if command is None and tok in _COMMANDS:
            command = tok
        if tok == "--config" and i + 1 < len(argv):
            config = argv[i + 1]
            i += 2
            continue
        if tok.startswith("--config="):
            config = tok.split("=", 1)[1]
        i += 1
    return command, config


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, table = build_parser()
    try:
        command, config_path = _scout(argv)
        if config_path is not None and command in table:
            sub = table[command]
            overrides = _load_config(config_path, sub)
            for action in sub._actions:
                if action.dest in overrides:
                    action.required = False
            sub.set_defaults(**overrides)
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    except (ConfigError, InvalidGeometryError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
