"""Command-line surface: intensity profiles, verification, state reports, sweeps.

Exit codes: 0 success, 2 configuration error (including bad flags), 3
verification failure, 4 I/O error. CSV numbers use scientific notation with
17 significant digits so outputs are byte-reproducible across runs.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import sys

import numpy as np

from . import __version__, closedform, intensity, marking, verification
from .params import (
    ConfigError,
    PhysicsConfig,
    config_as_dict,
    derive,
    load_config,
    validate_regime,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VERIFY = 3
EXIT_IO = 4

_FMT = "%.16e"  # 17 significant digits

BRANCHES = ("elt", "ground", "full", "fringes", "antifringes")
MEASUREMENTS = ("bell", "internal", "none")
SWEEP_PARAMETERS = ("sigma0", "beta", "d", "t", "tau")


def _fmt(value: float) -> str:
    return _FMT % value


def _load(args) -> PhysicsConfig:
    config = load_config(args.config)
    for warning in validate_regime(config):
        print(f"warning: {warning}", file=sys.stderr)
    return config


def _coefficients(config: PhysicsConfig):
    derived = derive(config)
    zt = closedform.build_ztable(config, derived)
    return derived, zt, closedform.build_coefficients(zt, config, derived)


def _grid(args, coeffs) -> np.ndarray:
    points = args.grid_points
    if args.grid_min is not None or args.grid_max is not None:
        if args.grid_min is None or args.grid_max is None:
            raise ConfigError("--grid-min and --grid-max must be given together")
        if not args.grid_max > args.grid_min:
            raise ConfigError("--grid-max must exceed --grid-min")
        return np.linspace(args.grid_min, args.grid_max, points)
    return intensity.default_grid(coeffs, points=points)


def _write_text(path, text: str):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _complex_pair(z: complex):
    return {"re": z.real, "im": z.imag}


def write_manifest(out_path, config: PhysicsConfig, command: str, extra: dict | None = None):
    """Reproducibility record next to a data file: config echo, derived
    quantities, the full coefficient table, tool version, timestamp."""
    derived, zt, coeffs = _coefficients(config)
    manifest = {
        "tool": "eltsim",
        "version": __version__,
        "command": command,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "config": config_as_dict(config),
        "derived": {
            "delta_p_kg_m_s": derived.delta_p,
            "delta_v_m_s": derived.delta_v,
            "epsilon_s": derived.epsilon,
        },
        "ztable": {
            name: _complex_pair(getattr(zt, name))
            for name in ("z0", "z1", "z2", "z3", "z4", "z5", "z6", "z7", "z8", "z9", "z10")
        }
        | {"gouy_zr": zt.gouy_zr, "gouy_zi": zt.gouy_zi},
        "coefficients": {
            "amplitude": coeffs.amplitude,
            "c1": coeffs.c1,
            "c2": coeffs.c2,
            "c3": coeffs.c3,
            "alpha": coeffs.alpha,
            "gamma": coeffs.gamma,
            "theta": coeffs.theta,
            "mu": coeffs.mu,
        },
    }
    if extra:
        manifest.update(extra)
    path = f"{out_path}.manifest.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def branch_profile(branch: str, grid, config: PhysicsConfig, normalization: str):
    """Screen profile for one named branch of the marked interferometer."""
    if branch == "elt":
        _, _, coeffs = _coefficients(config)
        return intensity.elt_intensity(grid, coeffs, normalization)
    if branch in ("ground", "full"):
        state = marking.post_slit_state(config)
        if branch == "full":
            return intensity.branch_intensity(state, grid, config, normalization, label="full")
        ground, _ = marking.measure_internal(state)
        return intensity.branch_intensity(ground, grid, config, normalization, label="ground")
    if branch in ("fringes", "antifringes"):
        a = complex(config.amp_nonexotic)
        marked = marking.CompositeState.from_unnormalized(
            {
                marking.BasisLabel("1", "g", "10"): a,
                marking.BasisLabel("2", "g", "01"): a,
            }
        )
        plus, minus = marking.eraser_basis_single_detector(marked)
        chosen = plus if branch == "fringes" else minus
        return intensity.branch_intensity(chosen, grid, config, normalization, label=branch)
    raise ConfigError(f"unknown branch {branch!r}")


def profile_csv(profile: intensity.IntensityProfile) -> str:
    lines = ["x_m,intensity,visibility_pointwise"]
    vis = profile.visibility
    if vis is None:
        vis = np.zeros_like(profile.values)
    for x, value, v in zip(profile.grid, profile.values, vis):
        lines.append(f"{_fmt(x)},{_fmt(value)},{_fmt(v)}")
    return "\n".join(lines) + "\n"


def cmd_intensity(args) -> int:
    config = _load(args)
    _, _, coeffs = _coefficients(config)
    grid = _grid(args, coeffs)
    normalization = "raw" if args.raw else "peak"
    profile = branch_profile(args.branch, grid, config, normalization)
    _write_text(args.out, profile_csv(profile))
    if args.out is not None:
        write_manifest(args.out, config, "intensity", {"branch": args.branch, "normalization": normalization})
    return EXIT_OK


def cmd_verify(args) -> int:
    config = _load(args)
    report = verification.full_verification(
        config,
        points=args.points,
        tolerance=args.tolerance,
        quadrature=not args.skip_quadrature,
        corrupt=args.corrupt_z,
    )
    text = report.render() + "\n"
    worst = report.worst()
    if worst is not None:
        text += f"worst offender: {worst.name} (deviation {worst.deviation:.3e})"
        if worst.detail:
            text += f", {worst.detail}"
        text += "\n"
    _write_text(args.out, text)
    if args.out is not None:
        write_manifest(
            args.out, config, "verify",
            {"points": args.points, "tolerance": args.tolerance, "passed": report.passed},
        )
    return EXIT_OK if report.passed else EXIT_VERIFY


def _prob(p: float) -> str:
    return f"{p:.11e}"  # 12 significant digits


def _state_table(state: marking.CompositeState) -> list[str]:
    lines = []
    for label, amp in sorted(state.terms.items(), key=lambda kv: (kv[0].path, kv[0].cavities)):
        lines.append(
            f"  path {label.path:<3} level {label.level} cavities {label.cavities:<4} "
            f"amplitude {amp.real:+.12e} {amp.imag:+.12e}j"
        )
    return lines


def cmd_states(args) -> int:
    config = _load(args)
    state = marking.post_slit_state(config)
    lines = ["post-slit composite state:"]
    lines += _state_table(state)

    if args.measurement == "bell":
        phi_plus, phi_minus, rest = marking.measure_bell_cavities(state)
        lines.append("joint cavity measurement (Bell basis):")
        for br in (phi_plus, phi_minus, rest):
            lines.append(f" branch {br.name}: probability {_prob(br.probability)}")
            if br.state is not None:
                lines += _state_table(br.state)
    elif args.measurement == "internal":
        ground, excited = marking.measure_internal(state)
        lines.append("atomic-level measurement:")
        for br in (ground, excited):
            lines.append(f" branch {br.name}: probability {_prob(br.probability)}")
            if br.state is not None:
                lines += _state_table(br.state)
    elif args.measurement != "none":
        raise ConfigError(f"unknown measurement {args.measurement!r}")

    density = marking.reduce_center_of_mass(state)
    paths, mat = density.matrix()
    lines.append("reduced center-of-mass weight matrix (paths " + ", ".join(paths) + "):")
    for row in mat:
        lines.append("  " + "  ".join(f"{w.real:+.12e}{w.imag:+.12e}j" for w in row))
    _write_text(args.out, "\n".join(lines) + "\n")
    if args.out is not None:
        write_manifest(args.out, config, "states", {"measurement": args.measurement})
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = _load(args)
    if args.parameter not in SWEEP_PARAMETERS:
        raise ConfigError(f"unknown sweep parameter {args.parameter!r}")
    lo, hi = args.range
    if not (lo > 0 and hi >= lo):
        raise ConfigError("sweep range must satisfy 0 < min <= max")
    if args.steps < 1:
        raise ConfigError("sweep needs at least one step")
    values = np.linspace(lo, hi, args.steps) if args.steps > 1 else np.array([lo])

    lines = ["param_value,epsilon_s,gamma_et,fringe_spacing_m,aggregate_visibility,mu_et_rad"]
    for value in values:
        cfg = PhysicsConfig(**{**config_as_dict_for_override(config), args.parameter: float(value)})
        derived, zt, coeffs = _coefficients(cfg)
        spacing = intensity.fringe_spacing(coeffs)
        grid = intensity.default_grid(coeffs, points=801)
        profile = intensity.elt_intensity(grid, coeffs, "peak")
        agg = intensity.aggregate_visibility(profile, spacing)
        lines.append(
            ",".join(
                _fmt(v)
                for v in (float(value), derived.epsilon, coeffs.gamma, spacing, agg, coeffs.mu)
            )
        )
    _write_text(args.out, "\n".join(lines) + "\n")
    if args.out is not None:
        write_manifest(
            args.out, config, "sweep",
            {"parameter": args.parameter, "range": [lo, hi], "steps": args.steps},
        )
    return EXIT_OK


def config_as_dict_for_override(config: PhysicsConfig) -> dict:
    """Constructor kwargs of a config (complex weights kept complex)."""
    out = config_as_dict(config)
    out["amp_exotic"] = complex(out.pop("amp_exotic_re"), out.pop("amp_exotic_im"))
    out["amp_nonexotic"] = complex(out.pop("amp_nonexotic_re"), out.pop("amp_nonexotic_im"))
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eltsim",
        description="Double-slit matter-wave simulator isolating looped-trajectory interference.",
    )
    parser.add_argument("--version", action="version", version=f"eltsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="key=value configuration file")
        p.add_argument("--out", default=None, help="output file (default: stdout)")

    p_int = sub.add_parser("intensity", help="emit a screen intensity profile as CSV")
    common(p_int)
    p_int.add_argument("--branch", choices=BRANCHES, default="elt")
    p_int.add_argument("--grid-min", type=float, default=None, help="left grid edge, m")
    p_int.add_argument("--grid-max", type=float, default=None, help="right grid edge, m")
    p_int.add_argument("--grid-points", type=int, default=2001)
    p_int.add_argument("--raw", action="store_true", help="raw density instead of peak normalization")
    p_int.set_defaults(func=cmd_intensity)

    p_ver = sub.add_parser("verify", help="cross-check closed forms against the chain and quadrature")
    common(p_ver)
    p_ver.add_argument("--points", type=int, default=101)
    p_ver.add_argument("--tolerance", type=float, default=verification.DEFAULT_CHAIN_TOL)
    p_ver.add_argument("--skip-quadrature", action="store_true", help="skip the slow 2-D quadrature check")
    p_ver.add_argument("--corrupt-z", default=None, metavar="NAME", help="fault injection: corrupt one z-table entry (test mode)")
    p_ver.set_defaults(func=cmd_verify)

    p_st = sub.add_parser("states", help="report measurement branches and reduced densities")
    common(p_st)
    p_st.add_argument("--measurement", choices=MEASUREMENTS, default="none")
    p_st.set_defaults(func=cmd_states)

    p_sw = sub.add_parser("sweep", help="sweep one parameter and emit fringe metrics as CSV")
    common(p_sw)
    p_sw.add_argument("--parameter", required=True, choices=SWEEP_PARAMETERS)
    p_sw.add_argument("--range", type=float, nargs=2, required=True, metavar=("MIN", "MAX"))
    p_sw.add_argument("--steps", type=int, default=10)
    p_sw.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (marking.StateError, intensity.ProfileError, closedform.DegenerateConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
