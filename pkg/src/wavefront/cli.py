"""Command-line driver for the full analysis pipeline.

Subcommands: ``classify | speed | front | evans | atlas | pulse | seeds``.
Every command prints a short human-readable verdict and writes deterministic
CSV/JSON artifacts (plus rendered figures unless ``--no-plot``) under the
output directory.

Exit codes: 0 success, 1 usage or parameter error, 2 negative analysis
verdict (unclassified, validation failure, unstable, no convergence),
3 internal numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    ComplexEigenvalues,
    DegenerateKernel,
    DomainError,
    MarginViolation,
    NoBackLevel,
    NonConvergence,
    NoPositiveRoot,
    SlowBranchOnly,
    TangentialZero,
    WavefrontError,
)
from .evans import EvansContext, evans_slope_at_zero, rational_laplace_certificate, scan_right_half_plane
from .front import FrontSolution, front_profile, validate_front
from .k2atlas import first_moment, region_scan
from .kernels import BUILTIN_ALIASES, KernelSpec, classify, normalize, wave_speed_condition, zero_structure
from .pulse import PulseParams, phase_portrait, solve_pulse
from .report import write_csv, write_json
from .wavespeed import ModelParams, solve_wave_speed, speed_index_profile

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERDICT = 2
EXIT_NUMERICAL = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; the contract wants 1
        raise _UsageError(message)


def _kernel_label(raw: str) -> str:
    return raw if raw in BUILTIN_ALIASES else Path(raw).stem


def _load_kernel(raw: str):
    if raw in BUILTIN_ALIASES:
        return normalize(KernelSpec.from_alias(raw))
    path = Path(raw)
    if not path.exists():
        raise _UsageError(f"kernel {raw!r} is neither a builtin alias {sorted(BUILTIN_ALIASES)} nor a JSON file")
    return normalize(KernelSpec.from_json(path.read_text(encoding="utf-8")))


def _parse_c0(raw: str) -> float:
    if raw.lower() in ("inf", "infinity"):
        return math.inf
    value = float(raw)
    if value <= 0:
        raise _UsageError("transmission speed must be positive or 'inf'")
    return value


def _add_shared(p: argparse.ArgumentParser, c0_default: str = "1"):
    p.add_argument("--kernel", required=True, help="builtin alias (k1, k2, k3, exp) or path to a kernel JSON")
    p.add_argument("--alpha", type=float, default=1.0, help="synaptic strength")
    p.add_argument("--theta", type=float, default=0.4, help="firing threshold")
    p.add_argument("--c0", default=c0_default, help="transmission speed, a number or 'inf'")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="tabular output format")
    p.add_argument("--no-plot", action="store_true", help="skip figure rendering")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wavefront", description=__doc__)
    parser.add_argument("--version", action="version", version=f"wavefront {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[], help="kernel class verdict with threshold diagram data")
    _add_shared(p)

    p = sub.add_parser("speed", help="unique wave speed and speed-index profile")
    _add_shared(p)
    p.add_argument("--profile-points", type=int, default=400)

    p = sub.add_parser("front", help="solve and validate the traveling front")
    _add_shared(p)
    p.add_argument("--profile-points", type=int, default=800)

    p = sub.add_parser("evans", help="right-half-plane stability scan")
    _add_shared(p)
    p.add_argument("--delta", type=float, default=1e-3, help="radius of the excluded disk at the origin")
    p.add_argument("--R", dest="radius", type=float, default=50.0, help="outer scan radius")
    p.add_argument("--grid", type=int, default=128, help="modulus grid resolution per axis")
    p.add_argument("--contour", type=int, default=4096, help="contour seed points")

    p = sub.add_parser("atlas", help="parameter-plane atlas of the oscillatory family")
    p.add_argument("--a-min", type=float, default=0.05)
    p.add_argument("--a-max", type=float, default=3.0)
    p.add_argument("--theta-min", type=float, default=0.01)
    p.add_argument("--theta-max", type=float, default=0.49)
    p.add_argument("--resolution", type=int, default=300)
    p.add_argument("--out", default="out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--no-plot", action="store_true")

    p = sub.add_parser("pulse", help="fast pulse of the slow-feedback system")
    _add_shared(p, c0_default="inf")
    p.add_argument("--epsilon", type=float, default=0.001, help="perturbation parameter")
    p.add_argument("--gamma", type=float, default=0.001, help="feedback decay")
    p.add_argument("--sweep", action="store_true", help="also run the epsilon convergence sweep")

    p = sub.add_parser("seeds", help="emit the figure-reproduction manifest")
    p.add_argument("--out", default="out")
    return parser


def _write_table(out: Path, name: str, fmt: str, header: list[str], rows: list) -> Path:
    if fmt == "json":
        payload = [dict(zip(header, row)) for row in rows]
        return write_json(out / f"{name}.json", payload)
    return write_csv(out / f"{name}.csv", header, rows)


def cmd_classify(args) -> int:
    kernel = _load_kernel(args.kernel)
    params = ModelParams(args.alpha, args.theta, _parse_c0(args.c0))
    label = _kernel_label(args.kernel)
    try:
        report = classify(kernel, params.alpha, params.theta)
        zeros = zero_structure(kernel)
    except TangentialZero as exc:
        print(f"classify {label}: tangential zero detected ({exc})")
        return EXIT_VERDICT
    out = Path(args.out)
    xs = np.linspace(-zeros.window, zeros.window, 2001)
    rows = list(
        zip(map(float, xs), map(float, kernel.eval(xs)), map(float, params.alpha * kernel.cdf(xs)))
    )
    _write_table(out, f"threshold_diagram_{label}", args.format, ["x", "K", "running_integral"], rows)
    write_json(
        out / f"classify_{label}.json",
        {
            "kernel": label,
            "class": report.label,
            "family": report.family,
            "j": "inf" if report.j_infinite else report.j,
            "k": "inf" if report.k_infinite else report.k,
            "wave_speed_condition": report.wave_speed.label,
            "switch_point": report.wave_speed.switch_point,
            "left": report.threshold.side_label("left"),
            "right": report.threshold.side_label("right"),
            "margins": [
                {"index": m.crossing_index, "value": m.value, "bound": m.bound, "side": m.side}
                for m in report.threshold.margins
            ],
        },
    )
    if not args.no_plot:
        from .figures import render_threshold_diagram

        render_threshold_diagram(kernel, report, zeros, params.alpha, params.theta, out / f"threshold_diagram_{label}.png")
    print(f"classify {label}: class {report.label}, wave-speed condition {report.wave_speed.label}, "
          f"left {report.threshold.side_label('left')}, right {report.threshold.side_label('right')}")
    return EXIT_OK if report.classified else EXIT_VERDICT


def _solve_speed(kernel, params):
    condition = wave_speed_condition(kernel)
    return condition, solve_wave_speed(kernel, params, condition)


def cmd_speed(args) -> int:
    kernel = _load_kernel(args.kernel)
    params = ModelParams(args.alpha, args.theta, _parse_c0(args.c0))
    label = _kernel_label(args.kernel)
    condition, result = _solve_speed(kernel, params)
    out = Path(args.out)
    profile = speed_index_profile(kernel, params.c0, args.profile_points)
    _write_table(out, f"phi_profile_{label}", args.format, ["mu", "phi"], profile)
    write_json(
        out / f"speed_{label}.json",
        {
            "kernel": label,
            "mu0": result.mu0,
            "residual": result.residual,
            "certificate": result.certificate,
            "wave_speed_condition": condition.label,
            "level": params.level,
        },
    )
    if not args.no_plot:
        from .figures import render_phi_profile

        render_phi_profile(profile, params.level, out / f"phi_profile_{label}.png", label=label)
    print(f"speed {label}: mu0 = {result.mu0:.12g} (residual {result.residual:.2e}, {result.certificate})")
    return EXIT_OK


def cmd_front(args) -> int:
    kernel = _load_kernel(args.kernel)
    params = ModelParams(args.alpha, args.theta, _parse_c0(args.c0))
    label = _kernel_label(args.kernel)
    condition, result = _solve_speed(kernel, params)
    front = FrontSolution(kernel, params, result.mu0)
    validation = validate_front(front)
    out = Path(args.out)
    window = 40.0 / kernel.envelope[1]
    rows = front_profile(front, -window, window, args.profile_points)
    _write_table(out, f"front_profile_{label}", args.format, ["z", "U", "Uprime"], rows)
    write_json(
        out / f"front_{label}.json",
        {
            "kernel": label,
            "mu0": result.mu0,
            "residual": result.residual,
            "certificate": result.certificate,
            "wave_speed_condition": condition.label,
            "validation": {
                "threshold_at_zero": validation.threshold_at_zero,
                "derivative_at_zero": validation.derivative_at_zero,
                "left_max": validation.left_max,
                "right_min": validation.right_min,
                "left_limit": validation.left_limit,
                "right_limit": validation.right_limit,
                "passed": validation.passed,
            },
        },
    )
    if not args.no_plot:
        from .figures import render_front_profile

        render_front_profile(rows, params.theta, out / f"front_profile_{label}.png", label=label)
    print(f"front {label}: mu0 = {result.mu0:.12g}, validation {'passed' if validation.passed else 'FAILED'}")
    return EXIT_OK if validation.passed else EXIT_VERDICT


def cmd_evans(args) -> int:
    kernel = _load_kernel(args.kernel)
    params = ModelParams(args.alpha, args.theta, _parse_c0(args.c0))
    label = _kernel_label(args.kernel)
    _, result = _solve_speed(kernel, params)
    ctx = EvansContext.from_front(FrontSolution(kernel, params, result.mu0))
    scan = scan_right_half_plane(ctx, delta=args.delta, radius=args.radius, n_grid=args.grid, n_contour=args.contour)
    out = Path(args.out)
    _write_table(out, f"evans_scan_{label}", args.format, ["re_lambda", "im_lambda", "abs_evans"], list(scan.rows()))
    cert = rational_laplace_certificate(kernel)
    write_json(
        out / f"evans_{label}.json",
        {
            "kernel": label,
            "delta": scan.delta,
            "R": scan.radius,
            "winding": scan.winding,
            "min_modulus": scan.min_modulus,
            "stable": scan.stable,
            "slope_at_zero": evans_slope_at_zero(ctx),
            "certificate": {
                "p_degree": cert.p_degree,
                "q_degree": cert.q_degree,
                "applicable": cert.applicable,
                "spectrally_stable": cert.spectrally_stable,
            },
        },
    )
    if not args.no_plot:
        from .figures import render_evans_surface

        render_evans_surface(scan, out / f"evans_scan_{label}.png", label=label)
    print(f"evans {label}: winding {scan.winding}, min modulus {scan.min_modulus:.3e}, "
          f"{'stable' if scan.stable else 'NOT STABLE'}")
    return EXIT_OK if scan.stable else EXIT_VERDICT


def cmd_atlas(args) -> int:
    grid = region_scan((args.a_min, args.a_max), (args.theta_min, args.theta_max), args.resolution)
    out = Path(args.out)
    _write_table(out, "atlas", args.format, ["a", "theta", "in_region", "class", "mu"], list(grid.rows()))
    moment_rows = [(float(a), float(f)) for a, f in zip(grid.a_values, first_moment(grid.a_values))]
    _write_table(out, "moment_curve", args.format, ["a", "f"], moment_rows)
    write_json(
        out / "atlas.json",
        {
            "a_star": grid.a_star,
            "a_range": [args.a_min, args.a_max],
            "theta_range": [args.theta_min, args.theta_max],
            "resolution": [len(grid.a_values), len(grid.theta_values)],
            "in_region_count": int(np.sum(grid.in_region)),
        },
    )
    if not args.no_plot:
        from .figures import render_atlas, render_moment_curve

        render_atlas(grid, out / "atlas.png")
        render_moment_curve(grid.a_values, first_moment(grid.a_values), grid.a_star, out / "moment_curve.png")
    print(f"atlas: class boundary at a = {grid.a_star:.6f}, "
          f"{int(np.sum(grid.in_region))}/{grid.in_region.size} grid points in region")
    return EXIT_OK


def cmd_pulse(args) -> int:
    kernel = _load_kernel(args.kernel)
    c0 = _parse_c0(args.c0)
    if not math.isinf(c0):
        raise _UsageError("pulse analysis runs in the instantaneous-transmission mode; use --c0 inf")
    params = PulseParams(args.alpha, args.theta, args.gamma, args.epsilon)
    label = _kernel_label(args.kernel)
    _, front_result = _solve_speed(kernel, params.front_params)
    solution = solve_pulse(kernel, params, front_result.mu0)
    portrait = phase_portrait(solution)
    out = Path(args.out)
    _write_table(out, f"pulse_portrait_{label}", args.format, ["z", "U", "W"], list(portrait.samples))
    _write_table(
        out,
        f"pulse_singular_{label}",
        args.format,
        ["U_sing", "W_sing"],
        [(float(u), float(w)) for u, w in portrait.singular_overlay],
    )
    write_json(
        out / f"pulse_{label}.json",
        {
            "kernel": label,
            "mu": solution.mu,
            "Z": solution.width,
            "residual": solution.residual,
            "epsilon": params.epsilon,
            "gamma": params.gamma,
            "mu_front": front_result.mu0,
        },
    )
    if args.sweep:
        rows = []
        for eps in (1e-3, 1e-4, 1e-5):
            sol = solve_pulse(kernel, PulseParams(args.alpha, args.theta, args.gamma, eps), front_result.mu0)
            rows.append((eps, sol.mu, sol.width, abs(sol.mu - front_result.mu0)))
        _write_table(out, f"pulse_sweep_{label}", args.format, ["epsilon", "mu", "Z", "gap_to_front"], rows)
    if not args.no_plot:
        from .figures import render_phase_portrait

        render_phase_portrait(portrait, out / f"pulse_portrait_{label}.png", label=label)
    print(f"pulse {label}: mu = {solution.mu:.10g}, width = {solution.width:.6g}, "
          f"residual {solution.residual:.2e}")
    return EXIT_OK


_SEED_PARAMS = ["--alpha", "1", "--theta", "0.4"]


def cmd_seeds(args) -> int:
    entries = []
    for i, alias in enumerate(("k1", "k2", "k3"), start=1):
        entries.append({"figure": f"fig{i:02d}_threshold_diagram_{alias}",
                        "command": ["classify", "--kernel", alias, *_SEED_PARAMS, "--c0", "1"]})
    for alias in ("k1", "k2", "k3"):
        entries.append({"figure": f"fig04_speed_index_{alias}",
                        "command": ["speed", "--kernel", alias, *_SEED_PARAMS, "--c0", "1"]})
    for alias in ("k1", "k2", "k3"):
        entries.append({"figure": f"fig05_front_{alias}",
                        "command": ["front", "--kernel", alias, *_SEED_PARAMS, "--c0", "1"]})
    for alias in ("k1", "k2", "k3"):
        entries.append({"figure": f"fig06_evans_{alias}",
                        "command": ["evans", "--kernel", alias, *_SEED_PARAMS, "--c0", "1",
                                     "--delta", "0.001", "--R", "50"]})
    entries.append({"figure": "fig07_moment_curve", "command": ["atlas"]})
    entries.append({"figure": "fig08_region", "command": ["atlas"]})
    for i, alias in enumerate(("k1", "k2", "k3"), start=9):
        entries.append({"figure": f"fig{i:02d}_pulse_{alias}",
                        "command": ["pulse", "--kernel", alias, *_SEED_PARAMS, "--c0", "inf",
                                     "--epsilon", "0.001", "--gamma", "0.001"]})
    path = write_json(Path(args.out) / "seeds.json", {"version": __version__, "figures": entries})
    print(f"seeds: wrote {len(entries)} reproduction configs to {path}")
    return EXIT_OK


_COMMANDS = {
    "classify": cmd_classify,
    "speed": cmd_speed,
    "front": cmd_front,
    "evans": cmd_evans,
    "atlas": cmd_atlas,
    "pulse": cmd_pulse,
    "seeds": cmd_seeds,
}

# failures that are negative verdicts about the model, not solver breakage
_VERDICT_ERRORS = (
    TangentialZero,
    MarginViolation,
    SlowBranchOnly,
    NoBackLevel,
    NoPositiveRoot,
)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, DegenerateKernel, ComplexEigenvalues, ValueError, json.JSONDecodeError) as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _VERDICT_ERRORS as exc:
        print(f"negative verdict: {exc}", file=sys.stderr)
        return EXIT_VERDICT
    except NonConvergence as exc:
        # a pulse that does not converge is a verdict; quadrature failure is not
        if args.command == "pulse":
            print(f"no convergence: {exc}", file=sys.stderr)
            return EXIT_VERDICT
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except WavefrontError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
