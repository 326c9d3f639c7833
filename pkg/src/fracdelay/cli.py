"""Command-line front end.

Every subcommand writes CSV or JSON to ``--out`` (stdout by default) and a
one-line summary to stderr.  Relative ``--out`` paths resolve against
``$FRACDELAY_OUTPUT_DIR`` when it is set.

Exit codes: 0 success, 2 invalid arguments, 3 numerical domain error.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import io as fio
from .bifurcation import label_region, solve_branches
from .charfn import boundary_residual
from .classify import EPS_BOUNDARY, classify_point, region_scan
from .curves import DEFAULT_SAMPLES, asymptotic_region, ba_region, boundary_curve
from .errors import DomainError
from .simulate import DELTA, MapSpec, Prehistory, SystemParams, bifurcation_sweep, simulate_linear, simulate_nonlinear

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
LONG_STEPS = 50_000
OUTPUT_DIR_ENV = "FRACDELAY_OUTPUT_DIR"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- argument types

def _alpha(s: str) -> float:
    v = float(s)
    if not 0.0 < v <= 1.0:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1], got {s}")
    return v


def _pos_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _complex(s: str) -> complex:
    try:
        return complex(s.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {s}") from None


def _pair(s: str) -> tuple[float, float]:
    parts = s.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {s}")
    lo, hi = float(parts[0]), float(parts[1])
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"empty range {s}")
    return lo, hi


def _shape(s: str) -> tuple[int, int]:
    parts = s.lower().split("x")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected NxM, got {s}")
    return _pos_int(parts[0]), _pos_int(parts[1])


def step_range(s: str) -> np.ndarray:
    """``start:stop:step`` with ``stop`` included when it lies on the grid."""
    parts = s.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected start:stop:step, got {s}")
    start, stop, step = map(float, parts)
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError(f"empty range {s}")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def lin_range(s: str) -> np.ndarray:
    """``start:stop:num`` evenly spaced, both ends included."""
    parts = s.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected start:stop:num, got {s}")
    start, stop, num = float(parts[0]), float(parts[1]), int(parts[2])
    if num < 1 or stop < start:
        raise argparse.ArgumentTypeError(f"empty range {s}")
    return np.linspace(start, stop, num)


# ---------------------------------------------------------------- output

def _resolve(out: str) -> Path:
    p = Path(out)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _format(args) -> str:
    if args.format:
        return args.format
    if args.out and args.out != "-" and args.out.endswith(".json"):
        return "json"
    return "csv"


def _emit(args, text: str) -> None:
    if not args.out or args.out == "-":
        sys.stdout.write(text)
        return
    path = _resolve(args.out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _check_steps(args, steps: int) -> None:
    if steps > LONG_STEPS and not args.allow_long:
        raise UsageError(f"{steps} steps exceeds {LONG_STEPS}; pass --allow-long to run it")


# ---------------------------------------------------------------- commands

def cmd_curve(args) -> int:
    curve = boundary_curve(args.alpha, args.b, args.tau, args.n)
    _emit(args, fio.curve_text(curve, _format(args)))
    _note(f"curve alpha={args.alpha} b={args.b} tau={args.tau} points={len(curve.ts)}")
    return EXIT_OK


def _map_spec(args) -> MapSpec:
    if args.map == "linear":
        return MapSpec.linear(args.a)
    if args.map == "logistic":
        if args.lam is None:
            raise UsageError("--lambda is required for the logistic map")
        return MapSpec.logistic(args.lam)
    if args.beta is None:
        raise UsageError("--beta is required for the cubic map")
    return MapSpec.cubic(args.beta)


def cmd_simulate(args) -> int:
    _check_steps(args, args.steps)
    spec = _map_spec(args)
    x0 = args.x0 if args.x0.imag else args.x0.real
    params = SystemParams(args.alpha, a=args.a, b=args.b, tau=args.tau, x0=x0,
                          prehistory=Prehistory(args.prehistory))
    if args.map == "linear":
        traj = simulate_linear(params, args.steps, delta=args.delta)
    else:
        traj = simulate_nonlinear(spec, params, args.steps, delta=args.delta)
    _emit(args, fio.trajectory_text(traj, _format(args)))
    _note(f"{traj.verdict.value} t_escape={traj.t_escape} tail_max={traj.tail_max:.6g} "
          f"decay_exponent={traj.decay_exponent:.4g}")
    return EXIT_OK


def cmd_classify(args) -> int:
    v = classify_point(args.alpha, args.b, args.tau, args.a, N=args.n, eps=args.eps)
    if args.format == "json":
        _emit(args, fio.json_text({"alpha": args.alpha, "b": args.b, "tau": args.tau, "a": args.a,
                                   "verdict": v.value, "winding": v.winding, "min_dist": v.min_dist}))
    else:
        _emit(args, f"{v.value.value} winding={v.winding} min_dist={v.min_dist:.6g}\n")
    return EXIT_OK


def cmd_scan(args) -> int:
    if args.validate:
        _check_steps(args, args.steps)
    res = region_scan(args.alpha, args.b, args.tau, args.re_range, args.im_range, args.shape,
                      validate=args.validate, T=args.steps, N=args.n, eps=args.eps, jobs=args.jobs)
    _emit(args, fio.scan_text(res, _format(args)))
    if res.agreement:
        ag = res.agreement
        _note(f"agreement {ag['agreeing']}/{ag['compared']} = {ag['fraction']:.4f} "
              f"(near boundary: {ag['near_boundary']})")
        for key, count in ag["matrix"].items():
            if count:
                _note(f"  {key}: {count}")
    else:
        _note(f"scan {res.verdicts.size} points, stable {int(res.stable_mask().sum())}")
    return EXIT_OK


def cmd_branches(args) -> int:
    branches = solve_branches(args.tau, args.alpha_grid, b_range=args.b_range, tol=args.tol, jobs=args.jobs)
    _emit(args, fio.branches_text(branches, _format(args)))
    missing = sum(int(br.missing.sum()) for br in branches)
    _note(f"tau={args.tau} branches={len(branches)} alphas={len(args.alpha_grid)} missing={missing}")
    return EXIT_OK


def cmd_bifdiag(args) -> int:
    _check_steps(args, args.steps)
    if args.map == "logistic":
        if args.lambda_range is None:
            raise UsageError("--lambda-range is required for the logistic map")
        values = args.lambda_range
    else:
        if args.beta_range is None:
            raise UsageError("--beta-range is required for the cubic map")
        values = args.beta_range
    sweep = bifurcation_sweep(args.map, values, args.alpha, args.b, args.tau,
                              x0=args.x0, steps=args.steps, keep=args.keep)
    _emit(args, fio.bifdiag_text(sweep, _format(args)))
    fixed = sweep.fixed_point_mask()
    _note(f"{args.map} sweep {len(values)} values, settled on a fixed point at {int(fixed.sum())}")
    return EXIT_OK


def cmd_ba(args) -> int:
    region = ba_region(args.alpha, args.tau, N=args.n, b_range=args.b_range)
    band = None
    if args.band_b is not None:
        lo, hi = asymptotic_region(args.alpha, args.band_b)
        band = (args.band_b, lo, hi)
        _note(f"large-delay band at b={args.band_b}: ({lo:.16g}, {hi:.16g})")
    _emit(args, fio.ba_text(region, _format(args), band))
    return EXIT_OK


def cmd_label(args) -> int:
    lab = label_region(args.tau, args.b, args.alpha)
    _emit(args, lab.value + "\n")
    return EXIT_OK


def cmd_residual(args) -> int:
    ts = 2 * np.pi * (np.arange(args.n) + 0.5) / args.n
    res = boundary_residual(args.alpha, args.b, args.tau, ts)
    _emit(args, fio.residual_text(ts, res, _format(args)))
    _note(f"max residual {float(res.max()):.3e}")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _common(p, system=True, tau=True):
    p.add_argument("--out", default="-", help="output file, '-' for stdout")
    p.add_argument("--format", choices=fio.FORMATS, default=None)
    if system:
        p.add_argument("--alpha", type=_alpha, required=True)
        p.add_argument("--b", type=float, default=0.0)
    if tau:
        p.add_argument("--tau", type=_pos_int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracdelay", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve", help="sample the boundary curve")
    _common(p)
    p.add_argument("--n", type=_pos_int, default=DEFAULT_SAMPLES)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("simulate", help="iterate the linear or nonlinear system")
    _common(p)
    p.add_argument("--map", choices=("linear", "logistic", "cubic"), default="linear")
    p.add_argument("--a", type=_complex, default=0.0)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--x0", type=_complex, default=0.3)
    p.add_argument("--steps", type=_pos_int, default=2000)
    p.add_argument("--delta", type=float, default=DELTA)
    p.add_argument("--prehistory", choices=[m.value for m in Prehistory], default=Prehistory.CONSTANT_X0.value)
    p.add_argument("--allow-long", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("classify", help="winding-number verdict for one multiplier")
    _common(p)
    p.add_argument("--a", type=_complex, required=True)
    p.add_argument("--n", type=_pos_int, default=DEFAULT_SAMPLES)
    p.add_argument("--eps", type=float, default=EPS_BOUNDARY)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("scan", help="classify a grid of multipliers")
    _common(p)
    p.add_argument("--re-range", type=_pair, default=(-2.0, 2.0))
    p.add_argument("--im-range", type=_pair, default=(-2.0, 2.0))
    p.add_argument("--shape", type=_shape, default=(40, 40), help="n_re x n_im, e.g. 40x40")
    p.add_argument("--validate", action="store_true", help="check every point by simulation")
    p.add_argument("--steps", type=_pos_int, default=2000)
    p.add_argument("--n", type=_pos_int, default=DEFAULT_SAMPLES)
    p.add_argument("--eps", type=float, default=EPS_BOUNDARY)
    p.add_argument("--jobs", type=_pos_int, default=1)
    p.add_argument("--allow-long", action="store_true")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("branches", help="solve the bifurcation branches over an alpha grid")
    _common(p, system=False, tau=False)
    p.add_argument("--tau", type=int, choices=(1, 2), required=True)
    p.add_argument("--alpha-grid", type=lin_range, default=np.linspace(0.1, 0.9, 50),
                   help="start:stop:num")
    p.add_argument("--b-range", type=_pair, default=(-30.0, 30.0))
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--jobs", type=_pos_int, default=1)
    p.set_defaults(func=cmd_branches)

    p = sub.add_parser("bifdiag", help="bifurcation diagram of the logistic or cubic map")
    _common(p)
    p.add_argument("--map", choices=("logistic", "cubic"), default="logistic")
    p.add_argument("--lambda-range", type=step_range, help="start:stop:step")
    p.add_argument("--beta-range", type=step_range, help="start:stop:step")
    p.add_argument("--x0", type=float, default=0.2)
    p.add_argument("--steps", type=_pos_int, default=2000)
    p.add_argument("--keep", type=_pos_int, default=100)
    p.add_argument("--allow-long", action="store_true")
    p.set_defaults(func=cmd_bifdiag)

    p = sub.add_parser("ba", help="real-multiplier stability region in the (b, a) plane")
    _common(p, system=False)
    p.add_argument("--alpha", type=_alpha, required=True)
    p.add_argument("--n", type=_pos_int, default=2000)
    p.add_argument("--b-range", type=_pair, default=(-5.0, 5.0))
    p.add_argument("--band-b", type=float, default=None, help="also report the large-delay band at this b")
    p.set_defaults(func=cmd_ba)

    p = sub.add_parser("label", help="name the bifurcation region of (b, alpha)")
    _common(p, tau=False)
    p.add_argument("--tau", type=int, choices=(1, 2), required=True)
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("residual", help="characteristic-function residual along the boundary")
    _common(p)
    p.add_argument("--n", type=_pos_int, default=2000)
    p.set_defaults(func=cmd_residual)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE
    except DomainError as exc:
        _note(f"domain error: {exc}")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
