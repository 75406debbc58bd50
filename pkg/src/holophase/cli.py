"""Command-line entry point.

Exit codes: 0 success (or all checks passed), 1 numerical or verification
failure, 2 usage error (bad flags, unreadable or malformed input).
``HOLOPHASE_THREADS`` caps the BLAS and NUFFT thread pools.
"""

from __future__ import annotations

import argparse
import contextlib
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from . import dynamics, io, mt, multiscale, theta_lift, unwinding
from .errors import HolophaseError
from .numerics import LineGrid, Signal

__all__ = ["main", "run", "build_parser"]


class UsageError(Exception):
    """Bad invocation or unreadable input; exit code 2."""


def _existing(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"input file not found: {path}")
    return p


def _load(reader, path: str):
    p = _existing(path)
    try:
        return reader(p)
    except (OSError, ValueError, KeyError, IndexError, TypeError, HolophaseError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _complex_list(text: str) -> list:
    """``"re,im;re,im"`` to a list of complex numbers."""
    out = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        try:
            parts = [float(v) for v in item.split(",")]
        except ValueError as exc:
            raise UsageError(f"bad number in {item!r}") from exc
        if len(parts) != 2:
            raise UsageError(f"expected re,im pairs, got {item!r}")
        out.append(complex(parts[0], parts[1]))
    if not out:
        raise UsageError("no zeros given")
    return out


def _int_range(text: str) -> range:
    lo, _, hi = text.partition(":")
    try:
        a = int(lo)
        b = int(hi) if hi else a
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}; use lo:hi") from exc
    if b < a:
        raise UsageError(f"empty range {text!r}")
    return range(a, b + 1)


def _window(text: str) -> tuple:
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad window {text!r}") from exc
    if len(vals) != 4:
        raise UsageError("window needs x0,x1,y0,y1")
    return vals


def _emit(obj, out: str | None) -> None:
    text = io.write_json(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# subcommands


def _cmd_unwind(args) -> int:
    F = _load(io.read_signal, args.input)
    res = unwinding.unwind(F, depth=args.depth, tol=args.tol, floor=args.floor)
    report = {
        "levels": [{"a": lv.coefficient, "energy": lv.energy, "floored_samples": lv.floored_samples,
                    "winding": lv.winding} for lv in res.levels],
        "stop_reason": res.stop_reason,
        "total_energy": res.total_energy,
        "residual_energy": res.residual.energy(),
        "residual": args.residual,
    }
    if args.residual:
        io.write_signal(res.residual, args.residual)
    _emit(report, args.out)
    return 0


def _cmd_mt(args) -> int:
    try:
        spec = mt.MTBasisSpec.of(_complex_list(args.zeros))
    except HolophaseError as exc:
        raise UsageError(str(exc)) from exc
    if args.sample is not None and not (0 <= args.sample < len(spec) and args.sample_out):
        raise UsageError(f"--sample needs an index in 0..{len(spec) - 1} and --sample-out")
    grid = LineGrid(args.L, args.n)
    report = {"zeros": list(spec.zeros)}
    if args.input:
        f = _load(io.read_signal, args.input)
        if not isinstance(f.grid, LineGrid):
            raise UsageError("mt analysis needs a line-domain signal")
        coef = mt.mt_analyze(f, spec)
        report["coefficients"] = coef.values
        report["tail_bound"] = coef.tail_bound
    if args.gram_out:
        g = mt.mt_gram(spec, grid)
        io.write_matrix_csv(g, args.gram_out)
        report["gram_max_error"] = float(np.max(np.abs(g - np.eye(len(spec)))))
    if args.sample is not None:
        io.write_signal(Signal(grid, mt.mt_function(spec, args.sample, grid.points)), args.sample_out)
    _emit(report, args.out)
    return 0


def _cmd_wavelet(args) -> int:
    idx = [(n, j) for n in _int_range(args.scales) for j in _int_range(args.shifts)]
    if args.sample and not args.sample_out:
        raise UsageError("--sample needs --sample-out")
    report = {"indices": idx}
    if args.gram_out:
        W = multiscale.wavelet_gram(idx, half_width=args.L, n=args.n)
        io.write_matrix_csv(W.gram, args.gram_out)
        report["gram_max_error"] = float(np.max(np.abs(W.gram - np.eye(len(idx)))))
        report["tail_bound"] = float(W.tail_bound.max())
    if args.sample:
        n, _, j = args.sample.partition(",")
        grid = LineGrid(args.L, args.n)
        vals = multiscale.wavelet_eval((int(n), int(j)), grid.points)
        io.write_signal(Signal(grid, vals), args.sample_out)
    _emit(report, args.out)
    return 0


def _cmd_dynamics(args) -> int:
    if args.render and not args.out:
        raise UsageError("--render needs --out")
    spec = _load(io.read_blaschke_spec, args.map)
    F = dynamics.FiniteBlaschke.from_spec(spec)
    report = {"degree": F.degree, "iterates": args.iters}
    if args.render:
        field = "phase" if args.render == "phase" else "neglog_modulus"
        img = dynamics.render(F, args.iters, dynamics.RasterImage(args.width, args.height, _window(args.window)), field)
        if Path(args.out).suffix.lower() == ".pgm":
            dynamics.write_pgm(img, args.out)
        else:
            dynamics.write_ppm(img, args.out)
        report["raster"] = {"path": args.out, **img.metadata}
    if args.zeros_out:
        Z = dynamics.iterate_zeros(F, args.iters)
        io.write_json({"level": Z.level, "zeros": Z.zeros, "found_at": Z.found_at,
                       "divergence_partial": Z.divergence_partial}, args.zeros_out)
        report["zero_count"] = Z.count
    fp = dynamics.fixed_point(F)
    report["fixed_point"] = fp.alpha
    report["multiplier"] = fp.multiplier
    sys.stdout.write(io.write_json(report))
    return 0


def _cmd_lift(args) -> int:
    if args.action == "dirichlet-gram":
        G = theta_lift.dirichlet_gram(args.max_degree, args.max_order)
        if args.out:
            io.write_matrix_csv(G.gram, args.out)
        sys.stdout.write(io.write_json({"labels": G.labels, "refinement": G.refinement,
                                        "max_error": G.refinement[-1]}))
        return 0
    if not args.image:
        raise UsageError(f"lift {args.action} needs --image")
    img = _load(io.read_image, args.image)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", theta_lift.SupportWarning)
        report = _lift_action(args, img)
    report["warnings"] = [str(w.message) for w in caught]
    sys.stdout.write(io.write_json(report))
    return 0


def _lift_action(args, img) -> dict:
    if args.action == "radon":
        grid = LineGrid(args.t_half_width, args.t_points)
        sig = theta_lift.radon(img, args.angle, grid)
        if args.out:
            io.write_signal(sig, args.out)
        return {"angle": args.angle}
    if args.action == "slices":
        fam = theta_lift.slice_family(img, args.M)
        grid = LineGrid(args.t_half_width, args.t_points)
        vals = fam.boundary(grid, args.y)
        if args.out:
            io.write_matrix_csv(vals, args.out)
        return {"M": fam.M, "y": args.y, "t_grid": {"L": grid.half_width, "n": grid.n}}
    if args.action == "extend":
        fam = theta_lift.slice_family(img, args.M)
        if args.y <= 0:
            raise UsageError("extend needs --y > 0")
        out = fam.extend_grid(args.y)
        if args.out:
            io.write_image(out, args.out)
        return {"y": args.y}
    if args.action == "riesz":
        out = theta_lift.riesz(img, args.j, M=args.M)
        if args.out:
            io.write_image(out, args.out)
        return {"j": args.j, "calibration": theta_lift.RIESZ_CALIBRATION}
    rep = theta_lift.isometry_report(img, args.M)
    return {k: v._asdict() for k, v in rep.items()}


def _cmd_verify(args) -> int:
    from .suites import run_suite

    report = run_suite(args.suite, args.seed)
    text = io.write_json(report, args.out)
    sys.stdout.write(text)
    return 0 if report["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    from .suites import SUITES

    p = argparse.ArgumentParser(prog="holophase", description="Phase unwinding, holomorphic bases and slice lifts.")
    p.add_argument("--version", action="version", version=f"holophase {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("unwind", help="Blaschke unwinding of a circle signal")
    s.add_argument("--input", required=True, help="signal CSV (index,re,im) with JSON sidecar")
    s.add_argument("--depth", type=int, default=unwinding.DEFAULT_DEPTH, help="maximum number of levels")
    s.add_argument("--tol", type=float, default=unwinding.DEFAULT_TOL, help="relative residual energy to stop at")
    s.add_argument("--floor", type=float, default=unwinding.DEFAULT_FLOOR, help="relative modulus floor before log")
    s.add_argument("--residual", help="write the residual signal here")
    s.add_argument("--out", help="JSON report path (default stdout)")
    s.set_defaults(func=_cmd_unwind)

    s = sub.add_parser("mt", help="Malmquist-Takenaka analysis and Gram matrices")
    s.add_argument("--zeros", required=True, help='zeros as "re,im;re,im;..." with im > 0')
    s.add_argument("--input", help="line signal CSV to analyze")
    s.add_argument("--L", type=float, default=256.0, help="half width of the line grid")
    s.add_argument("--n", type=int, default=2**15, help="points of the line grid (power of two)")
    s.add_argument("--gram-out", help="write the Gram matrix CSV here")
    s.add_argument("--sample", type=int, help="index of a basis function to sample")
    s.add_argument("--sample-out", help="signal CSV path for --sample")
    s.add_argument("--out", help="JSON report path (default stdout)")
    s.set_defaults(func=_cmd_mt)

    s = sub.add_parser("wavelet", help="holomorphic wavelet Gram matrices and samples")
    s.add_argument("--scales", default="0:0", help="scale range lo:hi")
    s.add_argument("--shifts", default="-2:2", help="shift range lo:hi")
    s.add_argument("--L", type=float, default=512.0, help="half width of the quadrature window")
    s.add_argument("--n", type=int, default=2**18, help="quadrature points (power of two)")
    s.add_argument("--gram-out", help="write the Gram matrix CSV here")
    s.add_argument("--sample", help="wavelet n,j to sample on the grid")
    s.add_argument("--sample-out", help="signal CSV path for --sample")
    s.add_argument("--out", help="JSON report path (default stdout)")
    s.set_defaults(func=_cmd_wavelet)

    s = sub.add_parser("dynamics", help="iterate a disk Blaschke product; zeros and rasters")
    s.add_argument("--map", required=True, help="BlaschkeSpec JSON of the map")
    s.add_argument("--iters", type=int, default=1, help="number of iterations n")
    s.add_argument("--render", choices=["phase", "modulus"], help="raster field")
    s.add_argument("--width", type=int, default=1024, help="raster width in pixels")
    s.add_argument("--height", type=int, default=512, help="raster height in pixels")
    s.add_argument("--window", default="-3.141592653589793,3.141592653589793,0,3",
                   help="x0,x1,y0,y1 of the chart z = exp(-y + ix)")
    s.add_argument("--out", help="raster path (.ppm colour or .pgm grey)")
    s.add_argument("--zeros-out", help="write zeros of F_n as JSON here")
    s.set_defaults(func=_cmd_dynamics)

    s = sub.add_parser("lift", help="slice lifts of planar images")
    s.add_argument("action", choices=["radon", "slices", "extend", "riesz", "isometry", "dirichlet-gram"])
    s.add_argument("--image", help="image CSV or raw float64 with JSON sidecar {n, L}")
    s.add_argument("--M", type=int, default=256, help="number of angles")
    s.add_argument("--angle", type=float, default=0.0, help="radon direction in radians")
    s.add_argument("--y", type=float, default=0.0, help="height above the boundary")
    s.add_argument("--j", type=int, choices=[1, 2], default=1, help="Riesz component")
    s.add_argument("--t-half-width", type=float, default=64.0, help="half width of the t grid")
    s.add_argument("--t-points", type=int, default=4096, help="points of the t grid")
    s.add_argument("--max-degree", type=int, default=4, help="dirichlet-gram: largest n")
    s.add_argument("--max-order", type=int, default=2, help="dirichlet-gram: largest |k|")
    s.add_argument("--out", help="output path (CSV, image or signal by action)")
    s.set_defaults(func=_cmd_lift)

    s = sub.add_parser("verify", help="run an invariant suite and print a JSON report")
    s.add_argument("--suite", required=True, choices=sorted(SUITES) + ["all"])
    s.add_argument("--seed", type=int, default=0, help="seed for the PCG64 generator")
    s.add_argument("--out", help="also write the report here")
    s.set_defaults(func=_cmd_verify)
    return p


@contextlib.contextmanager
def _thread_limit():
    n = os.environ.get("HOLOPHASE_THREADS")
    if not n:
        yield
        return
    from threadpoolctl import threadpool_limits

    with threadpool_limits(limits=int(n)):
        yield


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with _thread_limit():
            return args.func(args)
    except UsageError as exc:
        print(f"holophase: usage error: {exc}", file=sys.stderr)
        return 2
    except HolophaseError as exc:
        print(f"holophase: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())

