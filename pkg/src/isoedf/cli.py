"""Command-line front end: spectra, atomic models, predictions, simulations.

Output convention: a `#`-prefixed JSON header line with run metadata,
then plain CSV rows, so one file feeds both scripts and plot tools.
Exit codes: 0 success, 2 usage error, 1 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from contextlib import ExitStack

from .ecm import ArrayNoiseConfig, ensemble_spectrum
from .linalg import NumericError
from .mc import McConfig, run_mc
from .report import compare
from .rmt import FmcProblem, SolverError, _auto_grid, density_curve, predict_edf
from .spike import classify, full_measure, reduce


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def _open_out(args, stack: ExitStack):
    if args.out:
        return stack.enter_context(open(args.out, "w"))
    return sys.stdout


def _positive(parser, name: str, value, integer=False, minimum=None):
    if value is None:
        return
    if integer and int(value) != value:
        parser.error(f"{name} must be an integer, got {value}")
    low = minimum if minimum is not None else (1 if integer else 0.0)
    if (integer and value < low) or (not integer and value <= 0):
        bound = f">= {low}" if integer else "> 0"
        parser.error(f"{name} must be {bound}, got {value}")


def _resolve_c_and_l(args, parser) -> tuple[float, int]:
    """Aspect ratio and snapshot count from --c / --snapshots (either suffices)."""
    if args.c is None and args.snapshots is None:
        parser.error("one of --c or --snapshots is required")
    if args.c is not None:
        snapshots = args.snapshots if args.snapshots is not None else round(args.n / args.c)
        return args.c, int(snapshots)
    return args.n / args.snapshots, args.snapshots


def _cmd_eigvals(args, parser):
    spectrum = ensemble_spectrum(ArrayNoiseConfig(n=args.n, zeta=args.zeta))
    with ExitStack() as stack:
        out = _open_out(args, stack)
        header = {"n": args.n, "zeta": args.zeta}
        print(f"# {json.dumps(header)}", file=out)
        print("index,gamma", file=out)
        for i, g in enumerate(spectrum.values, start=1):
            print(f"{i},{_fmt(g)}", file=out)


def _cmd_atoms(args, parser):
    c, _ = _resolve_c_and_l(args, parser)
    spectrum = ensemble_spectrum(ArrayNoiseConfig(n=args.n, zeta=args.zeta))
    measure = reduce(classify(spectrum, c), args.n)
    with ExitStack() as stack:
        out = _open_out(args, stack)
        header = {"n": args.n, "zeta": args.zeta, "c": c, "atoms": len(measure.atoms)}
        print(f"# {json.dumps(header)}", file=out)
        print("location,weight", file=out)
        for t, w in measure.atoms:
            print(f"{_fmt(t)},{_fmt(w)}", file=out)


def _cmd_predict(args, parser):
    c, _ = _resolve_c_and_l(args, parser)
    pred = predict_edf(
        ArrayNoiseConfig(n=args.n, zeta=args.zeta),
        c,
        mode=args.mode,
        points=args.grid_points,
        eta=args.eta,
    )
    density = pred.density
    with ExitStack() as stack:
        out = _open_out(args, stack)
        header = {
            "atoms": pred.atom_count,
            "c": c,
            "eta": args.eta,
            "zero_mass": density.zero_mass,
            "wall_ms": round(pred.wall_ms, 3),
        }
        print(f"# {json.dumps(header)}", file=out)
        print("x,f", file=out)
        for x, f in zip(density.grid, density.values):
            print(f"{_fmt(x)},{_fmt(f)}", file=out)


def _cmd_simulate(args, parser):
    _, snapshots = _resolve_c_and_l(args, parser)
    cfg = ArrayNoiseConfig(n=args.n, zeta=args.zeta)
    mc_cfg = McConfig(
        cfg=cfg, snapshots=snapshots, trials=args.trials, seed=args.seed, bins=args.bins
    )
    emp = run_mc(mc_cfg)
    with ExitStack() as stack:
        out = _open_out(args, stack)
        header = {
            "n": args.n,
            "zeta": args.zeta,
            "snapshots": snapshots,
            "trials": args.trials,
            "seed": args.seed,
            "bins": args.bins,
            "c": mc_cfg.c,
            "zero_count": emp.zero_count,
        }
        print(f"# {json.dumps(header)}", file=out)
        if args.format == "pooled":
            print("trial,index,g", file=out)
            for trial in range(emp.trials):
                for i, g in enumerate(emp.per_trial[trial], start=1):
                    print(f"{trial},{i},{_fmt(g)}", file=out)
        else:
            print("bin_left,bin_right,height", file=out)
            for left, right, h in zip(
                emp.hist_edges[:-1], emp.hist_edges[1:], emp.hist_heights
            ):
                print(f"{_fmt(left)},{_fmt(right)},{_fmt(h)}", file=out)


def _cmd_compare(args, parser):
    c, snapshots = _resolve_c_and_l(args, parser)
    cfg = ArrayNoiseConfig(n=args.n, zeta=args.zeta)
    pred = predict_edf(cfg, c, mode=args.mode, points=args.grid_points, eta=args.eta)
    start = time.perf_counter()
    emp = run_mc(
        McConfig(cfg=cfg, snapshots=snapshots, trials=args.trials, seed=args.seed, bins=args.bins)
    )
    mc_ms = (time.perf_counter() - start) * 1e3
    rep = compare(
        pred.density,
        emp,
        atom_count=pred.atom_count,
        runtime_model_ms=pred.wall_ms,
        runtime_mc_ms=mc_ms,
    )
    payload = {
        "n": args.n,
        "zeta": args.zeta,
        "c": c,
        "mode": args.mode,
        "atom_count": rep.atom_count,
        "ks": rep.ks,
        "l1": rep.l1,
        "zero_mass_model": rep.zero_mass_model,
        "zero_frac_empirical": rep.zero_frac_empirical,
        "runtime_model_ms": round(rep.runtime_model_ms, 3),
        "runtime_mc_ms": round(rep.runtime_mc_ms, 3),
        "seed": args.seed,
    }
    with ExitStack() as stack:
        out = _open_out(args, stack)
        print(json.dumps(payload, indent=2), file=out)


def _cmd_bench(args, parser):
    c, _ = _resolve_c_and_l(args, parser)
    spectrum = ensemble_spectrum(ArrayNoiseConfig(n=args.n, zeta=args.zeta))
    reduced = FmcProblem(measure=reduce(classify(spectrum, c), args.n), c=c)
    full = FmcProblem(measure=full_measure(spectrum), c=c)
    grid = _auto_grid(full, args.grid_points)
    start = time.perf_counter()
    density_curve(reduced, grid, args.eta)
    reduced_ms = (time.perf_counter() - start) * 1e3
    start = time.perf_counter()
    density_curve(full, grid, args.eta)
    full_ms = (time.perf_counter() - start) * 1e3
    payload = {
        "n": args.n,
        "zeta": args.zeta,
        "c": c,
        "grid_points": args.grid_points,
        "eta": args.eta,
        "atoms_reduced": len(reduced.measure.atoms),
        "atoms_full": len(full.measure.atoms),
        "reduced_ms": round(reduced_ms, 3),
        "full_ms": round(full_ms, 3),
        "speedup": round(full_ms / reduced_ms, 3),
    }
    with ExitStack() as stack:
        out = _open_out(args, stack)
        print(json.dumps(payload, indent=2), file=out)


def _add_common(sub, *, snapshots=False, model=False, sim=False):
    sub.add_argument("--n", type=int, required=True, help="sensor count")
    sub.add_argument("--zeta", type=float, default=0.5, help="sensor spacing / wavelength")
    sub.add_argument("--out", default=None, help="output file (default: stdout)")
    if snapshots:
        sub.add_argument("--c", type=float, default=None, help="aspect ratio N/L")
        sub.add_argument(
            "--snapshots", type=int, default=None, help="snapshot count L (alternative to --c)"
        )
    if model:
        sub.add_argument("--grid-points", type=int, default=1500, help="density grid size")
        sub.add_argument("--eta", type=float, default=1e-6, help="smoothing offset")
    if sim:
        sub.add_argument("--trials", type=int, default=500, help="Monte Carlo trials")
        sub.add_argument("--seed", type=int, default=0, help="reproducibility seed")
        sub.add_argument("--bins", type=int, default=75, help="histogram bin count")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isoedf",
        description=(
            "Limiting eigenvalue density of sample covariance matrices for "
            "cylindrically isotropic line-array noise, with Monte Carlo validation."
        ),
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    sub = subs.add_parser("eigvals", help="ensemble covariance spectrum as CSV")
    _add_common(sub)
    sub.set_defaults(func=_cmd_eigvals)

    sub = subs.add_parser("atoms", help="reduced atomic measure as CSV")
    _add_common(sub, snapshots=True)
    sub.set_defaults(func=_cmd_atoms)

    sub = subs.add_parser("predict", help="limiting density curve as CSV")
    _add_common(sub, snapshots=True, model=True)
    sub.add_argument("--mode", choices=("reduced", "full"), default="reduced")
    sub.set_defaults(func=_cmd_predict)

    sub = subs.add_parser("simulate", help="Monte Carlo eigenvalues or histogram as CSV")
    _add_common(sub, snapshots=True, sim=True)
    sub.add_argument("--format", choices=("pooled", "hist"), default="pooled")
    sub.set_defaults(func=_cmd_simulate)

    sub = subs.add_parser("compare", help="model vs simulation report as JSON")
    _add_common(sub, snapshots=True, model=True, sim=True)
    sub.add_argument("--mode", choices=("reduced", "full"), default="reduced")
    sub.set_defaults(func=_cmd_compare)

    sub = subs.add_parser("bench", help="reduced vs full mode timing as JSON")
    _add_common(sub, snapshots=True, model=True)
    sub.set_defaults(func=_cmd_bench)
    return parser


def _validate(args, parser):
    _positive(parser, "--n", args.n, integer=True, minimum=2)
    _positive(parser, "--zeta", args.zeta)
    _positive(parser, "--c", getattr(args, "c", None))
    _positive(parser, "--snapshots", getattr(args, "snapshots", None), integer=True)
    _positive(parser, "--trials", getattr(args, "trials", None), integer=True)
    _positive(parser, "--bins", getattr(args, "bins", None), integer=True)
    _positive(parser, "--eta", getattr(args, "eta", None))
    gp = getattr(args, "grid_points", None)
    if gp is not None and gp < 16:
        parser.error(f"--grid-points must be >= 16, got {gp}")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _validate(args, parser)
    try:
        args.func(args, parser)
    except (SolverError, NumericError) as e:
        print(f"isoedf: numeric failure: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
