"""Command-line front end: ``qsup <command> [flags]``.

Tables are written as CSV (header row, LF line endings, floats with 17
significant digits) or as JSON (an array of objects keyed by column name).
Exit codes: 0 success, 2 usage or domain error, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import defaults
from .bounds import bounds_report, holevo_numeric, nagaoka_numeric, povm_variance
from .errors import DomainError
from .figures import FIGURES, figure_table
from .fisher import phase_scan_cfi, phase_scan_cfi_limit, qfi_phase, qfi_transmission
from .material import MaterialParams, qfi_gamma, qfi_kappa
from .montecarlo import McConfig, run_histogram
from .multipass import (
    enhancement_ratio,
    mixture_optimum,
    optimal_n_bound,
    optimal_n_phase,
    optimal_n_transmission,
)
from .state import SampleParams, bloch_vector, detection_probability, purity, signal_state

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 2, 3


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), defaults.CSV_FLOAT_FORMAT)
    return str(v)


def render(columns, rows, fmt="csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        return buf.getvalue()
    if fmt == "json":
        def plain(v):
            if isinstance(v, np.generic):
                return v.item()
            return v
        objs = [dict(zip(columns, (plain(v) for v in row))) for row in rows]
        return json.dumps(objs, indent=1) + "\n"
    raise UsageError(f"unknown format {fmt!r}")


def emit(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    path = Path(out)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


# --------------------------------------------------------------------------
# argument helpers
# --------------------------------------------------------------------------


def _add_output(p):
    p.add_argument("--out", default="-", help="output file ('-' for stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")


def _add_grid(p, single="t"):
    p.add_argument(f"--{single}", type=float, nargs="+", help="explicit transmission values")
    p.add_argument("--t-min", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--t-steps", type=int, default=defaults.GRID_POINTS)
    p.add_argument("--grid-scale", choices=["linear", "log-complement"], default=defaults.GRID_SCALE)


def _t_values(args):
    if args.t is not None:
        return [float(t) for t in args.t]
    try:
        return [float(t) for t in defaults.t_grid(args.t_min, args.t_max, args.t_steps, args.grid_scale)]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_state(args):
    p = SampleParams(args.t, args.phi, args.n)
    rho = signal_state(p)
    r = bloch_vector(rho)
    cols = ["t", "phi", "n", "theta"]
    row = [p.t, p.phi, p.n, args.theta]
    for i in range(2):
        for j in range(2):
            cols += [f"rho{i}{j}_re", f"rho{i}{j}_im"]
            row += [float(rho[i, j].real), float(rho[i, j].imag)]
    cols += ["purity", "r_x", "r_y", "r_z", "p_plus", "p_minus"]
    row += [purity(rho), *map(float, r),
            detection_probability(p, args.theta, 1), detection_probability(p, args.theta, -1)]
    return cols, [row]


def cmd_qfi(args):
    rows = []
    for n in args.n:
        for t in _t_values(args):
            SampleParams(t, args.phi, n)
            rows.append((t, n, args.phi, float(qfi_transmission(t, n)), float(qfi_phase(t, n))))
    return ["t", "n", "phi", "F_Q_t", "F_Q_phi"], rows


def cmd_bounds(args):
    cols = ["t", "n", "phi", "C_S", "C_H", "C_N", "d_star", "h_star", "lambda_star"]
    if args.numeric:
        cols += ["C_H_numeric", "C_N_numeric"]
    if args.lam is not None:
        cols += ["lambda", "var_lambda"]
    rows = []
    for n in args.n:
        for t in _t_values(args):
            p = SampleParams(t, args.phi, n)
            rep = bounds_report(p)
            row = [t, n, args.phi, rep.c_s, rep.c_h, rep.c_n, rep.d_star, rep.h_star, rep.lambda_star]
            if args.numeric:
                row += [holevo_numeric(p).value, nagaoka_numeric(p).value]
            if args.lam is not None:
                row += [args.lam, povm_variance(p, args.lam)]
            rows.append(row)
    return cols, rows


def cmd_optimal_passes(args):
    cols = ["t", "n_t_star", "n_t_int", "n_phi_star", "n_phi_int",
            "n_sld", "n_holevo", "n_nagaoka", "enhancement_t", "enhancement_phi"]
    rows = []
    for t in _t_values(args):
        nt, nphi = optimal_n_transmission(t), optimal_n_phase(t)
        rows.append((
            t, nt.n_star, nt.n_star_int, nphi.n_star, nphi.n_star_int,
            optimal_n_bound(t, "sld").n_star,
            optimal_n_bound(t, "holevo").n_star,
            optimal_n_bound(t, "nagaoka").n_star,
            enhancement_ratio(t, "t", args.integer),
            enhancement_ratio(t, "phi", args.integer),
        ))
    return cols, rows


def cmd_mixture(args):
    cols = ["t", "x", "n_t", "n_phi", "variance_sum", "nagaoka_min", "ratio"]
    rows = []
    for t in _t_values(args):
        mix = mixture_optimum(t)
        joint = optimal_n_bound(t, "nagaoka").objective_at_star
        rows.append((t, mix.x, mix.n_t, mix.n_phi, mix.variance_sum, joint, joint / mix.variance_sum))
    return cols, rows


def cmd_phase_scan(args):
    cols = ["t", "phi", "M", "F_C_per_measurement", "F_C_limit", "F_Q_t", "ratio"]
    rows = []
    for t in _t_values(args):
        per = phase_scan_cfi(t, args.phi, args.M) / args.M
        fq = float(qfi_transmission(t, 1.0))
        rows.append((t, args.phi, args.M, per, float(phase_scan_cfi_limit(t)), fq, fq / per))
    return cols, rows


def cmd_material(args):
    if args.L is not None:
        lengths = args.L
    else:
        if not 0 < args.L_min < args.L_max or args.L_steps < 2:
            raise UsageError("need 0 < --L-min < --L-max and --L-steps >= 2")
        lengths = [float(v) for v in np.linspace(args.L_min, args.L_max, args.L_steps)]
    rows = []
    for gamma in args.gamma:
        for L in lengths:
            mp = MaterialParams(gamma, args.kappa, L)
            rows.append((gamma, args.kappa, L, qfi_gamma(mp), qfi_kappa(mp)))
    return ["gamma", "kappa", "L", "F_gamma", "F_kappa"], rows


def cmd_montecarlo(args):
    cfg = McConfig(args.t, args.delta_t, args.n, args.shots, args.trials, args.seed)
    res = run_histogram(cfg, workers=args.threads)
    table = render(["trial", "error"], [(i, float(e)) for i, e in enumerate(res.errors)], args.format)
    emit(table, args.out)
    summary = {
        "t": cfg.t, "delta_t": cfg.delta_t, "n": cfg.n, "shots": cfg.shots,
        "trials": cfg.trials, "seed": cfg.seed,
        "sample_std": res.sample_std, "predicted_std": res.predicted_std, "ratio": res.ratio,
        "mean_error": float(np.mean(res.errors)), "skewness": res.skewness,
        "n_clamped": res.n_clamped,
    }
    if args.out not in (None, "-"):
        sys.stdout.write(json.dumps(summary) + "\n")
    else:
        sys.stderr.write(json.dumps(summary) + "\n")
    return None


def _figure_kwargs(args):
    ts = None
    if args.t is not None or args.t_min is not None or args.t_max is not None \
            or args.t_steps != defaults.GRID_POINTS or args.grid_scale != defaults.GRID_SCALE:
        ts = _t_values(args)
    return ts, {"shots": args.shots, "trials": args.trials, "seed": args.seed}


def cmd_figure(args):
    ts, mc = _figure_kwargs(args)
    ext = "json" if args.format == "json" else "csv"
    if args.id == "all":
        if args.out_dir is None:
            raise UsageError("figure all requires --out-dir")
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for fig_id in FIGURES:
            cols, rows = figure_table(fig_id, ts, **mc)
            emit(render(cols, rows, args.format), out_dir / f"fig_{fig_id}.{ext}")
        return None
    cols, rows = figure_table(args.id, ts, **mc)
    if args.out_dir is not None and args.out in (None, "-"):
        Path(args.out_dir).mkdir(parents=True, exist_ok=True)
        emit(render(cols, rows, args.format), Path(args.out_dir) / f"fig_{args.id}.{ext}")
        return None
    return cols, rows


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsup",
        description="Fisher information, Cramer-Rao bounds and multipass optimisation "
                    "for sensing with undetected photons.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("state", help="signal density matrix, Bloch vector and click probabilities")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--n", type=float, default=1.0)
    p.add_argument("--theta", type=float, default=0.0, help="controllable phase")
    _add_output(p)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("qfi", help="quantum Fisher information over a t-grid")
    _add_grid(p)
    p.add_argument("--n", type=float, nargs="+", default=[1.0])
    p.add_argument("--phi", type=float, default=0.0)
    _add_output(p)
    p.set_defaults(func=cmd_qfi)

    p = sub.add_parser("bounds", help="SLD, Holevo and Nagaoka bounds")
    _add_grid(p)
    p.add_argument("--n", type=float, nargs="+", default=[1.0])
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="also report the variance of the random POVM with this weight")
    p.add_argument("--numeric", action="store_true", help="add numerically minimised bounds")
    _add_output(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("optimal-passes", help="optimal pass numbers and QFI enhancement")
    _add_grid(p)
    p.add_argument("--integer", action="store_true", help="round pass numbers for the enhancement")
    _add_output(p)
    p.set_defaults(func=cmd_optimal_passes)

    p = sub.add_parser("mixture", help="mixture of t- and phi-optimal protocols vs the Nagaoka bound")
    _add_grid(p)
    _add_output(p)
    p.set_defaults(func=cmd_mixture)

    p = sub.add_parser("phase-scan", help="Fisher information of the conventional phase scan")
    _add_grid(p)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--M", type=int, default=defaults.PHASE_SCAN_M)
    _add_output(p)
    p.set_defaults(func=cmd_phase_scan)

    p = sub.add_parser("material", help="QFI for absorption and phase per unit length")
    p.add_argument("--gamma", type=float, nargs="+", default=list(defaults.MATERIAL_GAMMAS))
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--L", type=float, nargs="+", default=None)
    p.add_argument("--L-min", type=float, default=defaults.MATERIAL_L_RANGE[0])
    p.add_argument("--L-max", type=float, default=defaults.MATERIAL_L_RANGE[1])
    p.add_argument("--L-steps", type=int, default=defaults.GRID_POINTS)
    _add_output(p)
    p.set_defaults(func=cmd_material)

    p = sub.add_parser("montecarlo", help="simulate the transmission estimator")
    p.add_argument("--t", type=float, default=defaults.MC_T)
    p.add_argument("--delta-t", type=float, default=defaults.MC_DELTA_T)
    p.add_argument("--n", type=float, default=defaults.MC_N)
    p.add_argument("--shots", type=int, default=defaults.MC_SHOTS)
    p.add_argument("--trials", type=int, default=defaults.MC_TRIALS)
    p.add_argument("--seed", type=int, default=defaults.MC_SEED)
    p.add_argument("--threads", type=int, default=None, help="worker threads (default $QSUP_THREADS or 1)")
    _add_output(p)
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("figure", help="data behind one figure panel, or all of them")
    p.add_argument("id", choices=list(FIGURES) + ["all"])
    _add_grid(p)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--shots", type=int, default=None, help="Monte Carlo shots (figure s1)")
    p.add_argument("--trials", type=int, default=None, help="Monte Carlo trials (figure s1)")
    p.add_argument("--seed", type=int, default=None, help="Monte Carlo seed (figure s1)")
    _add_output(p)
    p.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        result = args.func(args)
        if result is not None:
            cols, rows = result
            emit(render(cols, rows, args.format), args.out)
    except (UsageError, DomainError, ValueError, ArithmeticError) as exc:
        print(f"qsup: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qsup: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
