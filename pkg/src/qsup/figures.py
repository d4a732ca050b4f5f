"""Tabular data behind each figure.

Every generator returns ``(columns, rows)`` with one row per grid point in
long format (one row per ``(t, n)`` pair for multi-curve panels). Grids come
from :mod:`qsup.defaults` unless overridden.
"""

from __future__ import annotations

import numpy as np

from . import defaults
from .fisher import _one_minus_t2n, phase_scan_cfi_limit, qfi_phase, qfi_transmission
from .material import MaterialParams, qfi_gamma, qfi_kappa
from .montecarlo import McConfig, run_histogram
from .multipass import (
    enhancement_ratio,
    mixture_optimum,
    optimal_n_bound,
    optimal_n_phase,
    optimal_n_transmission,
)

__all__ = ["FIGURES", "figure_table"]


def _long(ts, ns, fn):
    rows = []
    for n in ns:
        vals = fn(ts, n)
        rows.extend((float(t), float(n), float(v)) for t, v in zip(ts, vals))
    return rows


def fig_2a(ts, **_):
    return ["t", "n", "F_Q_t"], _long(ts, defaults.PASS_NUMBERS, qfi_transmission)


def fig_2b(ts, **_):
    return ["t", "n", "F_Q_phi"], _long(ts, defaults.PASS_NUMBERS, qfi_phase)


def fig_2c(ts, **_):
    fq = qfi_transmission(ts, 1.0)
    fc = phase_scan_cfi_limit(ts)
    rows = [(float(t), float(a), float(b), float(a / b)) for t, a, b in zip(ts, fq, fc)]
    return ["t", "F_Q_t", "F_C_scan", "ratio"], rows


def _pass_sweep():
    lo, hi, steps = defaults.PASS_SWEEP
    return np.geomspace(lo, hi, steps)


def _vs_n(fn, label):
    ns = _pass_sweep()
    rows = []
    for t in defaults.PASS_SWEEP_T:
        vals = fn(t, ns)
        rows.extend((float(t), float(n), float(v)) for n, v in zip(ns, vals))
    return ["t", "n", label], rows


def fig_3a(ts, **_):
    return _vs_n(qfi_transmission, "F_Q_t")


def fig_3b(ts, **_):
    return _vs_n(qfi_phase, "F_Q_phi")


def fig_3c(ts, **_):
    cols = ["t", "n_t_int", "ratio_t_int", "ratio_t", "n_phi_int", "ratio_phi_int", "ratio_phi"]
    rows = []
    for t in ts:
        rows.append((
            float(t),
            optimal_n_transmission(t).n_star_int,
            enhancement_ratio(t, "t", True),
            enhancement_ratio(t, "t", False),
            optimal_n_phase(t).n_star_int,
            enhancement_ratio(t, "phi", True),
            enhancement_ratio(t, "phi", False),
        ))
    return cols, rows


def _holevo_information(t, n):
    # 1/C_H written so that it underflows to 0 instead of dividing by inf
    return n**2 * t ** (2 * n) / (_one_minus_t2n(t, n) * t**2 + 1.0)


def _nagaoka_information(t, n):
    return n**2 * t ** (2 * n) / (1.0 + t * np.sqrt(_one_minus_t2n(t, n))) ** 2


def fig_4a(ts, **_):
    return ["t", "n", "info_H"], _long(ts, defaults.PASS_NUMBERS, _holevo_information)


def fig_4b(ts, **_):
    return ["t", "n", "info_N"], _long(ts, defaults.PASS_NUMBERS, _nagaoka_information)


def fig_4c(ts, **_):
    cols = ["t", "n_qfi_t", "n_qfi_phi", "n_holevo", "n_nagaoka", "n_holevo_int", "n_nagaoka_int"]
    rows = []
    for t in ts:
        h = optimal_n_bound(t, "holevo")
        g = optimal_n_bound(t, "nagaoka")
        rows.append((
            float(t),
            optimal_n_transmission(t).n_star,
            optimal_n_phase(t).n_star,
            h.n_star,
            g.n_star,
            h.n_star_int,
            g.n_star_int,
        ))
    return cols, rows


def fig_5(ts, **_):
    cols = ["t", "ratio", "x", "n_t", "n_phi", "variance_mixture", "variance_nagaoka"]
    rows = []
    for t in ts:
        mix = mixture_optimum(t)
        joint = optimal_n_bound(t, "nagaoka").objective_at_star
        rows.append((float(t), joint / mix.variance_sum, mix.x, mix.n_t, mix.n_phi, mix.variance_sum, joint))
    return cols, rows


def fig_s1(ts=None, shots=None, trials=None, seed=None, **_):
    shots = defaults.MC_FIGURE_SHOTS if shots is None else shots
    trials = defaults.MC_FIGURE_TRIALS if trials is None else trials
    seed = defaults.MC_FIGURE_SEED if seed is None else seed
    rows = []
    for t in defaults.MC_FIGURE_T:
        for n in defaults.MC_FIGURE_N:
            res = run_histogram(McConfig(t, defaults.MC_DELTA_T, n, shots, trials, seed))
            rows.extend((t, n, i, float(e)) for i, e in enumerate(res.errors))
    return ["t", "n", "trial", "error"], rows


def fig_s2(ts=None, **_):
    rows = []
    lengths = np.linspace(*defaults.MATERIAL_L_RANGE, defaults.GRID_POINTS)
    for gamma in defaults.MATERIAL_GAMMAS:
        for L in lengths:
            mp = MaterialParams(gamma, 0.0, float(L))
            rows.append(("length", gamma, float(L), qfi_gamma(mp), qfi_kappa(mp)))
    inv_gammas = np.linspace(*defaults.MATERIAL_INV_GAMMA_RANGE, defaults.GRID_POINTS)
    for L in defaults.MATERIAL_LENGTHS:
        for ig in inv_gammas:
            mp = MaterialParams(1.0 / float(ig), 0.0, L)
            rows.append(("inv_gamma", mp.gamma, L, qfi_gamma(mp), qfi_kappa(mp)))
    return ["sweep", "gamma", "L", "F_gamma", "F_kappa"], rows


FIGURES = {
    "2a": fig_2a,
    "2b": fig_2b,
    "2c": fig_2c,
    "3a": fig_3a,
    "3b": fig_3b,
    "3c": fig_3c,
    "4a": fig_4a,
    "4b": fig_4b,
    "4c": fig_4c,
    "5": fig_5,
    "s1": fig_s1,
    "s2": fig_s2,
}


def figure_table(fig_id: str, ts=None, **mc):
    """``(columns, rows)`` for figure ``fig_id``; ``ts`` overrides the default t-grid."""
    try:
        gen = FIGURES[fig_id]
    except KeyError:
        raise ValueError(f"unknown figure id {fig_id!r}; choose from {', '.join(FIGURES)}") from None
    if ts is None:
        ts = defaults.t_grid()
    return gen(np.asarray(ts, dtype=float), **mc)
