"""Default grids, seeds and tolerances used by the CLI and figure generators.

Every figure can be regenerated from a clean checkout with no flags; all the
numbers that define it live here.

=========================  ===================================================
name                       meaning
=========================  ===================================================
GRID_POINTS                points in every default t-sweep
ONE_MINUS_T_RANGE          (largest, smallest) value of 1 - t in a sweep
GRID_SCALE                 "log-complement": geometric spacing in 1 - t
PASS_NUMBERS               pass numbers drawn as separate curves
PASS_SWEEP                 (n_min, n_max, points) for sweeps over n
PASS_SWEEP_T               transmissions drawn as separate curves vs n
PHASE_SCAN_M               phase settings in the conventional scan
MC_*                       Monte Carlo defaults (desk-scaled shot count)
MC_FIGURE_*                Monte Carlo histogram figure (10^9 shots per trial)
MATERIAL_*                 grids for the material-parameter figure
CSV_FLOAT_FORMAT           17 significant digits, round-trippable
=========================  ===================================================
"""

import numpy as np

GRID_POINTS = 400
ONE_MINUS_T_RANGE = (0.99, 1e-4)
GRID_SCALE = "log-complement"

PASS_NUMBERS = (0.5, 1.0, 2.0, 5.0, 100.0)
PASS_SWEEP = (0.05, 300.0, 400)
PASS_SWEEP_T = (0.5, 0.8, 0.9, 0.95, 0.99)

PHASE_SCAN_M = 10_000

MC_T = 0.8
MC_DELTA_T = 1e-6
MC_N = 1.0
MC_SHOTS = 10_000
MC_TRIALS = 10_000
MC_SEED = 7

MC_FIGURE_T = (0.8, 0.05, 0.005)
MC_FIGURE_N = (0.5, 1.0, 2.0)
MC_FIGURE_SHOTS = 10**9
MC_FIGURE_TRIALS = 10_000
MC_FIGURE_SEED = 7

MATERIAL_GAMMAS = (0.1, 0.2, 0.5, 1.0, 2.0)
MATERIAL_L_RANGE = (0.01, 10.0)
MATERIAL_INV_GAMMA_RANGE = (0.1, 10.0)
MATERIAL_LENGTHS = (0.5, 1.0, 2.0)

CSV_FLOAT_FORMAT = ".17g"

FIGURE_IDS = ("2a", "2b", "2c", "3a", "3b", "3c", "4a", "4b", "4c", "5", "s1", "s2")


def t_grid(t_min=None, t_max=None, steps=GRID_POINTS, scale=GRID_SCALE):
    """Transmission grid, ascending.

    ``log-complement`` spaces ``1 - t`` geometrically so the t -> 1 region is
    resolved; ``linear`` spaces ``t`` uniformly.
    """
    if t_min is None:
        t_min = 1.0 - ONE_MINUS_T_RANGE[0]
    if t_max is None:
        t_max = 1.0 - ONE_MINUS_T_RANGE[1]
    if not 0.0 < t_min < t_max < 1.0:
        raise ValueError(f"grid bounds must satisfy 0 < t_min < t_max < 1, got ({t_min}, {t_max})")
    if steps < 2:
        raise ValueError(f"a grid needs at least 2 steps, got {steps}")
    if scale == "linear":
        return np.linspace(t_min, t_max, steps)
    if scale == "log-complement":
        return 1.0 - np.geomspace(1.0 - t_min, 1.0 - t_max, steps)
    raise ValueError(f"unknown grid scale {scale!r}")
