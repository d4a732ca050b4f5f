"""Optimal pass numbers, enhancement ratios and the two-protocol mixture.

Sending the idler through the sample ``n`` times maps ``t -> t^n`` and
``phi -> n phi``. The per-parameter QFIs then peak at a finite ``n`` that
scales like ``1/|ln t|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import nagaoka_cost, sld_cost
from .errors import DomainError
from .fisher import qfi_phase, qfi_transmission

__all__ = [
    "PassOptimum",
    "MixtureAllocation",
    "optimal_n_transmission",
    "optimal_n_phase",
    "optimal_n_bound",
    "enhancement_ratio",
    "mixture_optimum",
    "mixture_allocation",
    "mixture_discrete",
    "nagaoka_vs_mixture_ratio",
    "bisect",
    "golden_section_min",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class PassOptimum:
    """Continuous optimum ``n_star``, its best integer neighbour and the objective there."""

    n_star: float
    n_star_int: int
    objective_at_star: float


@dataclass(frozen=True)
class MixtureAllocation:
    """Shot fraction ``x`` spent on the transmission protocol with ``n_t`` passes.

    ``variance_sum`` is per shot, i.e. ``N * (Var t + Var phi)``.
    """

    x: float
    n_t: float
    n_phi: float
    variance_sum: float


def _check_t(t):
    t = float(t)
    if not np.isfinite(t) or not 0.0 < t < 1.0:
        raise DomainError(f"transmission t must lie in (0, 1), got {t!r}")
    return t


def bisect(f, lo, hi, ftol=1e-12, max_iter=200):
    """Root of ``f`` on a sign-changing bracket ``[lo, hi]``.

    Stops once ``|f| < ftol`` or the bracket can no longer shrink.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise ValueError("bracket does not straddle a root")
    mid = 0.5 * (lo + hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if abs(fmid) < ftol or mid in (lo, hi):
            return mid
        if np.sign(fmid) == np.sign(flo):
            lo, flo = mid, fmid
        else:
            hi = mid
    return mid


def golden_section_min(f, lo, hi, xtol=1e-10, max_iter=500):
    """Minimiser of a unimodal ``f`` on ``[lo, hi]`` to bracket width ``xtol``."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return c if fc <= fd else d


def _best_integer(objective, n_star, maximise):
    # compare the two integer neighbours (floor at 1); exact ties go to the larger n
    lo = max(1, math.floor(n_star))
    hi = max(1, math.ceil(n_star))
    if lo == hi:
        return lo
    f_lo, f_hi = objective(lo), objective(hi)
    sign = 1.0 if maximise else -1.0
    if sign * (f_lo - f_hi) > _TIE_RTOL * max(abs(f_lo), abs(f_hi)):
        return lo
    return hi


def _transmission_residual(t):
    log_t = math.log(t)
    return lambda n: -math.expm1(2 * n * log_t) + n * log_t


def optimal_n_transmission(t) -> PassOptimum:
    """Pass number maximising ``F_tt``: the positive root of ``1 + n ln t = t^(2n)``."""
    t = _check_t(t)
    scale = 1.0 / abs(math.log(t))
    n_star = bisect(_transmission_residual(t), 1e-6 * scale, 10.0 * scale)

    def objective(n):
        return float(qfi_transmission(t, n))

    return PassOptimum(n_star, _best_integer(objective, n_star, True), objective(n_star))


def optimal_n_phase(t) -> PassOptimum:
    """Pass number maximising ``F_phiphi = n^2 t^(2n)``, i.e. ``-1/ln t``."""
    t = _check_t(t)
    n_star = -1.0 / math.log(t)

    def objective(n):
        return float(qfi_phase(t, n))

    return PassOptimum(n_star, _best_integer(objective, n_star, True), objective(n_star))


_BOUND_COSTS = {"sld": sld_cost, "holevo": sld_cost, "nagaoka": nagaoka_cost}


def optimal_n_bound(t, kind: str) -> PassOptimum:
    """Pass number minimising the SLD, Holevo or Nagaoka bound at transmission ``t``."""
    t = _check_t(t)
    try:
        cost = _BOUND_COSTS[kind]
    except KeyError:
        raise ValueError(f"kind must be one of {sorted(_BOUND_COSTS)}, got {kind!r}") from None

    def objective(n):
        return float(cost(t, n))

    n_star = golden_section_min(objective, 1e-3, 10.0 / abs(math.log(t)))
    return PassOptimum(n_star, _best_integer(objective, n_star, False), objective(n_star))


def enhancement_ratio(t, which: str, integer_constrained: bool = False) -> float:
    """``F(n*)/F(1)`` for ``which`` in {"t", "phi"}."""
    t = _check_t(t)
    if which == "t":
        opt, qfi = optimal_n_transmission(t), qfi_transmission
    elif which == "phi":
        opt, qfi = optimal_n_phase(t), qfi_phase
    else:
        raise ValueError(f"which must be 't' or 'phi', got {which!r}")
    n = opt.n_star_int if integer_constrained else opt.n_star
    return float(qfi(t, n) / qfi(t, 1.0))


def mixture_allocation(t, n_t, n_phi) -> MixtureAllocation:
    """Best shot split between a ``n_t``-pass t-protocol and a ``n_phi``-pass phase protocol."""
    t = _check_t(t)
    a = 1.0 / float(qfi_transmission(t, n_t))
    b = 1.0 / float(qfi_phase(t, n_phi))
    ra, rb = math.sqrt(a), math.sqrt(b)
    return MixtureAllocation(ra / (ra + rb), float(n_t), float(n_phi), (ra + rb) ** 2)


def mixture_optimum(t) -> MixtureAllocation:
    """Mixture using each parameter's own QFI-optimal pass number (infinite-shot limit)."""
    t = _check_t(t)
    return mixture_allocation(t, optimal_n_transmission(t).n_star, optimal_n_phase(t).n_star)


def mixture_discrete(t, shots: int, n_t=None, n_phi=None) -> MixtureAllocation:
    """Finite-shot version: ``x N`` is rounded to an integer split and the variance recomputed."""
    if shots < 2:
        raise ValueError("need at least two shots to split between protocols")
    cont = mixture_optimum(t) if n_t is None else mixture_allocation(t, n_t, n_phi)
    shots_t = min(max(1, round(cont.x * shots)), shots - 1)
    a = 1.0 / float(qfi_transmission(t, cont.n_t))
    b = 1.0 / float(qfi_phase(t, cont.n_phi))
    var = shots * (a / shots_t + b / (shots - shots_t))
    return MixtureAllocation(shots_t / shots, cont.n_t, cont.n_phi, var)


def nagaoka_vs_mixture_ratio(t) -> float:
    """``min_n C_N(n, t)`` divided by the mixture variance; never below one."""
    t = _check_t(t)
    return optimal_n_bound(t, "nagaoka").objective_at_star / mixture_optimum(t).variance_sum
