"""SLD, Holevo and Nagaoka Cramer-Rao bounds for joint (t, phi) estimation.

Both the Holevo and Nagaoka functionals minimise over pairs of Hermitian
operators ``X_t, X_phi`` obeying the local-unbiasedness constraints

    Tr(X_i rho) = 0,     Tr(X_i d_j rho) = delta_ij.

For this model the six constraints leave two real degrees of freedom ``d``
(a diagonal entry of ``X_t``) and ``h`` (a diagonal entry of ``X_phi``); see
:func:`x_operators`. Closed forms are cross-checked against direct numerical
minimisation over ``(d, h)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .errors import DomainError
from .fisher import _one_minus_t2n, qfi_matrix
from .state import SampleParams, signal_state, signal_state_derivatives

__all__ = [
    "XOperatorPair",
    "BoundsReport",
    "Povm",
    "BoundSolution",
    "sld_cost",
    "nagaoka_cost",
    "sld_crb",
    "holevo_bound",
    "holevo_minimizer",
    "holevo_objective",
    "holevo_objective_closed",
    "holevo_numeric",
    "nagaoka_bound",
    "nagaoka_objective",
    "nagaoka_penalty",
    "nagaoka_numeric",
    "x_operators",
    "optimal_x_operators",
    "constraint_residuals",
    "nagaoka_povm",
    "povm_variance",
    "povm_variance_reconstructed",
    "estimator_coefficients",
    "optimal_lambda",
    "bounds_report",
]

_EIG_CLAMP = 1e-14


# --------------------------------------------------------------------------
# closed forms (vectorised over t and n)
# --------------------------------------------------------------------------


def sld_cost(t, n=1.0):
    """``Tr F_Q^{-1} = (1 - t^2n)/(n^2 t^(2n-2)) + 1/(n^2 t^2n)``; equals the Holevo bound."""
    t = np.asarray(t, dtype=float)
    n = np.asarray(n, dtype=float)
    with np.errstate(over="ignore", divide="ignore"):
        val = (_one_minus_t2n(t, n) * t**2 + 1.0) / (n**2 * t ** (2 * n))
    return val[()] if val.ndim == 0 else val


def nagaoka_cost(t, n=1.0):
    """``(1 + t sqrt(1 - t^2n))^2 / (n^2 t^2n)``."""
    t = np.asarray(t, dtype=float)
    n = np.asarray(n, dtype=float)
    with np.errstate(over="ignore", divide="ignore"):
        val = (1.0 + t * np.sqrt(_one_minus_t2n(t, n))) ** 2 / (n**2 * t ** (2 * n))
    return val[()] if val.ndim == 0 else val


def _finite(value, what):
    if not np.isfinite(value):
        raise DomainError(f"{what} overflows for these parameters")
    return float(value)


def sld_crb(p: SampleParams) -> float:
    return _finite(sld_cost(p.t, p.n), "SLD bound")


def holevo_bound(p: SampleParams) -> float:
    """Holevo bound; coincides with the SLD bound for this model."""
    return _finite(sld_cost(p.t, p.n), "Holevo bound")


def holevo_minimizer(p: SampleParams) -> tuple[float, float]:
    """Minimising ``(d, h)`` of both the Holevo and Nagaoka functionals."""
    return -p.t / p.n, 0.0


def nagaoka_bound(p: SampleParams) -> float:
    return _finite(nagaoka_cost(p.t, p.n), "Nagaoka bound")


def optimal_lambda(p: SampleParams) -> float:
    """Weight of the transmission basis in the Nagaoka-optimal random POVM."""
    g = p.t * np.sqrt(_one_minus_t2n(p.t, p.n))
    return float(g / (1.0 + g))


# --------------------------------------------------------------------------
# X-operator family
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class XOperatorPair:
    x_t: np.ndarray
    x_phi: np.ndarray
    d: float
    h: float


def x_operators(p: SampleParams, d: float, h: float) -> XOperatorPair:
    """General locally unbiased pair with free diagonal entries ``d`` and ``h``.

    ``X_t = [[-d - 2t/n, t^(1-n) e^{-in phi}/n], [c.c., d]]`` and
    ``X_phi = [[-h, -i t^-n e^{-in phi}/n], [c.c., h]]``.
    """
    t, n = p.t, p.n
    e = np.exp(-1j * n * p.phi)
    u = t ** (1 - n) / n * e
    v = -1j * t ** (-n) / n * e
    x_t = np.array([[-d - 2 * t / n, u], [np.conj(u), d]], dtype=complex)
    x_phi = np.array([[-h, v], [np.conj(v), h]], dtype=complex)
    return XOperatorPair(x_t, x_phi, float(d), float(h))


def optimal_x_operators(p: SampleParams) -> XOperatorPair:
    """The pair minimising both functionals: ``d = -t/n``, ``h = 0``."""
    return x_operators(p, *holevo_minimizer(p))


def constraint_residuals(p: SampleParams, pair: XOperatorPair, d_rho=None) -> np.ndarray:
    """Residuals of the six unbiasedness constraints, as ``[[Tr X rho, Tr X d_t rho - 1, ...]]``.

    ``d_rho`` may supply alternative derivatives (e.g. finite differences).
    """
    rho = signal_state(p)
    if d_rho is None:
        d_rho = signal_state_derivatives(p)
    out = np.empty((2, 3))
    for i, x in enumerate((pair.x_t, pair.x_phi)):
        out[i, 0] = abs(np.trace(x @ rho))
        for j, d in enumerate(d_rho):
            out[i, 1 + j] = abs(np.trace(x @ d) - (1.0 if i == j else 0.0))
    return out


# The objectives below work on 2x2 matrices stored as entry tuples
# (m00, m01, m10, m11). The same code then runs on Python scalars (fast inside
# the simplex search) and on numpy arrays (vectorised grid scans).


def _entries(m):
    m = np.asarray(m, dtype=complex)
    return (complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))


def _mul(a, b):
    return (
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    )


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _trace_norm_entries(m):
    # sum of singular values of a 2x2 block: (s1 + s2)^2 = ||m||_F^2 + 2|det m|
    if np.ndim(m[0]) == 0:
        scale = max(abs(x) for x in m)
        if scale == 0:
            return 0.0
        b = [x / scale for x in m]
        det = b[0] * b[3] - b[1] * b[2]
        return scale * math.sqrt(sum(abs(x) ** 2 for x in b) + 2 * abs(det))
    scale = np.maximum(np.maximum(abs(m[0]), abs(m[1])), np.maximum(abs(m[2]), abs(m[3])))
    safe = np.where(scale > 0, scale, 1.0)
    b = [x / safe for x in m]
    fro2 = sum(abs(x) ** 2 for x in b)
    det = b[0] * b[3] - b[1] * b[2]
    return safe * np.sqrt(fro2 + 2 * abs(det))


def _trace_norm(a):
    """Sum of singular values over the last two axes of a stack of 2x2 matrices."""
    a = np.asarray(a)
    return _trace_norm_entries((a[..., 0, 0], a[..., 0, 1], a[..., 1, 0], a[..., 1, 1]))


def _sqrtm_psd(rho):
    w, v = np.linalg.eigh(rho)
    w = np.where(np.abs(w) < _EIG_CLAMP, 0.0, w)
    if np.any(w < 0):
        raise ValueError("density matrix has a significantly negative eigenvalue")
    return (v * np.sqrt(w)) @ v.conj().T


@lru_cache(maxsize=256)
def _fixed_entries(p: SampleParams):
    rho = signal_state(p)
    base = x_operators(p, 0.0, 0.0)
    return _entries(rho), _entries(_sqrtm_psd(rho)), _entries(base.x_t), _entries(base.x_phi)


def _prepare(p: SampleParams, d, h):
    rho, root, bt, bp = _fixed_entries(p)
    if np.ndim(d) == 0 and np.ndim(h) == 0:
        d, h = float(d), float(h)
    else:
        d, h = np.broadcast_arrays(np.asarray(d, dtype=float), np.asarray(h, dtype=float))
    x_t = (bt[0] - d, bt[1], bt[2], bt[3] + d)
    x_phi = (bp[0] - h, bp[1], bp[2], bp[3] + h)
    return rho, root, x_t, x_phi


def _trace_z_and_im(rho, x_t, x_phi):
    # Tr Z and TrAbs(Im Z) with Z_ij = Tr(rho X_i X_j)
    rx_t, rx_phi = _mul(rho, x_t), _mul(rho, x_phi)

    def tr_prod(a, b):
        return a[0] * b[0] + a[1] * b[2] + a[2] * b[1] + a[3] * b[3]

    z_tt = tr_prod(rx_t, x_t)
    z_pp = tr_prod(rx_phi, x_phi)
    z_tp = tr_prod(rx_t, x_phi)
    z_pt = tr_prod(rx_phi, x_t)
    im = (z_tt.imag, z_tp.imag, z_pt.imag, z_pp.imag)
    return z_tt.real + z_pp.real, _trace_norm_entries(im)


def _scalar_or_array(val):
    val = np.asarray(val, dtype=float)
    return float(val) if val.ndim == 0 else val


def holevo_objective(p: SampleParams, d, h):
    """``Tr Z + TrAbs(Im Z)`` evaluated from the matrices of :func:`x_operators`.

    ``d`` and ``h`` may be arrays (broadcast together).
    """
    rho, _, x_t, x_phi = _prepare(p, d, h)
    tr_z, im_norm = _trace_z_and_im(rho, x_t, x_phi)
    return _scalar_or_array(tr_z + im_norm)


def holevo_objective_closed(p: SampleParams, d, h):
    """Algebraic form of :func:`holevo_objective`."""
    t, n = p.t, p.n
    d = np.asarray(d, dtype=float)
    h = np.asarray(h, dtype=float)
    return _scalar_or_array(
        d**2 + 2 * d * t / n + t ** (2 - 2 * n) / n**2
        + h**2 + t ** (-2 * n) / n**2
        + 2 * np.abs(d * n + t) / n**2
    )


def _penalty(root, x_t, x_phi):
    comm = _sub(_mul(x_t, x_phi), _mul(x_phi, x_t))
    return _trace_norm_entries(_mul(_mul(root, comm), root))


def nagaoka_penalty(p: SampleParams, d, h):
    """``|| rho^1/2 [X_t, X_phi] rho^1/2 ||_1`` (sum of singular values)."""
    _, root, x_t, x_phi = _prepare(p, d, h)
    return _scalar_or_array(_penalty(root, x_t, x_phi))


def nagaoka_objective(p: SampleParams, d, h):
    """``Tr Z + || rho^1/2 [X_t, X_phi] rho^1/2 ||_1``; vectorised like :func:`holevo_objective`."""
    rho, root, x_t, x_phi = _prepare(p, d, h)
    tr_z, _ = _trace_z_and_im(rho, x_t, x_phi)
    return _scalar_or_array(tr_z + _penalty(root, x_t, x_phi))


class BoundSolution(NamedTuple):
    value: float
    d: float
    h: float


_GRID_POINTS = 41


def _search_box(p: SampleParams):
    # centre of the d-range is -t/n, so the box always contains the optimum
    d = np.linspace(-2 * p.t / p.n - 1.0, 1.0, _GRID_POINTS)
    h = np.linspace(-1.0, 1.0, _GRID_POINTS)
    return d, h


def _minimise(objective, p: SampleParams) -> BoundSolution:
    d_grid, h_grid = _search_box(p)
    values = objective(p, d_grid[:, None], h_grid[None, :])
    i, j = np.unravel_index(np.argmin(values), values.shape)
    x0 = np.array([d_grid[i], h_grid[j]])
    scale = values[i, j]
    res = minimize(
        lambda x: objective(p, x[0], x[1]) / scale,
        x0,
        method="Nelder-Mead",
        options={
            "xatol": 1e-10,
            "fatol": 1e-16,
            "maxiter": 4000,
            "initial_simplex": x0 + np.array([[0.0, 0.0], [0.02, 0.0], [0.0, 0.02]]),
        },
    )
    value = res.fun * scale
    if value > scale:
        return BoundSolution(float(scale), float(x0[0]), float(x0[1]))
    return BoundSolution(float(value), float(res.x[0]), float(res.x[1]))


def holevo_numeric(p: SampleParams) -> BoundSolution:
    """Holevo bound by grid search plus Nelder-Mead over ``(d, h)``."""
    return _minimise(holevo_objective, p)


def nagaoka_numeric(p: SampleParams) -> BoundSolution:
    """Nagaoka bound by grid search plus Nelder-Mead over ``(d, h)``."""
    return _minimise(nagaoka_objective, p)


# --------------------------------------------------------------------------
# optimal measurement
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Povm:
    elements: tuple

    def __post_init__(self):
        elements = tuple(np.asarray(e, dtype=complex) for e in self.elements)
        total = sum(elements)
        if np.max(np.abs(total - np.eye(2))) > 1e-12:
            raise ValueError("POVM elements do not sum to the identity")
        for e in elements:
            if np.linalg.eigvalsh(e).min() < -1e-12:
                raise ValueError("POVM element is not positive semidefinite")
        object.__setattr__(self, "elements", elements)

    def probabilities(self, rho) -> np.ndarray:
        return np.array([np.real(np.trace(rho @ e)) for e in self.elements])

    def __len__(self):
        return len(self.elements)


def _projector(v):
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def nagaoka_povm(p: SampleParams, lam: float) -> Povm:
    """Random switching between the eigenbases of ``X_t`` (weight ``lam``) and ``X_phi``.

    Element order: ``lam Pi(X_t+), lam Pi(X_t-), (1-lam) Pi(X_phi+), (1-lam) Pi(X_phi-)``
    where ``+`` labels the larger eigenvalue.
    """
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda must lie in (0, 1), got {lam!r}")
    e = np.exp(1j * p.n * p.phi)
    kets = [(1, e), (1, -e), (1, 1j * e), (1, -1j * e)]
    weights = [lam, lam, 1 - lam, 1 - lam]
    return Povm(tuple(w * _projector(k) for w, k in zip(weights, kets)))


def estimator_coefficients(povm: Povm, pair: XOperatorPair) -> np.ndarray:
    """Outcome-wise estimates ``c`` with ``X_t = sum c_t,x E_x`` on the first two
    elements and ``X_phi = sum c_phi,x E_x`` on the last two.

    Returns an array of shape (2, 4): row 0 for ``t``, row 1 for ``phi``; each
    row is zero on the other branch.
    """
    def realify(ms):
        return np.concatenate([np.real(np.ravel(ms)), np.imag(np.ravel(ms))])

    coeffs = np.zeros((2, len(povm)))
    for row, (x, idx) in enumerate(((pair.x_t, (0, 1)), (pair.x_phi, (2, 3)))):
        a = np.column_stack([realify(povm.elements[k]) for k in idx])
        sol, *_ = np.linalg.lstsq(a, realify(x), rcond=None)
        if np.max(np.abs(a @ sol - realify(x))) > 1e-8 * max(1.0, np.max(np.abs(x))):
            raise ValueError("X operator is not in the span of its POVM branch")
        coeffs[row, list(idx)] = sol
    return coeffs


def povm_variance(p: SampleParams, lam: float) -> float:
    """Sum of estimator variances (per shot) for :func:`nagaoka_povm`."""
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda must lie in (0, 1), got {lam!r}")
    t, n = p.t, p.n
    d = t**2 * _one_minus_t2n(t, n)
    return float((lam * (d - 1) - d) / (lam * (lam - 1)) / (n**2 * t ** (2 * n)))


def povm_variance_reconstructed(p: SampleParams, lam: float) -> float:
    """Same as :func:`povm_variance` but via explicit outcome-wise estimators."""
    povm = nagaoka_povm(p, lam)
    c = estimator_coefficients(povm, optimal_x_operators(p))
    probs = povm.probabilities(signal_state(p))
    return float(np.sum((c**2).sum(axis=0) * probs))


@dataclass(frozen=True)
class BoundsReport:
    c_s: float
    c_h: float
    c_n: float
    d_star: float
    h_star: float
    lambda_star: float


def bounds_report(p: SampleParams) -> BoundsReport:
    """Closed-form bounds plus minimiser metadata."""
    d_star, h_star = holevo_minimizer(p)
    f = qfi_matrix(p)
    c_s = float(np.trace(np.linalg.inv(f)))
    return BoundsReport(
        c_s=c_s,
        c_h=holevo_bound(p),
        c_n=nagaoka_bound(p),
        d_star=d_star,
        h_star=h_star,
        lambda_star=optimal_lambda(p),
    )
