"""Quantum and classical Fisher information for the signal-photon qubit.

Closed forms (vectorised over ``t`` and ``n``)::

    F_tt     = n^2 t^(2n-2) / (1 - t^(2n))
    F_phiphi = n^2 t^(2n)

The same matrix is also produced from the generic Bloch-vector formula, which
serves as an independent route in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularSystemError, VanishingProbabilityError
from .state import (
    IDENTITY,
    PAULI,
    SampleParams,
    bloch_derivatives,
    bloch_vector,
    signal_state,
    signal_state_derivatives,
)

__all__ = [
    "ProjectiveMeasurement",
    "qfi_transmission",
    "qfi_phase",
    "qfi_matrix",
    "qfi_matrix_bloch",
    "sld",
    "sld_numeric",
    "sld_eigenbasis",
    "cfi",
    "cfi_matrix",
    "cfi_bruteforce_max",
    "phase_scan_cfi",
    "phase_scan_cfi_limit",
]

PARAMS = ("t", "phi")

# probability/derivative magnitude treated as exactly zero in the CFI sum
_ZERO_PROB = 1e-15


def _one_minus_t2n(t, n):
    # 1 - t^(2n) without cancellation as t -> 1
    return -np.expm1(2.0 * np.asarray(n, dtype=float) * np.log(t))


def qfi_transmission(t, n=1.0):
    """QFI for the transmission amplitude after ``n`` passes."""
    t = np.asarray(t, dtype=float)
    n = np.asarray(n, dtype=float)
    denom = _one_minus_t2n(t, n)
    with np.errstate(divide="ignore", over="ignore"):
        val = n**2 * t ** (2 * n - 2) / denom
    if np.any(denom <= 0) or not np.all(np.isfinite(val)):
        raise DomainError("transmission QFI diverges: t^(2n) is indistinguishable from 1")
    return val[()] if val.ndim == 0 else val


def qfi_phase(t, n=1.0):
    """QFI for the sample phase after ``n`` passes."""
    t = np.asarray(t, dtype=float)
    n = np.asarray(n, dtype=float)
    val = n**2 * t ** (2 * n)
    return val[()] if val.ndim == 0 else val


def qfi_matrix(p: SampleParams) -> np.ndarray:
    """Diagonal 2x2 QFI matrix in the ``(t, phi)`` chart (closed form)."""
    return np.diag([float(qfi_transmission(p.t, p.n)), float(qfi_phase(p.t, p.n))])


def _bloch_qfi(r, drs):
    one_minus = 1.0 - r @ r
    if one_minus <= 0:
        raise DomainError("Bloch-vector QFI undefined for a pure state")
    f = np.empty((len(drs), len(drs)))
    for i, di in enumerate(drs):
        for j, dj in enumerate(drs):
            f[i, j] = di @ dj + (r @ di) * (r @ dj) / one_minus
    return f


def qfi_matrix_bloch(p: SampleParams, step: float | None = None) -> np.ndarray:
    """QFI matrix from the generic qubit Bloch formula.

    With ``step=None`` the analytic Bloch derivatives are used; otherwise they
    are replaced by central differences of :func:`bloch_vector` with that step.
    """
    r = bloch_vector(signal_state(p))
    if step is None:
        drs = bloch_derivatives(p)
    else:
        drs = []
        for name in PARAMS:
            hi = bloch_vector(signal_state(p.replace(**{name: getattr(p, name) + step})))
            lo = bloch_vector(signal_state(p.replace(**{name: getattr(p, name) - step})))
            drs.append((hi - lo) / (2 * step))
    return _bloch_qfi(r, drs)


def sld(p: SampleParams, which: str) -> np.ndarray:
    """Symmetric logarithmic derivative for parameter ``which`` (``"t"`` or ``"phi"``)."""
    t, n, a = p.t, p.n, p.n * p.phi
    if which == "t":
        denom = _one_minus_t2n(t, n)
        axis = np.array([np.cos(a), np.sin(a), 0.0])
        alpha = -n * t ** (2 * n - 1) / denom
        beta = n * t ** (n - 1) / denom * axis
    elif which == "phi":
        axis = np.array([-np.sin(a), np.cos(a), 0.0])
        alpha = 0.0
        beta = n * t**n * axis
    else:
        raise ValueError(f"unknown parameter {which!r}; expected 't' or 'phi'")
    return alpha * IDENTITY + np.einsum("k,kij->ij", beta, PAULI)


def _pauli_coords(m):
    # real coefficients c with m = c0 I + c . sigma, for Hermitian m
    basis = np.concatenate([IDENTITY[None], PAULI])
    return np.real(np.einsum("ij,kji->k", m, basis)) / 2.0


def sld_numeric(p: SampleParams, which: str, step: float = 1e-6) -> np.ndarray:
    """SLD from the defining Lyapunov equation with a finite-difference ``d rho``.

    Solves ``(L rho + rho L)/2 = d rho`` for the four real Pauli coordinates of
    ``L``. Independent of the closed form in :func:`sld`.
    """
    if not 1e-7 <= step <= 1e-4:
        raise ValueError(f"step must lie in [1e-7, 1e-4], got {step!r}")
    if which not in PARAMS:
        raise ValueError(f"unknown parameter {which!r}; expected 't' or 'phi'")
    rho = signal_state(p)
    x0 = getattr(p, which)
    d_rho = (
        signal_state(p.replace(**{which: x0 + step})) - signal_state(p.replace(**{which: x0 - step}))
    ) / (2 * step)

    basis = np.concatenate([IDENTITY[None], PAULI])
    system = np.column_stack([_pauli_coords(0.5 * (b @ rho + rho @ b)) for b in basis])
    if np.linalg.cond(system) > 1e12:
        raise SingularSystemError("SLD equation is singular: the state is numerically pure")
    coeffs = np.linalg.solve(system, _pauli_coords(d_rho))
    return np.einsum("k,kij->ij", coeffs.astype(complex), basis)


@dataclass(frozen=True)
class ProjectiveMeasurement:
    """Two-outcome projective measurement along a Bloch axis.

    Outcome ``+1`` projects onto ``(I + axis.sigma)/2``.
    """

    axis: np.ndarray

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float)
        norm = np.linalg.norm(axis)
        if axis.shape != (3,) or norm == 0:
            raise ValueError("axis must be a nonzero 3-vector")
        object.__setattr__(self, "axis", axis / norm)

    @classmethod
    def from_vector(cls, v) -> "ProjectiveMeasurement":
        """Measurement whose ``+1`` outcome is the (normalised) ket ``v``."""
        v = np.asarray(v, dtype=complex)
        v = v / np.linalg.norm(v)
        c = np.conj(v[0]) * v[1]
        return cls(np.array([2 * c.real, 2 * c.imag, abs(v[0]) ** 2 - abs(v[1]) ** 2]))

    @property
    def vectors(self) -> tuple[np.ndarray, np.ndarray]:
        """Kets for outcomes ``+1`` and ``-1`` (global phase fixed by a real first entry)."""
        x, y, z = self.axis
        theta = np.arccos(np.clip(z, -1, 1))
        az = np.arctan2(y, x)
        plus = np.array([np.cos(theta / 2), np.exp(1j * az) * np.sin(theta / 2)])
        minus = np.array([np.sin(theta / 2), -np.exp(1j * az) * np.cos(theta / 2)])
        return plus, minus

    def projectors(self) -> list[np.ndarray]:
        s = np.einsum("k,kij->ij", self.axis, PAULI)
        return [0.5 * (IDENTITY + s), 0.5 * (IDENTITY - s)]


def sld_eigenbasis(p: SampleParams, which: str) -> ProjectiveMeasurement:
    """Eigenbasis of the SLD for ``which``, evaluated at ``p.phi``.

    For ``t`` the kets are ``(1, +-e^{i n phi})/sqrt 2``; for ``phi`` they are
    ``(1, +-i e^{i n phi})/sqrt 2``.
    """
    a = p.n * p.phi
    if which == "t":
        return ProjectiveMeasurement(np.array([np.cos(a), np.sin(a), 0.0]))
    if which == "phi":
        return ProjectiveMeasurement(np.array([-np.sin(a), np.cos(a), 0.0]))
    raise ValueError(f"unknown parameter {which!r}; expected 't' or 'phi'")


def _fisher_terms(prob, dprob):
    prob = np.asarray(prob, dtype=float)
    dprob = np.asarray(dprob, dtype=float)
    small = prob < _ZERO_PROB
    if np.any(small & (np.abs(dprob) >= _ZERO_PROB)):
        raise VanishingProbabilityError("outcome with zero probability has a nonzero derivative")
    safe = np.where(small, 1.0, prob)
    return np.where(small, 0.0, dprob**2 / safe)


def cfi(
    p: SampleParams,
    meas: ProjectiveMeasurement,
    which: str,
    operating_point_phi: float | None = None,
) -> float:
    """Classical Fisher information of a fixed projective measurement.

    The measurement does not move with the parameters. The state is evaluated
    at ``operating_point_phi`` (``p.phi`` when omitted), which is where the
    derivative is taken.
    """
    if which not in PARAMS:
        raise ValueError(f"unknown parameter {which!r}; expected 't' or 'phi'")
    if operating_point_phi is not None:
        p = p.replace(phi=operating_point_phi)
    r = bloch_vector(signal_state(p))
    dr = bloch_derivatives(p)[PARAMS.index(which)]
    m = meas.axis
    prob = 0.5 * (1 + np.array([1, -1]) * (m @ r))
    dprob = 0.5 * np.array([1, -1]) * (m @ dr)
    return float(np.sum(_fisher_terms(prob, dprob)))


def cfi_matrix(p: SampleParams, elements) -> np.ndarray:
    """2x2 classical Fisher information matrix of a parameter-independent POVM."""
    rho = signal_state(p)
    d_rho = signal_state_derivatives(p)
    f = np.zeros((2, 2))
    for e in elements:
        prob = np.real(np.trace(rho @ e))
        dp = np.array([np.real(np.trace(d @ e)) for d in d_rho])
        if prob < _ZERO_PROB:
            if np.any(np.abs(dp) >= _ZERO_PROB):
                raise VanishingProbabilityError("outcome with zero probability has a nonzero derivative")
            continue
        f += np.outer(dp, dp) / prob
    return f


def _cfi_axes(r, dr, axes):
    proj = axes @ r
    dproj = axes @ dr
    prob = np.stack([0.5 * (1 + proj), 0.5 * (1 - proj)])
    dprob = np.stack([0.5 * dproj, -0.5 * dproj])
    return _fisher_terms(prob, dprob).sum(axis=0)


def _sphere(polar, azimuth):
    pp, aa = np.meshgrid(polar, azimuth, indexing="ij")
    return np.stack(
        [np.sin(pp) * np.cos(aa), np.sin(pp) * np.sin(aa), np.cos(pp)], axis=-1
    ).reshape(-1, 3), pp.ravel(), aa.ravel()


def cfi_bruteforce_max(p: SampleParams, which: str, grid: int = 256) -> float:
    """Largest projective-measurement CFI found by scanning measurement axes.

    Scans a ``grid x grid`` lattice in (polar, azimuth), then rescans a
    ``grid x grid`` lattice spanning two cells around the best point.
    Restricted to rank-one projective measurements, which suffice for a
    single qubit parameter.
    """
    if grid < 64:
        raise ValueError(f"grid must be at least 64, got {grid!r}")
    if which not in PARAMS:
        raise ValueError(f"unknown parameter {which!r}; expected 't' or 'phi'")
    r = bloch_vector(signal_state(p))
    dr = bloch_derivatives(p)[PARAMS.index(which)]

    polar = np.linspace(0.0, np.pi, grid)
    azimuth = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    axes, pp, aa = _sphere(polar, azimuth)
    values = _cfi_axes(r, dr, axes)
    best = int(np.argmax(values))

    dpol, daz = polar[1] - polar[0], azimuth[1] - azimuth[0]
    polar2 = np.clip(np.linspace(pp[best] - 2 * dpol, pp[best] + 2 * dpol, grid), 0.0, np.pi)
    azimuth2 = np.linspace(aa[best] - 2 * daz, aa[best] + 2 * daz, grid)
    axes2, _, _ = _sphere(polar2, azimuth2)
    return float(max(values[best], _cfi_axes(r, dr, axes2).max()))


def phase_scan_cfi(t: float, phi: float, M: int) -> float:
    """Total transmission CFI of ``M`` single-pass detections at evenly spaced ``theta``."""
    if not 0.0 < t < 1.0:
        raise DomainError(f"t must lie in (0, 1), got {t!r}")
    if int(M) != M or M < 2:
        raise ValueError(f"M must be an integer >= 2, got {M!r}")
    k = np.arange(1, int(M) + 1)
    c2 = np.cos(phi + 2 * np.pi * k / M) ** 2
    return float(np.sum(c2 / (1 - t**2 * c2)))


def phase_scan_cfi_limit(t):
    """Per-detection transmission CFI of the phase scan as ``M -> infinity``."""
    t = np.asarray(t, dtype=float)
    if np.any((t <= 0) | (t >= 1)):
        raise DomainError("t must lie in (0, 1)")
    s = np.sqrt(-np.expm1(2 * np.log(t)))
    # 1 - s = t^2 / (1 + s) avoids cancellation at small t
    val = 1.0 / ((1.0 + s) * s)
    if not np.all(np.isfinite(val)):
        raise DomainError("phase-scan CFI overflows as t -> 1")
    return val[()] if val.ndim == 0 else val
