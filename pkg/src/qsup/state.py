"""Signal-photon states of the nonlinear interferometer.

The sample (transmission amplitude ``t``, phase ``phi``) is probed ``n`` times
by the idler photon. Only the two signal modes are detected, so the relevant
object is the reduced 2x2 density matrix

    rho = 1/2 [[1, t^n e^{-i n phi}], [t^n e^{i n phi}, 1]]

whose Bloch vector lies in the equatorial plane with length ``t^n``.

States, observables and Bloch vectors are plain ``numpy`` arrays
(``complex128`` for matrices, ``float64`` for vectors).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "SampleParams",
    "PAULI",
    "IDENTITY",
    "signal_state",
    "signal_state_derivatives",
    "full_state",
    "partial_trace_signal",
    "bloch_vector",
    "bloch_derivatives",
    "state_from_bloch",
    "purity",
    "detection_probability",
    "interferometer_projector",
    "check_state",
]

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])

_HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class SampleParams:
    """Unknown sample parameters plus the pass number.

    ``t`` must lie strictly inside (0, 1); ``n`` is any positive real (values
    below one model a shortened path through the sample).
    """

    t: float
    phi: float = 0.0
    n: float = 1.0

    def __post_init__(self):
        t, phi, n = float(self.t), float(self.phi), float(self.n)
        if not np.isfinite(t) or not 0.0 < t < 1.0:
            raise DomainError(f"transmission t must lie in the open interval (0, 1), got {self.t!r}")
        if not np.isfinite(n) or n <= 0.0:
            raise DomainError(f"pass number n must be positive, got {self.n!r}")
        if not np.isfinite(phi):
            raise DomainError(f"phase phi must be finite, got {self.phi!r}")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "n", n)

    @property
    def visibility(self) -> float:
        """Fringe visibility ``t**n``."""
        return self.t**self.n

    def replace(self, **changes) -> "SampleParams":
        fields = {"t": self.t, "phi": self.phi, "n": self.n}
        fields.update(changes)
        return SampleParams(**fields)


def _coherence(p: SampleParams) -> complex:
    # lower off-diagonal element of 2*rho
    return p.visibility * np.exp(1j * p.n * p.phi)


def signal_state(p: SampleParams) -> np.ndarray:
    """Reduced density matrix of the two signal modes (controllable phase 0)."""
    c = _coherence(p)
    return 0.5 * np.array([[1.0, np.conj(c)], [c, 1.0]], dtype=complex)


def signal_state_derivatives(p: SampleParams) -> tuple[np.ndarray, np.ndarray]:
    """Analytic partial derivatives ``(d rho/dt, d rho/dphi)``."""
    t, n, phi = p.t, p.n, p.phi
    e = np.exp(1j * n * phi)
    dc_dt = n * t ** (n - 1) * e
    dc_dphi = 1j * n * t**n * e
    d_t = 0.5 * np.array([[0, np.conj(dc_dt)], [dc_dt, 0]], dtype=complex)
    d_phi = 0.5 * np.array([[0, np.conj(dc_dphi)], [dc_dphi, 0]], dtype=complex)
    return d_t, d_phi


def full_state(p: SampleParams, theta: float = 0.0) -> np.ndarray:
    """Pure 4x4 state of signal (x) idler-environment after ``n`` passes.

    Basis order: ``|01>|1_i,0_E>``, ``|01>|0_i,1_E>``, ``|10>|1_i,0_E>``,
    ``|10>|0_i,1_E>``. The first signal label carries no sample imprint; the
    second picks up the controllable phase ``theta`` and the object's action.
    """
    tn = p.visibility
    leak = np.sqrt(-np.expm1(2 * p.n * np.log(p.t)))
    shift = np.exp(1j * theta)
    psi = np.array(
        [1.0, 0.0, shift * tn * np.exp(1j * p.n * p.phi), shift * leak],
        dtype=complex,
    ) / np.sqrt(2.0)
    return np.outer(psi, psi.conj())


def partial_trace_signal(fs: np.ndarray) -> np.ndarray:
    """Trace out the idler+environment factor of a 4x4 :func:`full_state`."""
    fs = np.asarray(fs, dtype=complex)
    if fs.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {fs.shape}")
    return np.einsum("ikjk->ij", fs.reshape(2, 2, 2, 2))


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    """Bloch vector ``r_j = Tr(rho sigma_j)``."""
    rho = np.asarray(rho, dtype=complex)
    return np.real(np.einsum("ij,kji->k", rho, PAULI))


def bloch_derivatives(p: SampleParams) -> tuple[np.ndarray, np.ndarray]:
    """Analytic ``(dr/dt, dr/dphi)`` of the signal Bloch vector."""
    t, n, a = p.t, p.n, p.n * p.phi
    d_t = n * t ** (n - 1) * np.array([np.cos(a), np.sin(a), 0.0])
    d_phi = n * t**n * np.array([-np.sin(a), np.cos(a), 0.0])
    return d_t, d_phi


def state_from_bloch(r) -> np.ndarray:
    """Inverse of :func:`bloch_vector`; rejects vectors outside the unit ball."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise ValueError(f"Bloch vector must have 3 components, got shape {r.shape}")
    if np.linalg.norm(r) > 1 + 1e-12:
        raise DomainError(f"Bloch vector has length {np.linalg.norm(r)!r} > 1")
    return 0.5 * (IDENTITY + np.einsum("k,kij->ij", r, PAULI))


def purity(rho: np.ndarray) -> float:
    """``Tr(rho^2)``."""
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.trace(rho @ rho)))


def interferometer_projector(sign: int) -> np.ndarray:
    """Projector onto the output port ``sign`` (+1 or -1) of the 50:50 beamsplitter."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    v = np.array([1.0, sign], dtype=complex) / np.sqrt(2.0)
    return np.outer(v, v.conj())


def detection_probability(p: SampleParams, theta: float, sign: int) -> float:
    """Click probability ``(1 + sign * t^n cos(theta + n phi)) / 2`` at one detector."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    return 0.5 * (1.0 + sign * p.visibility * np.cos(theta + p.n * p.phi))


def check_state(rho: np.ndarray, tol: float = _HERMITIAN_TOL) -> None:
    """Raise ``ValueError`` unless ``rho`` is Hermitian, unit-trace and PSD within ``tol``."""
    rho = np.asarray(rho, dtype=complex)
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValueError(f"trace is {np.trace(rho)!r}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("matrix has a negative eigenvalue")
