"""Quantum Fisher information for per-unit-length material parameters.

With absorption ``gamma`` and phase ``kappa`` per unit length, a path of length
``L`` gives ``t = exp(-gamma L)`` and ``phi = kappa L``. Equivalently the
unit-length transmission ``exp(-gamma)`` is probed with ``n = L`` passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fisher import qfi_phase, qfi_transmission

__all__ = [
    "MaterialParams",
    "qfi_gamma",
    "qfi_kappa",
    "qfi_gamma_chain_rule",
    "qfi_kappa_chain_rule",
    "optimal_length_kappa",
]

_MAX_GAMMA_L = 350.0


@dataclass(frozen=True)
class MaterialParams:
    gamma: float
    kappa: float = 0.0
    L: float = 1.0

    def __post_init__(self):
        # gamma = 0 is a pole of F(gamma), like t = 1 for F_tt
        if not np.isfinite(self.gamma) or self.gamma <= 0:
            raise DomainError(f"gamma must be positive, got {self.gamma!r}")
        if not np.isfinite(self.L) or self.L <= 0:
            raise DomainError(f"L must be positive, got {self.L!r}")
        if not np.isfinite(self.kappa):
            raise DomainError(f"kappa must be finite, got {self.kappa!r}")


def qfi_gamma(mp: MaterialParams) -> float:
    """``L^2 / (exp(2 gamma L) - 1)``."""
    x = mp.gamma * mp.L
    if x > _MAX_GAMMA_L:
        raise DomainError(f"gamma*L = {x!r} exceeds {_MAX_GAMMA_L}; F(gamma) underflows")
    return mp.L**2 / math.expm1(2 * x)


def qfi_kappa(mp: MaterialParams) -> float:
    """``L^2 exp(-2 gamma L)``."""
    return mp.L**2 * math.exp(-2 * mp.gamma * mp.L)


def qfi_gamma_chain_rule(mp: MaterialParams) -> float:
    """``F(gamma)`` from ``F_tt`` at ``t = exp(-gamma)``, ``n = L`` (dt/dgamma = -t)."""
    t = math.exp(-mp.gamma)
    return t**2 * float(qfi_transmission(t, mp.L))


def qfi_kappa_chain_rule(mp: MaterialParams) -> float:
    """``F(kappa)`` from ``F_phiphi`` at ``t = exp(-gamma)``, ``n = L`` (dphi/dkappa = 1)."""
    return float(qfi_phase(math.exp(-mp.gamma), mp.L))


def optimal_length_kappa(gamma: float) -> float:
    """Path length maximising ``F(kappa)``."""
    if gamma <= 0:
        raise DomainError(f"gamma must be positive, got {gamma!r}")
    return 1.0 / gamma
