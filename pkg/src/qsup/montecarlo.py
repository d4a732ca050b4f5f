"""Shot-level simulation of the transmission measurement and its estimator.

Each trial records ``N`` photodetections in the transmission-optimal basis at
a sample with transmission ``t + delta_t``, then inverts the click imbalance

    s = (n_plus - n_minus) / N,     delta_t_hat = s^(1/n) - t

assuming the base ``t`` is known.

Per-trial seeds
---------------
Trial ``i`` of a run with seed ``S`` draws from ``numpy.random.PCG64`` seeded
with ``mix64(S ^ (i * 0x9E3779B97F4A7C15 mod 2^64))``, where ``mix64`` is the
SplitMix64 finalizer::

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

(all arithmetic mod 2^64). Counts are drawn as one binomial variate per trial,
which has the same law as ``N`` Bernoulli draws. Trials depend only on their
own seed, so any number of workers gives bit-identical results.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import stats

from .errors import DomainError
from .fisher import qfi_transmission

__all__ = [
    "McConfig",
    "McResult",
    "Estimate",
    "mix64",
    "trial_seed",
    "simulate_counts",
    "estimate_delta_t",
    "run_histogram",
]

_MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a 64-bit unsigned integer."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def trial_seed(seed: int, trial_index: int) -> int:
    return mix64(seed ^ ((trial_index * GOLDEN_GAMMA) & _MASK64))


@dataclass(frozen=True)
class McConfig:
    t: float
    delta_t: float
    n: float
    shots: int
    trials: int
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.t < 1.0:
            raise DomainError(f"t must lie in (0, 1), got {self.t!r}")
        if not 0.0 < self.t + self.delta_t < 1.0:
            raise DomainError(f"t + delta_t must lie in (0, 1), got {self.t + self.delta_t!r}")
        if not self.n > 0:
            raise DomainError(f"pass number must be positive, got {self.n!r}")
        if int(self.shots) != self.shots or self.shots < 1:
            raise DomainError(f"shots must be a positive integer, got {self.shots!r}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise DomainError(f"trials must be a positive integer, got {self.trials!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed <= _MASK64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")

    @property
    def p_plus(self) -> float:
        return 0.5 * (1.0 + (self.t + self.delta_t) ** self.n)


def simulate_counts(cfg: McConfig, trial_index: int) -> tuple[int, int]:
    """Click counts ``(n_plus, n_minus)`` of one trial."""
    rng = np.random.Generator(np.random.PCG64(trial_seed(int(cfg.seed), int(trial_index))))
    n_plus = int(rng.binomial(int(cfg.shots), cfg.p_plus))
    return n_plus, int(cfg.shots) - n_plus


class Estimate(NamedTuple):
    value: float
    clamped: bool


def estimate_delta_t(n_plus: int, n_minus: int, N: int, t: float, n: float) -> Estimate:
    """Invert the click imbalance for ``delta_t``.

    A negative imbalance has no real ``1/n``-th power unless ``1/n`` is an
    integer; it is then clamped to zero and the estimate flagged.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    s = (n_plus - n_minus) / N
    inv = 1.0 / n
    k = round(inv)
    if abs(inv - k) < 1e-12:
        return Estimate(s**k - t, False)
    if s < 0:
        return Estimate(-t, True)
    return Estimate(s**inv - t, False)


@dataclass(frozen=True)
class McResult:
    errors: np.ndarray
    sample_std: float
    predicted_std: float
    skewness: float
    n_clamped: int

    @property
    def ratio(self) -> float:
        return self.sample_std / self.predicted_std


def _thread_count(workers):
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("QSUP_THREADS")
    return max(1, int(env)) if env else 1


def _run_chunk(cfg: McConfig, indices):
    out = np.empty(len(indices))
    clamped = 0
    for k, i in enumerate(indices):
        n_plus, n_minus = simulate_counts(cfg, i)
        est = estimate_delta_t(n_plus, n_minus, cfg.shots, cfg.t, cfg.n)
        out[k] = cfg.delta_t - est.value
        clamped += est.clamped
    return out, clamped


def run_histogram(cfg: McConfig, workers: int | None = None) -> McResult:
    """Run all trials; ``errors[i] = delta_t - delta_t_hat_i``.

    ``workers`` defaults to ``$QSUP_THREADS`` (or 1). Output does not depend on it.
    """
    workers = _thread_count(workers)
    chunks = np.array_split(np.arange(cfg.trials), workers)
    if workers == 1:
        parts = [_run_chunk(cfg, chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda idx: _run_chunk(cfg, idx), chunks))
    errors = np.concatenate([p[0] for p in parts])
    n_clamped = sum(p[1] for p in parts)
    sample_std = float(np.std(errors, ddof=1)) if cfg.trials > 1 else 0.0
    predicted = 1.0 / math.sqrt(cfg.shots * float(qfi_transmission(cfg.t, cfg.n)))
    skew = float(stats.skew(errors)) if cfg.trials > 2 and sample_std > 0 else 0.0
    return McResult(errors, sample_std, predicted, skew, int(n_clamped))
