"""Estimation theory for sensing with undetected photons.

The signal photons of a nonlinear interferometer carry a qubit whose
coherence ``t^n e^{i n phi}`` encodes the transmission ``t`` and phase ``phi``
of a sample probed ``n`` times by the idler. This package computes Fisher
information, SLD/Holevo/Nagaoka bounds, optimal pass numbers and Monte Carlo
checks of the transmission estimator.
"""

from .bounds import (
    BoundSolution,
    BoundsReport,
    Povm,
    XOperatorPair,
    bounds_report,
    constraint_residuals,
    estimator_coefficients,
    holevo_bound,
    holevo_minimizer,
    holevo_numeric,
    holevo_objective,
    nagaoka_bound,
    nagaoka_numeric,
    nagaoka_objective,
    nagaoka_penalty,
    nagaoka_povm,
    optimal_lambda,
    optimal_x_operators,
    povm_variance,
    povm_variance_reconstructed,
    sld_crb,
    x_operators,
)
from .errors import DomainError, SingularSystemError, VanishingProbabilityError
from .fisher import (
    ProjectiveMeasurement,
    cfi,
    cfi_bruteforce_max,
    cfi_matrix,
    phase_scan_cfi,
    phase_scan_cfi_limit,
    qfi_matrix,
    qfi_matrix_bloch,
    qfi_phase,
    qfi_transmission,
    sld,
    sld_eigenbasis,
    sld_numeric,
)
from .material import MaterialParams, qfi_gamma, qfi_kappa
from .montecarlo import McConfig, McResult, estimate_delta_t, run_histogram, simulate_counts
from .multipass import (
    MixtureAllocation,
    PassOptimum,
    enhancement_ratio,
    mixture_allocation,
    mixture_discrete,
    mixture_optimum,
    nagaoka_vs_mixture_ratio,
    optimal_n_bound,
    optimal_n_phase,
    optimal_n_transmission,
)
from .state import (
    SampleParams,
    bloch_vector,
    detection_probability,
    full_state,
    partial_trace_signal,
    purity,
    signal_state,
    state_from_bloch,
)

__version__ = "0.1.0"
