import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import solve_continuous_lyapunov
from scipy.optimize import minimize_scalar

from conftest import pass_numbers, phases, transmissions
from qsup import DomainError
from qsup.bounds import (
    Povm,
    _trace_norm,
    bounds_report,
    constraint_residuals,
    estimator_coefficients,
    holevo_bound,
    holevo_numeric,
    holevo_objective,
    holevo_objective_closed,
    nagaoka_bound,
    nagaoka_cost,
    nagaoka_numeric,
    nagaoka_objective,
    nagaoka_penalty,
    nagaoka_povm,
    optimal_lambda,
    optimal_x_operators,
    povm_variance,
    povm_variance_reconstructed,
    sld_cost,
    sld_crb,
    x_operators,
)
from qsup.fisher import cfi_matrix, qfi_matrix_bloch
from qsup.state import SampleParams, signal_state, signal_state_derivatives

offsets = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False)
weights = st.floats(min_value=0.01, max_value=0.99, allow_nan=False)


def _two_parameter_qubit_nagaoka(p):
    # oracle: Tr F^-1 + 2 sqrt(det F^-1) with F from the Bloch-vector route
    inv = np.linalg.inv(qfi_matrix_bloch(p))
    return np.trace(inv) + 2 * np.sqrt(np.linalg.det(inv))


class TestClosedForms:
    def test_frozen_values(self):
        p = SampleParams(0.5, 0.0, 1)
        assert sld_crb(p) == pytest.approx(4.75, rel=1e-15)
        assert nagaoka_bound(p) == pytest.approx(4.75 + 2 * np.sqrt(3), rel=1e-15)
        assert optimal_lambda(p) == pytest.approx(0.30216947925196225, rel=1e-14)

    @settings(max_examples=80, deadline=None)
    @given(transmissions, phases, pass_numbers)
    def test_nagaoka_oracle(self, t, phi, n):
        p = SampleParams(t, phi, n)
        assert nagaoka_bound(p) == pytest.approx(_two_parameter_qubit_nagaoka(p), rel=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(transmissions, phases, pass_numbers)
    def test_sld_commutator_expectation_vanishes(self, t, phi, n):
        # Im Tr(rho L_t L_phi) = 0 is why the Holevo bound equals the SLD bound
        p = SampleParams(t, phi, n)
        rho = signal_state(p)
        l_t, l_phi = (solve_continuous_lyapunov(rho, 2 * d) for d in signal_state_derivatives(p))
        z = np.trace(rho @ l_t @ l_phi)
        assert abs(z.imag) <= 1e-9 * abs(np.trace(rho @ l_t @ l_t))

    @settings(max_examples=80, deadline=None)
    @given(transmissions, phases, pass_numbers)
    def test_ordering(self, t, phi, n):
        p = SampleParams(t, phi, n)
        assert holevo_bound(p) == sld_crb(p)
        assert nagaoka_bound(p) >= holevo_bound(p)
        assert nagaoka_bound(p) <= 2 * holevo_bound(p) * (1 + 1e-12)

    def test_report_trace_inverse(self):
        rep = bounds_report(SampleParams(0.7, 1.0, 3))
        assert rep.c_s == pytest.approx(rep.c_h, rel=1e-12)
        assert rep.d_star == pytest.approx(-0.7 / 3)
        assert rep.h_star == 0.0

    def test_vectorised_costs(self):
        t = np.linspace(0.1, 0.9, 5)
        np.testing.assert_allclose(sld_cost(t, 2.0), [sld_cost(x, 2.0) for x in t])
        np.testing.assert_allclose(nagaoka_cost(t, 2.0), [nagaoka_cost(x, 2.0) for x in t])

    def test_overflow(self):
        with pytest.raises(DomainError):
            holevo_bound(SampleParams(1e-3, 0.0, 100))


class TestXOperators:
    @settings(max_examples=60, deadline=None)
    @given(transmissions, phases, pass_numbers, offsets, offsets)
    def test_constraints_hold_for_any_free_entries(self, t, phi, n, d, h):
        p = SampleParams(t, phi, n)
        pair = x_operators(p, d, h)
        assert np.max(np.abs(constraint_residuals(p, pair))) < 1e-10
        np.testing.assert_allclose(pair.x_t, pair.x_t.conj().T)
        np.testing.assert_allclose(pair.x_phi, pair.x_phi.conj().T)

    def test_constraints_against_numerical_derivative(self):
        p = SampleParams(0.6, 0.9, 2)
        h = 1e-6
        d_rho = [
            (signal_state(p.replace(t=p.t + h)) - signal_state(p.replace(t=p.t - h))) / (2 * h),
            (signal_state(p.replace(phi=p.phi + h)) - signal_state(p.replace(phi=p.phi - h))) / (2 * h),
        ]
        res = constraint_residuals(p, optimal_x_operators(p), d_rho=d_rho)
        assert np.max(np.abs(res)) < 1e-8

    def test_optimal_eigenvalues(self):
        pair = optimal_x_operators(SampleParams(0.5, 0.3, 2))
        np.testing.assert_allclose(np.linalg.eigvalsh(pair.x_t), [-1.25, 0.75], atol=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(transmissions, phases, pass_numbers, offsets, offsets)
    def test_objective_matches_algebra(self, t, phi, n, d, h):
        p = SampleParams(t, phi, n)
        assert holevo_objective(p, d, h) == pytest.approx(holevo_objective_closed(p, d, h), rel=1e-10)

    def test_objective_vectorised(self):
        p = SampleParams(0.4, 0.2, 2)
        d = np.linspace(-1, 1, 7)
        h = np.linspace(-0.5, 0.5, 3)
        grid = nagaoka_objective(p, d[:, None], h[None, :])
        assert grid.shape == (7, 3)
        assert grid[2, 1] == pytest.approx(nagaoka_objective(p, d[2], h[1]), rel=1e-14)

    @pytest.mark.parametrize("t,n", [(0.5, 1.0), (0.3, 2.0), (0.9, 0.5)])
    def test_penalty_at_optimum(self, t, n):
        p = SampleParams(t, n=n)
        expected = 2 * t ** (1 - 2 * n) * np.sqrt(1 - t ** (2 * n)) / n**2
        assert nagaoka_penalty(p, -t / n, 0.0) == pytest.approx(expected, rel=1e-12)

    def test_trace_norm_is_sum_of_singular_values(self):
        rng = np.random.default_rng(3)
        a = rng.normal(size=(50, 2, 2)) + 1j * rng.normal(size=(50, 2, 2))
        a[0] *= 1e200
        a[1] = 0
        expected = np.linalg.svd(a, compute_uv=False).sum(axis=-1)
        np.testing.assert_allclose(_trace_norm(a), expected, rtol=1e-13)


class TestNumericMinimisation:
    @pytest.mark.parametrize("t,phi,n", [(0.5, 0.0, 1.0), (0.9, 0.7, 3.0), (0.1, 2.1, 0.5), (0.6, 0.7, 100.0)])
    def test_matches_closed_forms(self, t, phi, n):
        p = SampleParams(t, phi, n)
        h = holevo_numeric(p)
        g = nagaoka_numeric(p)
        assert h.value == pytest.approx(holevo_bound(p), rel=1e-6)
        assert g.value == pytest.approx(nagaoka_bound(p), rel=1e-6)
        if n <= 5:
            # at large n the d-dependence is below double precision of the objective
            assert g.d == pytest.approx(-t / n, abs=1e-4)
            assert g.h == pytest.approx(0.0, abs=1e-4)


class TestPovm:
    @settings(max_examples=40, deadline=None)
    @given(transmissions, phases, pass_numbers, weights)
    def test_valid_povm(self, t, phi, n, lam):
        povm = nagaoka_povm(SampleParams(t, phi, n), lam)
        np.testing.assert_allclose(sum(povm.elements), np.eye(2), atol=1e-12)
        assert len(povm) == 4

    def test_rejects_invalid(self):
        with pytest.raises(ValueError):
            Povm([np.eye(2), np.eye(2)])
        with pytest.raises(ValueError):
            Povm([np.diag([1.5, 1.0]), np.diag([-0.5, 0.0])])

    @pytest.mark.parametrize("lam", [0.0, 1.0, 1.2])
    def test_lambda_domain(self, lam):
        with pytest.raises(DomainError):
            nagaoka_povm(SampleParams(0.5), lam)

    @settings(max_examples=40, deadline=None)
    @given(transmissions, phases, pass_numbers, weights)
    def test_variance_reconstruction(self, t, phi, n, lam):
        p = SampleParams(t, phi, n)
        assert povm_variance_reconstructed(p, lam) == pytest.approx(povm_variance(p, lam), rel=1e-9)

    @pytest.mark.parametrize("t,n", [(0.5, 1.0), (0.8, 3.0), (0.2, 0.5)])
    def test_lambda_star_minimises(self, t, n):
        p = SampleParams(t, 0.4, n)
        res = minimize_scalar(lambda x: povm_variance(p, x), bounds=(1e-6, 1 - 1e-6),
                              method="bounded", options={"xatol": 1e-12})
        assert res.x == pytest.approx(optimal_lambda(p), abs=1e-6)
        assert povm_variance(p, optimal_lambda(p)) == pytest.approx(nagaoka_bound(p), rel=1e-12)

    @pytest.mark.parametrize("t,phi,n", [(0.5, 0.0, 1.0), (0.75, 1.3, 2.0)])
    def test_cfi_of_optimal_povm(self, t, phi, n):
        p = SampleParams(t, phi, n)
        f = cfi_matrix(p, nagaoka_povm(p, optimal_lambda(p)).elements)
        assert np.trace(np.linalg.inv(f)) == pytest.approx(nagaoka_bound(p), rel=1e-10)

    def test_estimators_locally_unbiased(self):
        p = SampleParams(0.6, 0.5, 2)
        povm = nagaoka_povm(p, 0.4)
        c = estimator_coefficients(povm, optimal_x_operators(p))
        d_rho = signal_state_derivatives(p)
        dp = np.array([[np.real(np.trace(d @ e)) for e in povm.elements] for d in d_rho])
        np.testing.assert_allclose(c @ dp.T, np.eye(2), atol=1e-12)
        np.testing.assert_allclose(c @ povm.probabilities(signal_state(p)), [0, 0], atol=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(transmissions, pass_numbers, weights)
    def test_perfect_square(self, t, n, lam):
        p = SampleParams(t, 0.0, n)
        g = t * np.sqrt(1 - t ** (2 * n))
        lhs = povm_variance(p, lam) - nagaoka_bound(p)
        rhs = (1 + g) ** 2 * (lam - g / (1 + g)) ** 2 / (lam * (1 - lam)) / (n**2 * t ** (2 * n))
        assert lhs == pytest.approx(rhs, rel=1e-7, abs=1e-9 * nagaoka_bound(p))
