import numpy as np
import pytest
from hypothesis import given, settings

from conftest import pass_numbers, phases, transmissions
from qsup import DomainError
from qsup.state import (
    SampleParams,
    bloch_derivatives,
    bloch_vector,
    check_state,
    detection_probability,
    full_state,
    interferometer_projector,
    partial_trace_signal,
    purity,
    signal_state,
    signal_state_derivatives,
    state_from_bloch,
)


class TestSampleParams:
    @pytest.mark.parametrize("t", [0.0, 1.0, -0.1, 1.5, np.nan, np.inf])
    def test_rejects_bad_t(self, t):
        with pytest.raises(DomainError):
            SampleParams(t)

    @pytest.mark.parametrize("n", [0.0, -1.0, np.nan])
    def test_rejects_bad_n(self, n):
        with pytest.raises(DomainError):
            SampleParams(0.5, 0.0, n)

    def test_rejects_infinite_phase(self):
        with pytest.raises(DomainError):
            SampleParams(0.5, np.inf)

    @pytest.mark.parametrize("t", [1e-12, 1 - 1e-12])
    def test_accepts_extreme_transmission(self, t):
        rho = signal_state(SampleParams(t))
        check_state(rho)

    def test_replace(self):
        p = SampleParams(0.5, 0.3, 2)
        assert p.replace(n=3).n == 3.0
        assert p.replace(n=3).t == 0.5


class TestSignalState:
    def test_matrix_entries(self):
        rho = signal_state(SampleParams(0.5, 0.3, 2))
        c = 0.25 * np.exp(0.6j)
        np.testing.assert_allclose(rho, 0.5 * np.array([[1, np.conj(c)], [c, 1]]), atol=1e-15)

    @settings(max_examples=60, deadline=None)
    @given(transmissions, phases, pass_numbers)
    def test_valid_density_matrix(self, t, phi, n):
        check_state(signal_state(SampleParams(t, phi, n)))

    @settings(max_examples=60, deadline=None)
    @given(transmissions, phases, pass_numbers)
    def test_purity_closed_form(self, t, phi, n):
        assert purity(signal_state(SampleParams(t, phi, n))) == pytest.approx((1 + t ** (2 * n)) / 2, abs=1e-14)

    @settings(max_examples=60, deadline=None)
    @given(transmissions, phases, pass_numbers)
    def test_bloch_round_trip(self, t, phi, n):
        rho = signal_state(SampleParams(t, phi, n))
        r = bloch_vector(rho)
        assert r[2] == pytest.approx(0.0, abs=1e-15)
        assert np.linalg.norm(r) == pytest.approx(t**n, rel=1e-12)
        np.testing.assert_allclose(state_from_bloch(r), rho, atol=1e-15)

    def test_bloch_outside_ball(self):
        with pytest.raises(DomainError):
            state_from_bloch([1.0, 0.1, 0.0])

    @pytest.mark.parametrize("bad", [
        np.array([[0.6, 0], [0, 0.6]]),
        np.array([[1.2, 0], [0, -0.2]]),
        np.array([[0.5, 0.1], [0.2, 0.5]]),
    ])
    def test_check_state_rejects(self, bad):
        with pytest.raises(ValueError):
            check_state(bad)


class TestFullState:
    @settings(max_examples=40, deadline=None)
    @given(transmissions, phases, pass_numbers)
    def test_partial_trace_gives_signal_state(self, t, phi, n):
        p = SampleParams(t, phi, n)
        fs = full_state(p)
        assert np.real(np.trace(fs @ fs)) == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(partial_trace_signal(fs), signal_state(p), atol=1e-14)

    def test_partial_trace_shape(self):
        with pytest.raises(ValueError):
            partial_trace_signal(np.eye(2))

    @pytest.mark.parametrize("theta", [0.0, 0.4, np.pi / 2, 2.5])
    @pytest.mark.parametrize("sign", [1, -1])
    def test_detection_probability_matches_matrices(self, theta, sign):
        p = SampleParams(0.7, 0.35, 3)
        rho = partial_trace_signal(full_state(p, theta))
        direct = np.real(np.trace(interferometer_projector(sign) @ rho))
        assert detection_probability(p, theta, sign) == pytest.approx(direct, abs=1e-14)

    def test_probabilities_sum_to_one(self):
        p = SampleParams(0.3, 1.1, 0.5)
        total = detection_probability(p, 0.2, 1) + detection_probability(p, 0.2, -1)
        assert total == pytest.approx(1.0, abs=1e-15)

    def test_bad_sign(self):
        with pytest.raises(ValueError):
            detection_probability(SampleParams(0.5), 0.0, 0)
        with pytest.raises(ValueError):
            interferometer_projector(2)


class TestDerivatives:
    @pytest.mark.parametrize("p", [SampleParams(0.5, 0.3, 2), SampleParams(0.2, -1.0, 0.5), SampleParams(0.95, 2.0, 7)])
    def test_against_central_differences(self, p):
        h = 1e-6
        d_t, d_phi = signal_state_derivatives(p)
        num_t = (signal_state(p.replace(t=p.t + h)) - signal_state(p.replace(t=p.t - h))) / (2 * h)
        num_phi = (signal_state(p.replace(phi=p.phi + h)) - signal_state(p.replace(phi=p.phi - h))) / (2 * h)
        np.testing.assert_allclose(d_t, num_t, atol=1e-8)
        np.testing.assert_allclose(d_phi, num_phi, atol=1e-8)
        dr_t, dr_phi = bloch_derivatives(p)
        np.testing.assert_allclose(dr_t, bloch_vector(d_t), atol=1e-14)
        np.testing.assert_allclose(dr_phi, bloch_vector(d_phi), atol=1e-14)
