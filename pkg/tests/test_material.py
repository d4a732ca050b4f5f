import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from qsup import DomainError
from qsup.material import (
    MaterialParams,
    optimal_length_kappa,
    qfi_gamma,
    qfi_gamma_chain_rule,
    qfi_kappa,
    qfi_kappa_chain_rule,
)

GRID = [(g, L) for g in (0.05, 0.3, 1.0, 4.0) for L in (0.01, 0.5, 1.0, 2.0, 10.0)]


class TestClosedForms:
    def test_values(self):
        assert qfi_gamma(MaterialParams(0.5, 0.0, 1.0)) == pytest.approx(1 / (math.e - 1), rel=1e-14)
        assert qfi_gamma(MaterialParams(0.5, 0.0, 1.0)) == pytest.approx(0.58198, abs=1e-5)
        assert qfi_kappa(MaterialParams(1.0, 0.0, 1.0)) == pytest.approx(0.13534, abs=1e-5)

    def test_short_path(self):
        g, L = 0.7, 1e-6
        assert qfi_gamma(MaterialParams(g, 0.0, L)) == pytest.approx(L / (2 * g), rel=1e-5)

    def test_transparent_limit(self):
        assert qfi_kappa(MaterialParams(1e-12, 0.0, 3.0)) == pytest.approx(9.0, rel=1e-10)

    @pytest.mark.parametrize("gamma,L", GRID)
    def test_chain_rule(self, gamma, L):
        mp = MaterialParams(gamma, 0.2, L)
        assert qfi_gamma(mp) == pytest.approx(qfi_gamma_chain_rule(mp), rel=1e-10)
        assert qfi_kappa(mp) == pytest.approx(qfi_kappa_chain_rule(mp), rel=1e-10)

    @pytest.mark.parametrize("gamma", [0.2, 1.0, 3.0])
    def test_optimal_length(self, gamma):
        res = minimize_scalar(lambda L: -qfi_kappa(MaterialParams(gamma, 0.0, L)),
                              bounds=(1e-3, 20 / gamma), method="bounded", options={"xatol": 1e-10})
        assert res.x == pytest.approx(optimal_length_kappa(gamma), rel=1e-6)

    def test_smooth_through_unit_length(self):
        Ls = np.linspace(0.01, 10, 2000)
        fg = np.array([qfi_gamma(MaterialParams(0.4, 0.0, L)) for L in Ls])
        fk = np.array([qfi_kappa(MaterialParams(0.4, 0.0, L)) for L in Ls])
        assert np.all(np.isfinite(fg)) and np.all(np.isfinite(fk))
        # no kinks: second differences stay small everywhere, including near L = 1
        assert np.max(np.abs(np.diff(fg, 2))) < 1e-4
        assert np.max(np.abs(np.diff(fk, 2))) < 1e-4


class TestDomain:
    @pytest.mark.parametrize("kwargs", [dict(gamma=0.0), dict(gamma=-1.0), dict(gamma=1.0, L=0.0), dict(gamma=1.0, kappa=np.nan)])
    def test_invalid(self, kwargs):
        with pytest.raises(DomainError):
            MaterialParams(**kwargs)

    def test_overflow_guard(self):
        with pytest.raises(DomainError):
            qfi_gamma(MaterialParams(100.0, 0.0, 4.0))
        assert qfi_gamma(MaterialParams(100.0, 0.0, 3.4)) > 0
