"""Leontief values, surplus, and the two sign theorems."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ineqlab import (
    LeontiefEconomy,
    augmented_matrix,
    embodied_labor_values,
    fmt_check,
    fmt_sweep,
    gcet_values,
    profit_sign,
    random_economy,
    spectral_radius,
    surplus_value_rate,
)
from ineqlab.errors import NonPositiveInput, NotProductive, OutOfRange


def corn(a=0.5, l=1.0, wage=0.3):
    return LeontiefEconomy(np.array([[a]]), np.array([l]), np.array([wage]))


def series_values(econ, terms=50):
    """Truncated power-series oracle: sum_k labor . A^k."""
    A = econ.input_matrix
    total = np.zeros_like(econ.labor)
    power = np.eye(econ.n)
    for _ in range(terms):
        total = total + econ.labor @ power
        power = power @ A
    return total


class TestSpectralRadius:
    def test_scalar(self):
        assert spectral_radius(np.array([[0.8]])) == pytest.approx(0.8, abs=1e-12)

    def test_periodic_pattern(self):
        # permutation matrix: eigenvalues on the unit circle, Perron root 1
        M = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert spectral_radius(M) == pytest.approx(1.0, abs=1e-10)

    @given(arrays(float, (3, 3), elements=st.floats(0.0, 1.0)))
    @settings(max_examples=150, deadline=None)
    def test_matches_eigvals_oracle(self, M):
        expected = max(abs(np.linalg.eigvals(M)))
        assert spectral_radius(M) == pytest.approx(expected, rel=1e-8, abs=1e-9)


class TestEmbodiedValues:
    def test_corn_geometric_series(self):
        econ = corn()
        v = embodied_labor_values(econ)
        assert v[0] == pytest.approx(2.0, rel=1e-12)
        assert v[0] == pytest.approx(series_values(econ)[0], rel=1e-12)

    def test_no_intermediates(self):
        econ = LeontiefEconomy(np.zeros((2, 2)), np.array([0.7, 1.3]),
                               np.array([0.1, 0.1]))
        assert np.allclose(embodied_labor_values(econ), [0.7, 1.3])

    def test_two_sector_system(self):
        A = np.array([[0.2, 0.1], [0.3, 0.4]])
        econ = LeontiefEconomy(A, np.array([1.0, 1.0]), np.array([0.1, 0.1]))
        v = embodied_labor_values(econ)
        # defining equation holds to tight residual
        assert np.max(np.abs(v @ A + econ.labor - v)) < 1e-10
        assert np.allclose(v, series_values(econ, 60), rtol=1e-9)

    def test_series_truncation_bound(self):
        econ = LeontiefEconomy(np.array([[0.3, 0.2], [0.1, 0.25]]),
                               np.array([0.5, 0.8]), np.array([0.2, 0.1]))
        v = embodied_labor_values(econ)
        rho = spectral_radius(econ.input_matrix)
        for K in (5, 10, 20):
            approx = series_values(econ, K)
            bound = np.max(econ.labor) * rho ** K / (1.0 - rho)
            assert np.max(np.abs(v - approx)) <= bound * 10.0

    def test_not_productive(self):
        with pytest.raises(NotProductive):
            LeontiefEconomy(np.array([[1.0]]), np.array([1.0]), np.array([0.1]))
        with pytest.raises(NotProductive):
            LeontiefEconomy(np.array([[0.6, 0.6], [0.6, 0.6]]),
                            np.array([1.0, 1.0]), np.array([0.0, 0.0]))

    def test_input_validation(self):
        with pytest.raises(NonPositiveInput):
            LeontiefEconomy(np.array([[0.1]]), np.array([0.0]), np.array([0.1]))
        with pytest.raises(OutOfRange):
            LeontiefEconomy(np.array([[-0.1]]), np.array([1.0]), np.array([0.1]))


class TestSurplusAndProfit:
    def test_corn_surplus(self):
        assert surplus_value_rate(corn(wage=0.3)) == pytest.approx(0.4, rel=1e-12)
        assert surplus_value_rate(corn(wage=0.5)) == pytest.approx(0.0, abs=1e-14)
        assert surplus_value_rate(corn(wage=0.0)) == pytest.approx(1.0, rel=1e-14)

    def test_corn_profit_signs(self):
        assert profit_sign(corn(wage=0.3)) == "positive"   # M = 0.8
        assert profit_sign(corn(wage=0.5)) == "zero"        # M = 1.0
        assert profit_sign(corn(wage=0.7)) == "negative"    # M = 1.2

    def test_fmt_corn(self):
        rep = fmt_check(corn(wage=0.3))
        assert rep.surplus_positive and rep.profit_positive and rep.equivalent
        rep = fmt_check(corn(wage=0.7))
        assert (not rep.surplus_positive and not rep.profit_positive
                and rep.equivalent)


class TestGcet:
    def test_corn_own_value_equals_augmented_coefficient(self):
        assert gcet_values(corn(wage=0.3), 0).own_value == pytest.approx(0.8)
        assert gcet_values(corn(wage=0.5), 0).own_value == pytest.approx(1.0)

    def test_two_sector_theorem_content(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            scale = float(rng.uniform(0.3, 1.7))
            econ = random_economy(rng, 2, scale)
            rho = spectral_radius(augmented_matrix(econ))
            own = [gcet_values(econ, j).own_value for j in range(2)]
            if rho < 1.0 - 1e-10:
                assert all(o < 1.0 - 1e-10 for o in own)
            elif rho > 1.0 + 1e-10:
                assert not all(o < 1.0 - 1e-10 for o in own)

    def test_bad_numeraire(self):
        with pytest.raises(OutOfRange):
            gcet_values(corn(), 1)


class TestSweep:
    def test_thousand_trials_clean(self):
        for n in (2, 3):
            report = fmt_sweep(trials=1000, n=n, seed=42)
            assert report.clean, report.text()

    def test_deterministic_report(self):
        a = fmt_sweep(trials=50, n=2, seed=123).text()
        b = fmt_sweep(trials=50, n=2, seed=123).text()
        assert a == b

    def test_rejects_bad_args(self):
        with pytest.raises(NonPositiveInput):
            fmt_sweep(trials=0, n=2, seed=1)
        with pytest.raises(OutOfRange):
            fmt_sweep(trials=10, n=11, seed=1)

    def test_surplus_rate_tracks_wage_scale(self):
        rng = np.random.default_rng(5)
        for scale in (0.4, 1.0, 1.6):
            econ = random_economy(rng, 3, scale)
            assert surplus_value_rate(econ) == pytest.approx(1.0 - scale,
                                                             rel=1e-10, abs=1e-12)
