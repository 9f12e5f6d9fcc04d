"""Bequest dynamics: one-step formulas, steady states, growth accounting."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ineqlab import (
    OLG_AUTARKY_AK,
    OLG_AUTARKY_EXOG,
    OLG_MARKET_AK,
    OLG_MARKET_EXOG,
    RAMSEY_AUTARKY_EXOG,
    EconomyParams,
    WealthDistribution,
    cobweb_data,
    gini,
    mean_preserving_spread,
    olg_mean_map,
    olg_simulate,
    olg_steady_state,
    olg_step,
    ratio_step,
)
from ineqlab.errors import NonPositiveInput, WrongRegime


def params_exog(theta=0.0, L=2, alpha=0.5, tfp=1.0):
    return EconomyParams(tfp=tfp, alpha=alpha, theta=theta, population=L)


def params_ak(tfp=3.0, theta=0.0, L=1, alpha=0.5):
    return EconomyParams(tfp=tfp, alpha=alpha, theta=theta, population=L)


def fixed_point_oracle(params, tol=1e-10, b0=1.0):
    """Iterate the scalar mean map to its fixed point."""
    b = b0
    for _ in range(10000):
        nxt = olg_mean_map(b, params)
        if abs(nxt - b) < tol:
            return nxt
        b = nxt
    raise AssertionError("fixed-point oracle did not converge")


class TestOlgStep:
    def test_market_equal_distribution(self):
        rep = olg_step(WealthDistribution([1.0, 1.0]), params_exog(), OLG_MARKET_EXOG)
        assert np.allclose(rep.next.as_array(), [0.5, 0.5], atol=1e-15)

    def test_market_dispersed(self):
        # direct formula evaluation oracle at mean 5: f=sqrt(5), f'=1/(2 sqrt 5)
        rep = olg_step(WealthDistribution([1.0, 9.0]), params_exog(), OLG_MARKET_EXOG)
        f, fp = math.sqrt(5.0), 0.5 / math.sqrt(5.0)
        expected = [0.5 * (f - fp * (5.0 - 1.0)), 0.5 * (f - fp * (5.0 - 9.0))]
        assert np.allclose(rep.next.as_array(), expected, rtol=1e-14)
        assert rep.next.mean == pytest.approx(math.sqrt(5.0) / 2.0, rel=1e-14)
        assert rep.interest == pytest.approx(fp, rel=1e-14)

    def test_autarky_dispersed(self):
        rep = olg_step(WealthDistribution([1.0, 9.0]), params_exog(),
                       OLG_AUTARKY_EXOG)
        assert np.allclose(rep.next.as_array(), [0.5, 1.5], rtol=1e-14)
        # autarky mean falls short of the market mean: output lost to dispersion
        assert rep.next.mean == pytest.approx(1.0)
        assert rep.next.mean < math.sqrt(5.0) / 2.0

    def test_endogenous_market_formula(self):
        p = params_ak(tfp=3.0, L=1)
        rep = olg_step(WealthDistribution([2.0]), p, OLG_MARKET_AK)
        # (3/2) * ((1-a) bbar + a b) with bbar = b
        assert rep.next.as_array()[0] == pytest.approx(3.0, rel=1e-14)
        assert rep.average_growth == pytest.approx(1.5, rel=1e-14)

    def test_endogenous_autarky_formula(self):
        p = params_ak(tfp=3.0, L=2)
        rep = olg_step(WealthDistribution([1.0, 4.0]), p, OLG_AUTARKY_AK)
        m = 3.0 * 2.0 ** 0.5
        expected = (m / 2.0) * 2.5 ** 0.5 * np.array([1.0, 2.0])
        assert np.allclose(rep.next.as_array(), expected, rtol=1e-14)

    def test_wrong_regime(self):
        with pytest.raises(WrongRegime):
            olg_step(WealthDistribution([1.0]), EconomyParams(1, 0.5, 0.05),
                     RAMSEY_AUTARKY_EXOG)

    @given(
        theta=st.floats(0.0, 3.0),
        holdings=st.lists(st.floats(0.01, 100.0), min_size=1, max_size=6),
        case=st.sampled_from([OLG_MARKET_EXOG, OLG_AUTARKY_EXOG,
                              OLG_MARKET_AK, OLG_AUTARKY_AK]),
    )
    @settings(max_examples=200, deadline=None)
    def test_savings_rate_identity(self, theta, holdings, case):
        if case.is_endogenous:
            tfp = 2.0 + theta + 1.0
        else:
            tfp = 1.0
        p = EconomyParams(tfp=tfp, alpha=0.5, theta=theta, population=len(holdings))
        rep = olg_step(WealthDistribution(holdings), p, case)
        assert rep.savings_rate == 1.0 / (2.0 + theta)  # bitwise

    @given(
        holdings=st.lists(st.floats(0.05, 50.0), min_size=2, max_size=5),
        theta=st.floats(0.0, 1.0),
        alpha=st.floats(0.1, 0.9),
    )
    @settings(max_examples=150, deadline=None)
    def test_mean_closure_market(self, holdings, theta, alpha):
        # the mean of the market step equals the scalar map at the mean
        d = WealthDistribution(holdings)
        p = EconomyParams(tfp=1.0, alpha=alpha, theta=theta,
                          population=len(holdings))
        rep = olg_step(d, p, OLG_MARKET_EXOG)
        assert rep.next.mean == pytest.approx(olg_mean_map(d.mean, p), rel=1e-12)

        p_ak = EconomyParams(tfp=3.1 + theta, alpha=alpha, theta=theta,
                             population=len(holdings))
        rep_ak = olg_step(d, p_ak, OLG_MARKET_AK)
        expected = p_ak.ak_scale() * d.mean / (2.0 + theta)
        assert rep_ak.next.mean == pytest.approx(expected, rel=1e-12)

    @given(
        holdings=st.lists(st.floats(0.05, 50.0), min_size=2, max_size=5),
        theta=st.floats(0.0, 1.0),
    )
    @settings(max_examples=150, deadline=None)
    def test_hoelder_bound_autarky_ak(self, holdings, theta):
        # concavity penalty: autarky growth never beats the spillover bound
        d = WealthDistribution(holdings)
        p = EconomyParams(tfp=3.1 + theta, alpha=0.5, theta=theta,
                          population=len(holdings))
        rep = olg_step(d, p, OLG_AUTARKY_AK)
        bound = p.ak_scale() / (2.0 + theta)
        assert rep.average_growth <= bound * (1.0 + 1e-12)
        spread = max(holdings) / min(holdings)
        if spread > 1.0 + 1e-6:
            assert rep.average_growth < bound

    @given(
        base=st.lists(st.floats(0.5, 20.0), min_size=2, max_size=5),
        eps_frac=st.floats(0.05, 0.9),
    )
    @settings(max_examples=100, deadline=None)
    def test_spread_lowers_next_mean_autarky_ak(self, base, eps_frac):
        d = WealthDistribution(base)
        order = np.argsort(d.as_array())
        donor, recipient = int(order[0]), int(order[-1])
        eps = eps_frac * (d[donor] - d.floor)
        if eps <= 0.0 or d[donor] == d[recipient]:
            return
        spread = mean_preserving_spread(d, donor, recipient, eps)
        p = EconomyParams(tfp=3.0, alpha=0.5, theta=0.0, population=len(base))
        before = olg_step(d, p, OLG_AUTARKY_AK).next.mean
        after = olg_step(spread, p, OLG_AUTARKY_AK).next.mean
        assert after < before


class TestSteadyState:
    def test_theta_zero(self):
        ss = olg_steady_state(params_exog(theta=0.0), OLG_MARKET_EXOG)
        assert ss.holding_star == pytest.approx(0.25, abs=1e-15)
        assert ss.interest_star == pytest.approx(1.0)
        assert ss.holding_star == pytest.approx(
            fixed_point_oracle(params_exog(theta=0.0)), abs=1e-9)

    def test_theta_positive(self):
        p = params_exog(theta=0.1)
        ss = olg_steady_state(p, OLG_AUTARKY_EXOG)
        assert ss.holding_star == pytest.approx((1.0 / 2.1) ** 2, rel=1e-12)
        assert ss.holding_star == pytest.approx(fixed_point_oracle(p), abs=1e-9)

    def test_interest_identity(self):
        # f'(b*) = alpha (2 + theta), exactly
        for theta in (0.0, 0.1, 0.7):
            p = params_exog(theta=theta, alpha=0.3)
            ss = olg_steady_state(p, OLG_MARKET_EXOG)
            fp = 0.3 * p.tfp * ss.holding_star ** (0.3 - 1.0)
            assert fp == pytest.approx(0.3 * (2.0 + theta), rel=1e-12)
            assert ss.interest_star == pytest.approx(fp, rel=1e-12)

    def test_endogenous_growth_from_iteration(self):
        p = params_ak(tfp=3.0, theta=0.0, L=1)
        ss = olg_steady_state(p, OLG_MARKET_AK)
        assert ss.growth_star == pytest.approx(0.5, abs=1e-15)
        assert ss.interest_star == pytest.approx(1.5, abs=1e-15)
        assert ss.holding_star is None
        # ratio oracle: iterate the step, growth factor settles at 1.5
        d = WealthDistribution([1.0])
        for _ in range(5):
            rep = olg_step(d, p, OLG_MARKET_AK)
            assert rep.average_growth == pytest.approx(1.5, rel=1e-14)
            d = rep.next


class TestSimulate:
    def test_convergence_market(self):
        p = params_exog(theta=0.0)
        traj = olg_simulate(WealthDistribution([1.0, 1.0]), p, OLG_MARKET_EXOG,
                            stop_tol=1e-9)
        assert traj.converged
        assert np.allclose(traj.holdings[-1], [0.25, 0.25], atol=1e-8)

    def test_autarky_gap_shrinks_monotonically(self):
        p = params_exog(theta=0.0)
        traj = olg_simulate(WealthDistribution([0.01, 1.0]), p, OLG_AUTARKY_EXOG,
                            stop_tol=1e-9)
        assert traj.converged
        assert np.allclose(traj.holdings[-1], [0.25, 0.25], atol=1e-8)
        gaps = np.abs(traj.holdings[:, 1] - traj.holdings[:, 0])
        assert np.all(np.diff(gaps) <= 1e-15)

    def test_endogenous_ratio_decay_rate(self):
        # ratios approach 1 geometrically at exactly rate alpha
        p = params_ak(tfp=3.0, L=3)
        traj = olg_simulate(WealthDistribution([1.0, 2.0, 3.0]), p, OLG_MARKET_AK,
                            max_generations=30, stop_tol=0.0)
        dev = np.abs(traj.holdings / traj.mean_holding[:, None] - 1.0)
        dev0 = dev[0]
        for t in range(1, 25):
            assert np.allclose(dev[t], 0.5 ** t * dev0, rtol=1e-9)

    def test_nonconvergence_is_flagged(self):
        p = params_exog(theta=0.0)
        traj = olg_simulate(WealthDistribution([10.0, 0.2]), p, OLG_MARKET_EXOG,
                            max_generations=2, stop_tol=1e-12)
        assert not traj.converged
        assert "max_generations" in traj.note

    def test_gini_non_increasing_all_equalizing_cases(self):
        start = WealthDistribution([0.5, 1.0, 2.5])
        cases = [
            (OLG_MARKET_EXOG, params_exog(theta=0.1, L=3)),
            (OLG_AUTARKY_EXOG, params_exog(theta=0.1, L=3)),
            (OLG_MARKET_AK, params_ak(tfp=3.0, theta=0.1, L=3)),
            (OLG_AUTARKY_AK, params_ak(tfp=3.0, theta=0.1, L=3)),
        ]
        for regime, p in cases:
            traj = olg_simulate(start, p, regime, max_generations=60)
            assert np.all(np.diff(traj.gini) <= 1e-12), regime.case_label()

    def test_autarky_ak_dominated_by_market_ak(self):
        p = params_ak(tfp=3.0, L=3)
        start = WealthDistribution([1.0, 2.0, 3.0])
        market = olg_simulate(start, p, OLG_MARKET_AK, max_generations=15,
                              stop_tol=0.0)
        autarky = olg_simulate(start, p, OLG_AUTARKY_AK, max_generations=15,
                               stop_tol=0.0)
        assert np.all(autarky.mean_holding <= market.mean_holding + 1e-12)
        assert np.all(autarky.mean_holding[1:] < market.mean_holding[1:])


class TestRatioStep:
    def test_market_arithmetic(self):
        assert ratio_step(1.5, OLG_MARKET_AK, 0.5) == pytest.approx(1.25)

    def test_autarky_arithmetic(self):
        assert ratio_step(4.0, OLG_AUTARKY_AK, 0.5) == pytest.approx(2.0)

    def test_fixed_point(self):
        assert ratio_step(1.0, OLG_MARKET_AK, 0.3) == 1.0
        assert ratio_step(1.0, OLG_AUTARKY_AK, 0.3) == 1.0

    def test_wrong_regime(self):
        with pytest.raises(WrongRegime):
            ratio_step(1.5, OLG_MARKET_EXOG, 0.5)

    @given(
        ratio=st.floats(0.01, 100.0),
        alpha=st.floats(0.05, 0.95),
        market=st.booleans(),
    )
    @settings(max_examples=200, deadline=None)
    def test_contraction(self, ratio, alpha, market):
        regime = OLG_MARKET_AK if market else OLG_AUTARKY_AK
        nxt = ratio_step(ratio, regime, alpha)
        if abs(ratio - 1.0) > 1e-12:
            assert abs(nxt - 1.0) < abs(ratio - 1.0)

    def test_market_recursion_matches_simulation(self):
        # the distribution-level step reproduces the scalar ratio recursion
        p = params_ak(tfp=3.0, L=2)
        d = WealthDistribution([1.0, 3.0])
        rep = olg_step(d, p, OLG_MARKET_AK)
        for i in range(2):
            expected = ratio_step(d[i] / d.mean, OLG_MARKET_AK, p.alpha)
            assert rep.next[i] / rep.next.mean == pytest.approx(expected, rel=1e-12)

    def test_autarky_recursion_matches_simulation(self):
        # the power map gives next ratios after renormalizing by its own mean
        # (the raw map divides by the map-of-the-mean, not the mean-of-the-map)
        p = params_ak(tfp=3.0, L=2)
        d = WealthDistribution([1.0, 4.0])
        rep = olg_step(d, p, OLG_AUTARKY_AK)
        raw = np.array([
            ratio_step(d[i] / d.mean, OLG_AUTARKY_AK, p.alpha) for i in range(2)
        ])
        expected = raw / raw.mean()
        for i in range(2):
            assert rep.next[i] / rep.next.mean == pytest.approx(
                expected[i], rel=1e-12)


class TestCobweb:
    def test_map_values(self):
        p = params_exog(theta=0.0, L=1)
        assert olg_mean_map(0.25, p) == pytest.approx(0.25, abs=1e-15)
        assert olg_mean_map(1.0, p) == pytest.approx(0.5, abs=1e-15)
        assert olg_mean_map(0.01, p) == pytest.approx(0.05, abs=1e-15)
        assert olg_mean_map(0.01, p) > 0.01  # below b*, map above diagonal

    def test_crossing_at_steady_state(self):
        p = params_exog(theta=0.0, L=1)
        data = cobweb_data(p, 0.01, 1.0, n_points=991)
        gap = data.mapped - data.diagonal
        step = data.levels[1] - data.levels[0]
        # map starts above the diagonal and stays below after one crossing
        first_nonpositive = int(np.argmax(gap <= 0.0))
        assert gap[0] > 0.0
        assert np.all(gap[first_nonpositive:] <= 0.0)
        assert abs(data.levels[first_nonpositive] - data.b_star) <= step

    def test_bad_range(self):
        with pytest.raises(NonPositiveInput):
            cobweb_data(params_exog(L=1), 1.0, 0.5)
