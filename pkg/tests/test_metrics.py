"""Inequality metrics and the spread construction."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ineqlab import (
    WealthDistribution,
    coefficient_of_variation,
    gini,
    mean_preserving_spread,
    metrics_row,
    ratio_max_min,
)
from ineqlab.errors import (
    AllZero,
    NotSpreadIncreasing,
    OutOfRange,
    WouldViolatePositivity,
)


def gini_double_loop(x):
    x = np.asarray(x, float)
    n = x.size
    return sum(abs(a - b) for a in x for b in x) / (2.0 * n * n * x.mean())


class TestGini:
    def test_perfect_equality(self):
        assert gini([1.0, 1.0, 1.0]) == 0.0

    def test_half_with_zero(self):
        assert gini([0.0, 1.0]) == pytest.approx(0.5, abs=1e-15)

    def test_one_nine(self):
        # |1-9| * 2 / (2 * 4 * 5) = 0.4
        assert gini([1.0, 9.0]) == pytest.approx(0.4, abs=1e-15)

    def test_all_zero(self):
        with pytest.raises(AllZero):
            gini([0.0, 0.0])

    def test_rejects_negative(self):
        with pytest.raises(OutOfRange):
            gini([-1.0, 2.0])

    @given(st.lists(st.floats(0.0, 1e6), min_size=2, max_size=12))
    @settings(max_examples=150, deadline=None)
    def test_matches_double_loop_oracle(self, xs):
        if sum(xs) < 1e-9:
            return
        assert gini(xs) == pytest.approx(gini_double_loop(xs), rel=1e-9, abs=1e-12)

    @given(
        xs=st.lists(st.floats(1e-6, 1e6), min_size=2, max_size=10),
        lam=st.floats(1e-6, 1e6),
    )
    @settings(max_examples=120, deadline=None)
    def test_scale_invariance(self, xs, lam):
        scaled = [lam * x for x in xs]
        assert gini(scaled) == pytest.approx(gini(xs), rel=1e-10, abs=1e-12)
        assert coefficient_of_variation(scaled) == pytest.approx(
            coefficient_of_variation(xs), rel=1e-9, abs=1e-12)

    @given(st.lists(st.floats(1e-6, 1e6), min_size=2, max_size=10))
    @settings(max_examples=120, deadline=None)
    def test_bounds(self, xs):
        n = len(xs)
        g = gini(xs)
        assert -1e-12 <= g <= 1.0 - 1.0 / n + 1e-12

    def test_zero_iff_equal(self):
        assert gini([3.0, 3.0, 3.0]) == 0.0
        assert gini([3.0, 3.0001, 3.0]) > 0.0
        assert coefficient_of_variation([2.0, 2.0]) == 0.0
        assert coefficient_of_variation([2.0, 2.1]) > 0.0


class TestMeanPreservingSpread:
    def test_four_six_to_three_seven(self):
        d = mean_preserving_spread(WealthDistribution([4.0, 6.0]), 0, 1, 1.0)
        assert np.allclose(d.as_array(), [3.0, 7.0])
        assert d.mean == pytest.approx(5.0, abs=1e-15)

    def test_three_seven_to_one_nine(self):
        d = mean_preserving_spread(WealthDistribution([3.0, 7.0]), 0, 1, 2.0)
        assert np.allclose(d.as_array(), [1.0, 9.0])

    def test_null_transfer(self):
        d = mean_preserving_spread(WealthDistribution([5.0, 5.0]), 0, 1, 0.0)
        assert np.allclose(d.as_array(), [5.0, 5.0])

    def test_positivity_guard(self):
        with pytest.raises(WouldViolatePositivity):
            mean_preserving_spread(WealthDistribution([4.0, 6.0]), 0, 1, 4.0)

    def test_direction_guard(self):
        with pytest.raises(NotSpreadIncreasing):
            mean_preserving_spread(WealthDistribution([4.0, 6.0]), 1, 0, 1.0)

    @given(
        base=st.lists(st.floats(0.5, 100.0), min_size=2, max_size=8),
        eps_frac=st.floats(0.01, 0.9),
        data=st.data(),
    )
    @settings(max_examples=150, deadline=None)
    def test_spread_raises_dispersion_keeps_mean(self, base, eps_frac, data):
        dist = WealthDistribution(base)
        order = np.argsort(dist.as_array())
        donor = int(order[0])
        recipient = int(order[-1])
        if dist[donor] == dist[recipient]:
            return
        eps = eps_frac * (dist[donor] - dist.floor)
        spread = mean_preserving_spread(dist, donor, recipient, eps)
        assert spread.mean == pytest.approx(dist.mean, abs=1e-15 * (1 + dist.mean))
        if eps > 0:
            assert gini(spread) > gini(dist)
            assert coefficient_of_variation(spread) > coefficient_of_variation(dist)
            assert np.var(spread.as_array()) > np.var(dist.as_array())


class TestMetricsRow:
    def test_fields(self):
        row = metrics_row(WealthDistribution([1.0, 9.0]), r=1.05, g=0.0)
        assert row.gini == pytest.approx(0.4)
        assert row.ratio_max_min == pytest.approx(9.0)
        assert row.r_minus_g == pytest.approx(1.05)

    def test_ratio_with_zero_entry(self):
        assert ratio_max_min([0.0, 1.0]) == np.inf
