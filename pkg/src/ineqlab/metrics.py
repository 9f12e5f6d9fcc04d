"""Distribution statistics, mean-preserving spreads, and the r-vs-g report."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Trajectory, WealthDistribution
from .errors import (
    AllZero,
    NotSpreadIncreasing,
    OutOfRange,
    WouldViolatePositivity,
)


def _values(dist) -> np.ndarray:
    if isinstance(dist, WealthDistribution):
        return dist.as_array()
    return np.asarray(dist, dtype=float).reshape(-1)


def gini(dist) -> float:
    """Mean absolute difference over twice the mean: sum|x_i - x_j| / (2 n^2 mu).

    Population-weighted, no small-sample correction; ranges over [0, 1 - 1/n].
    Accepts a WealthDistribution or any nonnegative vector (zeros allowed).
    """
    x = _values(dist)
    if x.size == 0 or np.any(x < 0.0):
        raise OutOfRange("values", "gini needs a nonempty nonnegative vector")
    total = x.sum()
    if total == 0.0:
        raise AllZero("gini undefined for an all-zero vector")
    n = x.size
    xs = np.sort(x)
    # sum_i sum_j |x_i - x_j| = 2 * sum_k (2k + 1 - n) * x_(k) for sorted x
    weights = 2.0 * np.arange(n) + 1.0 - n
    return float(np.dot(weights, xs) / (n * total))


def coefficient_of_variation(dist) -> float:
    """Population standard deviation over the mean."""
    x = _values(dist)
    mu = x.mean()
    if mu == 0.0:
        raise AllZero("cv undefined for an all-zero vector")
    return float(x.std() / mu)


def ratio_max_min(dist) -> float:
    x = _values(dist)
    lo = x.min()
    return float(np.inf) if lo == 0.0 else float(x.max() / lo)


@dataclass(frozen=True)
class MetricsRow:
    """Inequality summary of one cross-section plus the r-vs-g statistic."""

    gini: float
    cv: float
    ratio_max_min: float
    r: float
    g: float
    r_minus_g: float


def metrics_row(dist, r: float, g: float) -> MetricsRow:
    return MetricsRow(
        gini=gini(dist),
        cv=coefficient_of_variation(dist),
        ratio_max_min=ratio_max_min(dist),
        r=r,
        g=g,
        r_minus_g=r - g,
    )


def mean_preserving_spread(dist: WealthDistribution, donor: int, recipient: int,
                           epsilon: float) -> WealthDistribution:
    """Transfer ``epsilon`` from a poorer household to a richer one.

    Keeps the mean exactly while strictly increasing dispersion (for any
    epsilon > 0). The donor must not be pushed to the positivity floor.
    """
    x = dist.as_array()
    n = x.size
    if donor == recipient or not (0 <= donor < n) or not (0 <= recipient < n):
        raise OutOfRange("indices", "donor and recipient must be distinct valid indices")
    if epsilon < 0.0:
        raise OutOfRange("epsilon", "epsilon must be nonnegative")
    if x[recipient] < x[donor]:
        raise NotSpreadIncreasing(
            "transfer must flow from the (weakly) poorer household to the richer one"
        )
    if x[donor] - epsilon < dist.floor:
        raise WouldViolatePositivity(
            f"donor holding {x[donor]} cannot give {epsilon} and stay positive"
        )
    out = x.copy()
    out[donor] -= epsilon
    out[recipient] += epsilon
    return WealthDistribution(out, floor=dist.floor)


@dataclass(frozen=True)
class RMinusGSeries:
    """Per-time interest, growth, and their gap, plus the terminal gap."""

    times: np.ndarray
    r: np.ndarray
    g: np.ndarray
    r_minus_g: np.ndarray
    terminal: float

    def as_table(self) -> np.ndarray:
        return np.stack([self.times, self.r, self.g, self.r_minus_g], axis=1)


def r_minus_g_series(traj: Trajectory) -> RMinusGSeries:
    diff = traj.interest - traj.growth
    return RMinusGSeries(
        times=traj.times,
        r=traj.interest,
        g=traj.growth,
        r_minus_g=diff,
        terminal=float(diff[-1]),
    )
