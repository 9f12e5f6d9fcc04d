"""Generation-by-generation bequest dynamics for the four OLG benchmarks.

Each generation splits its resources between own consumption and a bequest at
the constant rate 1/(2 + theta); the bequest becomes the next generation's
capital. With a capital market every household earns the common rate set by
the mean bequest of the previous generation; under autarky each household
farms its own holding. The endogenous variants replace the concave aggregate
technology with the capital spillover, turning the steady state into a
balanced growth ray.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    EconomyParams,
    Family,
    Market,
    Regime,
    SteadyState,
    Technology,
    Trajectory,
    WealthDistribution,
    validate_params,
)
from .errors import NegativeBequest, NonPositiveInput, ThetaZeroNoSteadyState, WrongRegime
from .metrics import coefficient_of_variation, gini, ratio_max_min


@dataclass(frozen=True)
class OlgStepReport:
    """One generation transition: next distribution plus step diagnostics.

    ``savings_rate`` is identically 1/(2 + theta). ``household_growth`` holds
    the gross factors b_i(t)/b_i(t-1); ``average_growth`` the gross factor of
    the mean. ``interest`` is the market rate under a capital market, or the
    mean private return under autarky (a diagnostic, not a price).
    """

    next: WealthDistribution
    interest: float
    savings_rate: float
    household_growth: np.ndarray
    average_growth: float


def _step_arrays(b: np.ndarray, params: EconomyParams, regime: Regime):
    """Core transition on raw arrays; returns (next_b, interest)."""
    s = 1.0 / (2.0 + params.theta)
    alpha = params.alpha
    bbar = b.sum() / b.size
    if regime.is_endogenous:
        m = params.ak_scale()
        if regime.is_market:
            nxt = (s * m) * ((1.0 - alpha) * bbar + alpha * b)
            interest = alpha * m
        else:
            nxt = (s * m * bbar ** (1.0 - alpha)) * b ** alpha
            interest = float(np.mean(alpha * m * (bbar / b) ** (1.0 - alpha)))
    else:
        A = params.tfp
        if regime.is_market:
            f_bar = A * bbar ** alpha
            fp_bar = alpha * A * bbar ** (alpha - 1.0)
            nxt = s * (f_bar - fp_bar * (bbar - b))
            interest = fp_bar
        else:
            nxt = (s * A) * b ** alpha
            interest = float(np.mean(alpha * A * b ** (alpha - 1.0)))
    return nxt, interest


def olg_step(dist: WealthDistribution, params: EconomyParams,
             regime: Regime) -> OlgStepReport:
    """Advance the bequest distribution by one generation."""
    validate_params(params, regime)
    if not regime.is_olg:
        raise WrongRegime("olg_step requires an OLG regime")
    b = dist.as_array()
    nxt, interest = _step_arrays(b, params, regime)
    if np.any(nxt <= 0.0):
        raise NegativeBequest(
            "market bequest formula produced a non-positive bequest; "
            "choose a less extreme initial distribution"
        )
    hg = nxt / b
    avg = float(nxt.sum() / nxt.size / (b.sum() / b.size))
    return OlgStepReport(
        next=WealthDistribution._trusted(nxt, dist.floor),
        interest=interest,
        savings_rate=1.0 / (2.0 + params.theta),
        household_growth=hg,
        average_growth=avg,
    )


def olg_steady_state(params: EconomyParams, regime: Regime) -> SteadyState:
    """Closed-form long-run target.

    Fixed technology (market or autarky alike): the bequest level where the
    map A b**alpha / (2 + theta) crosses the diagonal; interest there equals
    alpha (2 + theta). Endogenous technology: no level target exists, only a
    ray with gross growth tfp L**(1-alpha) / (2 + theta).
    """
    validate_params(params, regime)
    if not regime.is_olg:
        raise WrongRegime("olg_steady_state requires an OLG regime")
    if regime.is_endogenous:
        m = params.ak_scale()
        growth = m / (2.0 + params.theta) - 1.0
        return SteadyState(
            holding_star=None,
            growth_star=growth,
            interest_star=params.alpha * m,
            regime=regime,
        )
    b_star = (params.tfp / (2.0 + params.theta)) ** (1.0 / (1.0 - params.alpha))
    return SteadyState(
        holding_star=b_star,
        growth_star=0.0,
        interest_star=params.alpha * (2.0 + params.theta),
        regime=regime,
        consumption_star=(1.0 + params.theta) * b_star,
    )


def _mean_output(b: np.ndarray, bbar: float, params: EconomyParams,
                 regime: Regime) -> float:
    if regime.is_endogenous:
        m = params.ak_scale()
        return float(np.mean(m * bbar ** (1.0 - params.alpha) * b ** params.alpha))
    return float(np.mean(params.tfp * b ** params.alpha))


def olg_simulate(dist0: WealthDistribution, params: EconomyParams, regime: Regime,
                 max_generations: int = 10000, stop_tol: float = 1e-9) -> Trajectory:
    """Iterate the generation map, recording states and diagnostics.

    Stops early once the distribution is within ``stop_tol`` of the steady
    level (fixed technology) or once relative dispersion around the mean
    falls below ``stop_tol`` (endogenous technology). Failure to converge is
    flagged on the returned trajectory, never raised.
    """
    validate_params(params, regime)
    if not regime.is_olg:
        raise WrongRegime("olg_simulate requires an OLG regime")
    if max_generations < 1:
        raise NonPositiveInput("max_generations must be >= 1")

    b_star = None
    if not regime.is_endogenous:
        b_star = olg_steady_state(params, regime).holding_star

    def settled(b: np.ndarray, bbar: float) -> bool:
        if b_star is not None:
            return bool(np.max(np.abs(b - b_star)) < stop_tol)
        return bool(np.max(np.abs(b / bbar - 1.0)) < stop_tol)

    one_plus_theta = 1.0 + params.theta
    b = dist0.as_array()
    bbar = float(b.mean())

    rows_b = [b]
    # interest at the initial row: the rate implied by the current state,
    # i.e. the rate that will prevail over the upcoming step
    _, r0 = _step_arrays(b, params, regime)
    interest = [r0]
    growth = [0.0]
    converged = settled(b, bbar)

    while not converged and len(rows_b) - 1 < max_generations:
        rep = olg_step(WealthDistribution._trusted(b, dist0.floor), params, regime)
        b = rep.next.as_array()
        bbar = float(b.mean())
        rows_b.append(b)
        interest.append(rep.interest)
        growth.append(rep.average_growth - 1.0)
        converged = settled(b, bbar)

    holdings = np.stack(rows_b)
    n = holdings.shape[0]
    times = np.arange(n, dtype=float)
    consumption = one_plus_theta * holdings
    mean_holding = holdings.mean(axis=1)
    mean_output = np.array([
        _mean_output(holdings[i], mean_holding[i], params, regime) for i in range(n)
    ])
    return Trajectory(
        times=times,
        holdings=holdings,
        consumption=consumption,
        mean_holding=mean_holding,
        mean_output=mean_output,
        interest=np.asarray(interest),
        growth=np.asarray(growth),
        gini=np.array([gini(holdings[i]) for i in range(n)]),
        cv=np.array([coefficient_of_variation(holdings[i]) for i in range(n)]),
        ratio_max_min=np.array([ratio_max_min(holdings[i]) for i in range(n)]),
        regime=regime,
        converged=converged,
        savings_rate=1.0 / (2.0 + params.theta),
        note="" if converged else "did not settle within max_generations",
    )


def ratio_step(ratio: float, regime: Regime, alpha: float) -> float:
    """One-generation update of a household's share of the mean bequest.

    Only the endogenous regimes have a scale-free ratio recursion; both forms
    contract monotonically toward the unique fixed point 1.
    """
    if not regime.is_endogenous:
        raise WrongRegime("ratio recursion exists only under endogenous technology")
    if not (ratio > 0.0):
        raise NonPositiveInput("ratio must be > 0")
    if not (0.0 < alpha < 1.0):
        raise NonPositiveInput("alpha must lie in (0, 1)")
    if regime.is_market:
        return 1.0 + alpha * (ratio - 1.0)
    return ratio ** alpha


@dataclass(frozen=True)
class CobwebData:
    """Samples of the scalar bequest map against the 45-degree line."""

    levels: np.ndarray
    mapped: np.ndarray
    diagonal: np.ndarray
    b_star: float


def olg_mean_map(b: float, params: EconomyParams) -> float:
    """The scalar map b -> A b**alpha / (2 + theta) driving the mean bequest."""
    return params.tfp * b ** params.alpha / (2.0 + params.theta)


_EXOG_PROBE = Regime(Family.OLG, Market.AUTARKY, Technology.EXOGENOUS)


def cobweb_data(params: EconomyParams, b_min: float, b_max: float,
                n_points: int = 200) -> CobwebData:
    """Sample the mean-bequest map for a cobweb plot (fixed technology only)."""
    if not (0.0 < b_min < b_max):
        raise NonPositiveInput("need 0 < b_min < b_max")
    if n_points < 2:
        raise NonPositiveInput("n_points must be >= 2")
    validate_params(params, _EXOG_PROBE)
    levels = np.linspace(b_min, b_max, n_points)
    mapped = params.tfp * levels ** params.alpha / (2.0 + params.theta)
    b_star = (params.tfp / (2.0 + params.theta)) ** (1.0 / (1.0 - params.alpha))
    return CobwebData(levels=levels, mapped=mapped, diagonal=levels.copy(),
                      b_star=b_star)
