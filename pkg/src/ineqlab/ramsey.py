"""Continuous-time dynasty models: Euler growth, RK4, saddle-path shooting.

The four benchmarks share one state layout, per-household (holding,
consumption) pairs, but differ in how holdings feed production:

* capital market: every household operates the economy-wide mean; the
  interest rate is the marginal product at that mean, and asset drift is
  wage income plus interest minus consumption;
* autarky: each household farms its own capital.

Saddle paths are found by shooting on initial consumption. For the 2-D cases
(a single household, or the aggregate of a market economy) a scalar bisection
suffices: shots that blow up in capital mean consumption started too low,
shots that crash it mean too high. Market economies then decompose into
household asset paths that are linear in the aggregate prices, solved by
per-household bisection on the terminal budget. The autarky spillover case
needs a genuinely multidimensional search, done by damped Newton on the
initial consumption vector with horizon continuation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    RAMSEY_AUTARKY_EXOG,
    EconomyParams,
    Regime,
    SteadyState,
    Trajectory,
    WealthDistribution,
    validate_params,
)
from .errors import (
    DecompositionInconsistent,
    NonPositiveInput,
    ShootingFailed,
    StateLeftDomain,
    ThetaZeroNoSteadyState,
    WrongRegime,
)
from .metrics import coefficient_of_variation, gini, ratio_max_min

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class RamseyState:
    """Instantaneous state: per-household holdings and consumption."""

    time: float
    holdings: WealthDistribution
    consumption: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.consumption, dtype=float).reshape(-1)
        if c.size != len(self.holdings):
            raise NonPositiveInput("consumption length must match holdings")
        if not np.all(np.isfinite(c)) or np.any(c <= 0.0):
            raise NonPositiveInput("consumption must be strictly positive")
        object.__setattr__(self, "consumption", c)


@dataclass(frozen=True)
class ShootingConfig:
    """Solver controls for saddle-path shooting.

    ``horizon`` of None picks a per-regime default; ``terminal_band`` is the
    relative distance from the steady state (or balanced ray) that counts as
    arrival. ``bisection_tol`` is the relative bracket width at which the
    search stops (the default exhausts float64).
    """

    horizon: float | None = None
    dt: float = 1e-2
    bisection_tol: float = 1e-15
    max_iterations: int = 200
    terminal_band: float = 1e-4
    record_stride: int = 1

    def __post_init__(self):
        if self.dt <= 0.0 or self.terminal_band <= 0.0 or self.bisection_tol <= 0.0:
            raise NonPositiveInput("dt, terminal_band, bisection_tol must be > 0")
        if self.horizon is not None and self.horizon <= self.dt:
            raise NonPositiveInput("horizon must exceed dt")
        if self.max_iterations < 1 or self.record_stride < 1:
            raise NonPositiveInput("max_iterations and record_stride must be >= 1")


# ---------------------------------------------------------------------------
# vector field


def _rhs_arrays(k: np.ndarray, c: np.ndarray, params: EconomyParams,
                regime: Regime):
    """Time derivatives (dk, dc) on raw arrays; no validation."""
    alpha = params.alpha
    theta = params.theta
    gamma = params.gamma
    if regime.is_market:
        kbar = k.sum() / k.size
        if regime.is_endogenous:
            m = params.ak_scale()
            r = alpha * m
            wage = (1.0 - alpha) * m * kbar
        else:
            r = alpha * params.tfp * kbar ** (alpha - 1.0)
            wage = (1.0 - alpha) * params.tfp * kbar ** alpha
        dk = wage + r * k - c
        dc = ((r - theta) / gamma) * c
    else:
        if regime.is_endogenous:
            kbar = k.sum() / k.size
            m = params.ak_scale()
            y = m * kbar ** (1.0 - alpha) * k ** alpha
            mpk = alpha * m * (kbar / k) ** (1.0 - alpha)
        else:
            y = params.tfp * k ** alpha
            mpk = alpha * params.tfp * k ** (alpha - 1.0)
        dk = y - c
        dc = ((mpk - theta) / gamma) * c
    return dk, dc


def euler_growth(state: RamseyState, params: EconomyParams,
                 regime: Regime) -> np.ndarray:
    """Per-household consumption growth rates (mpk_i - theta) / gamma.

    Market regimes give every household the common rate set by the mean;
    autarky rates are household-specific.
    """
    validate_params(params, regime)
    if regime.is_olg:
        raise WrongRegime("euler_growth requires a Ramsey regime")
    k = state.holdings.as_array()
    _, dc = _rhs_arrays(k, state.consumption, params, regime)
    return dc / state.consumption


def ramsey_rhs(state: RamseyState, params: EconomyParams, regime: Regime):
    """Drift of holdings and consumption at the given state."""
    validate_params(params, regime)
    if regime.is_olg:
        raise WrongRegime("ramsey_rhs requires a Ramsey regime")
    return _rhs_arrays(state.holdings.as_array(), state.consumption, params, regime)


def rk4_step(state: RamseyState, dt: float, params: EconomyParams,
             regime: Regime) -> RamseyState:
    """One classical Runge-Kutta update of (holdings, consumption).

    Raises StateLeftDomain as soon as any stage input or the result becomes
    non-positive; the caller decides whether to halve dt or abandon the shot.
    """
    validate_params(params, regime)
    if regime.is_olg:
        raise WrongRegime("rk4_step requires a Ramsey regime")
    if dt <= 0.0:
        raise NonPositiveInput("dt must be > 0")
    k = state.holdings.as_array()
    c = state.consumption

    def rhs(kk, cc):
        return _rhs_arrays(kk, cc, params, regime)

    dk1, dc1 = rhs(k, c)
    k2, c2 = k + 0.5 * dt * dk1, c + 0.5 * dt * dc1
    _check_stage(k2, c2, state.time, dt, params, regime)
    dk2, dc2 = rhs(k2, c2)
    k3, c3 = k + 0.5 * dt * dk2, c + 0.5 * dt * dc2
    _check_stage(k3, c3, state.time, dt, params, regime)
    dk3, dc3 = rhs(k3, c3)
    k4, c4 = k + dt * dk3, c + dt * dc3
    _check_stage(k4, c4, state.time, dt, params, regime)
    dk4, dc4 = rhs(k4, c4)
    kn = k + (dt / 6.0) * (dk1 + 2.0 * dk2 + 2.0 * dk3 + dk4)
    cn = c + (dt / 6.0) * (dc1 + 2.0 * dc2 + 2.0 * dc3 + dc4)
    _check_stage(kn, cn, state.time, dt, params, regime)
    return RamseyState(
        time=state.time + dt,
        holdings=WealthDistribution._trusted(kn, state.holdings.floor),
        consumption=cn,
    )


def _check_stage(k, c, t, dt, params, regime):
    if np.any(k <= 0.0) or np.any(c <= 0.0):
        raise StateLeftDomain(
            f"state left the positive domain during a step at t={t} with dt={dt} "
            f"(regime {regime.case_label()}, params {params})"
        )


def ramsey_steady_state(params: EconomyParams, regime: Regime) -> SteadyState:
    """Long-run target of the dynasty models.

    Fixed technology: capital where the private return equals the discount
    rate. Endogenous technology: balanced growth at (alpha tfp L**(1-alpha)
    - theta) / gamma; the transformation rule r = theta + gamma g holds by
    construction.
    """
    validate_params(params, regime)
    if regime.is_olg:
        raise WrongRegime("ramsey_steady_state requires a Ramsey regime")
    if regime.is_endogenous:
        m = params.ak_scale()
        r_star = params.alpha * m
        g_star = (r_star - params.theta) / params.gamma
        return SteadyState(
            holding_star=None,
            growth_star=g_star,
            interest_star=r_star,
            regime=regime,
        )
    if params.theta == 0.0:
        raise ThetaZeroNoSteadyState(
            "with theta = 0 the fixed-technology target capital diverges"
        )
    k_star = (params.alpha * params.tfp / params.theta) ** (1.0 / (1.0 - params.alpha))
    c_star = params.tfp * k_star ** params.alpha
    return SteadyState(
        holding_star=k_star,
        growth_star=0.0,
        interest_star=params.theta,
        regime=regime,
        consumption_star=c_star,
    )


# ---------------------------------------------------------------------------
# scalar (2-D) shooting for point targets: autarky households and the
# aggregate of a fixed-technology market economy


def _scalar_rhs_exog(params: EconomyParams):
    A, alpha, theta, gamma = params.tfp, params.alpha, params.theta, params.gamma

    def rhs(k, c):
        return A * k ** alpha - c, c * (alpha * A * k ** (alpha - 1.0) - theta) / gamma

    return rhs


_LOW, _HIGH, _ARRIVED = -1, 1, 0


def _classify_point_shot(rhs, k0, c0, k_star, c_star, T, dt, guards):
    """Integrate a 2-D shot; decide whether c0 was too low or too high.

    Capital escaping upward (or consumption collapsing) means consumption
    started too low; capital crashing (or consumption exploding) too high.
    A shot that survives to the horizon is classified by which side of the
    target capital it ends on.
    """
    k_lo, k_hi, c_lo, c_hi = guards
    k, c = k0, c0
    n = int(round(T / dt))
    for _ in range(n):
        dk1, dc1 = rhs(k, c)
        k2, c2 = k + 0.5 * dt * dk1, c + 0.5 * dt * dc1
        if k2 <= 0.0 or c2 <= 0.0:
            return _HIGH if k2 <= 0.0 else _LOW
        dk2, dc2 = rhs(k2, c2)
        k3, c3 = k + 0.5 * dt * dk2, c + 0.5 * dt * dc2
        if k3 <= 0.0 or c3 <= 0.0:
            return _HIGH if k3 <= 0.0 else _LOW
        dk3, dc3 = rhs(k3, c3)
        k4, c4 = k + dt * dk3, c + dt * dc3
        if k4 <= 0.0 or c4 <= 0.0:
            return _HIGH if k4 <= 0.0 else _LOW
        dk4, dc4 = rhs(k4, c4)
        k += dt * (dk1 + 2.0 * dk2 + 2.0 * dk3 + dk4) / 6.0
        c += dt * (dc1 + 2.0 * dc2 + 2.0 * dc3 + dc4) / 6.0
        if k < k_lo or c > c_hi:
            return _HIGH
        if k > k_hi or c < c_lo:
            return _LOW
    return _LOW if k > k_star else _HIGH


def _shoot_point_scalar(k0: float, params: EconomyParams, config: ShootingConfig,
                        T: float) -> float:
    """Bisect c(0) so the 2-D fixed-technology path lands on the saddle."""
    target = ramsey_steady_state(params, RAMSEY_AUTARKY_EXOG)
    k_star, c_star = target.holding_star, target.consumption_star
    rhs = _scalar_rhs_exog(params)
    f_k0 = params.tfp * k0 ** params.alpha
    guards = (
        0.3 * min(k0, k_star),
        2.5 * max(k0, k_star),
        1e-6 * c_star,
        10.0 * max(c_star, f_k0),
    )
    lo = 1e-9 * c_star
    hi = 2.0 * max(c_star, f_k0)
    if _classify_point_shot(rhs, k0, lo, k_star, c_star, T, config.dt, guards) != _LOW:
        raise ShootingFailed("lower bracket did not classify as too-low consumption")
    expansions = 0
    while _classify_point_shot(rhs, k0, hi, k_star, c_star, T, config.dt, guards) != _HIGH:
        hi *= 2.0
        expansions += 1
        if expansions > 60:
            raise ShootingFailed("could not bracket initial consumption from above")
    for _ in range(config.max_iterations):
        if hi - lo <= config.bisection_tol * hi:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        side = _classify_point_shot(rhs, k0, mid, k_star, c_star, T, config.dt, guards)
        if side == _LOW:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _default_horizon_exog(params: EconomyParams, k0_values, config: ShootingConfig):
    if config.horizon is not None:
        return config.horizon
    theta = params.theta
    spans = []
    for k0 in np.atleast_1d(k0_values):
        fp = params.alpha * params.tfp * float(k0) ** (params.alpha - 1.0)
        gap = abs(fp - theta)
        spans.append(500.0 if gap == 0.0 else 10.0 / gap)
    return float(min(500.0, max(50.0, max(spans))))


# ---------------------------------------------------------------------------
# recording integrator for the joint vector system


def _integrate_vector(k0: np.ndarray, c0: np.ndarray, params: EconomyParams,
                      regime: Regime, dt: float, n_steps: int, stride: int,
                      stop_fn=None):
    """Integrate the joint system, recording rows; early stop via stop_fn.

    When a full step leaves the positive domain, the step is retried with up
    to six local halvings of dt before the shot is declared infeasible.
    Returns (times, K, C, stopped, feasible).
    """

    def rhs(kk, cc):
        return _rhs_arrays(kk, cc, params, regime)

    def substeps(k, c, h, depth):
        # one interval of length h, recursively halved on domain exit
        dk1, dc1 = rhs(k, c)
        k2, c2 = k + 0.5 * h * dk1, c + 0.5 * h * dc1
        if _positive(k2, c2):
            dk2, dc2 = rhs(k2, c2)
            k3, c3 = k + 0.5 * h * dk2, c + 0.5 * h * dc2
            if _positive(k3, c3):
                dk3, dc3 = rhs(k3, c3)
                k4, c4 = k + h * dk3, c + h * dc3
                if _positive(k4, c4):
                    dk4, dc4 = rhs(k4, c4)
                    kn = k + (h / 6.0) * (dk1 + 2.0 * dk2 + 2.0 * dk3 + dk4)
                    cn = c + (h / 6.0) * (dc1 + 2.0 * dc2 + 2.0 * dc3 + dc4)
                    if _positive(kn, cn):
                        return kn, cn
        if depth >= 6:
            return None
        half = substeps(k, c, 0.5 * h, depth + 1)
        if half is None:
            return None
        return substeps(half[0], half[1], 0.5 * h, depth + 1)

    k = k0.astype(float).copy()
    c = c0.astype(float).copy()
    times = [0.0]
    K = [k.copy()]
    C = [c.copy()]
    stopped = False
    feasible = True
    t = 0.0
    for i in range(1, n_steps + 1):
        out = substeps(k, c, dt, 0)
        if out is None:
            feasible = False
            break
        k, c = out
        t = i * dt
        if i % stride == 0 or i == n_steps:
            times.append(t)
            K.append(k.copy())
            C.append(c.copy())
        if stop_fn is not None and stop_fn(k, c):
            if times[-1] != t:
                times.append(t)
                K.append(k.copy())
                C.append(c.copy())
            stopped = True
            break
    return np.asarray(times), np.stack(K), np.stack(C), stopped, feasible


def _positive(k, c) -> bool:
    return bool(np.all(k > 0.0) and np.all(c > 0.0))


def _ramsey_trajectory(times, K, C, params, regime, converged, note=""):
    alpha, theta, gamma = params.alpha, params.theta, params.gamma
    n = times.shape[0]
    mean_holding = K.mean(axis=1)
    if regime.is_market:
        if regime.is_endogenous:
            m = params.ak_scale()
            r = np.full(n, alpha * m)
            mean_output = m * mean_holding
        else:
            r = alpha * params.tfp * mean_holding ** (alpha - 1.0)
            mean_output = params.tfp * mean_holding ** alpha
        growth = (r - theta) / gamma
    else:
        if regime.is_endogenous:
            m = params.ak_scale()
            mpk = alpha * m * (mean_holding[:, None] / K) ** (1.0 - alpha)
            mean_output = (m * mean_holding[:, None] ** (1.0 - alpha)
                           * K ** alpha).mean(axis=1)
        else:
            mpk = alpha * params.tfp * K ** (alpha - 1.0)
            mean_output = (params.tfp * K ** alpha).mean(axis=1)
        r = mpk.mean(axis=1)
        rates = (mpk - theta) / gamma
        growth = (rates * C).sum(axis=1) / C.sum(axis=1)
    return Trajectory(
        times=times,
        holdings=K,
        consumption=C,
        mean_holding=mean_holding,
        mean_output=mean_output,
        interest=r,
        growth=growth,
        gini=np.array([gini(K[i]) for i in range(n)]),
        cv=np.array([coefficient_of_variation(K[i]) for i in range(n)]),
        ratio_max_min=np.array([ratio_max_min(K[i]) for i in range(n)]),
        regime=regime,
        converged=converged,
        note=note,
    )


# ---------------------------------------------------------------------------
# autarky, fixed technology: independent household saddles


def _shoot_autarky_exog(dist0, params, regime, config):
    k0 = dist0.as_array()
    target = ramsey_steady_state(params, regime)
    k_star, c_star = target.holding_star, target.consumption_star
    T = _default_horizon_exog(params, k0, config)
    c0 = np.array([
        _shoot_point_scalar(float(k), params, config, T) for k in k0
    ])
    band = config.terminal_band

    def arrived(k, c):
        return bool(
            np.max(np.abs(k - k_star)) <= band * k_star
            and np.max(np.abs(c - c_star)) <= band * c_star
        )

    times, K, C, stopped, feasible = _integrate_vector(
        k0, c0, params, regime, config.dt, int(round(T / config.dt)),
        config.record_stride, stop_fn=arrived,
    )
    if not stopped:
        raise ShootingFailed(
            f"no joint arrival in the terminal band by horizon {T} "
            f"(feasible={feasible}); widen the horizon or the band"
        )
    return _ramsey_trajectory(times, K, C, params, regime, converged=True)


# ---------------------------------------------------------------------------
# market regimes: aggregate saddle plus linear household decomposition


def _aggregate_scales(params: EconomyParams, regime: Regime):
    """(f, f', wage) closures for the aggregate per-capita technology."""
    alpha = params.alpha
    if regime.is_endogenous:
        m = params.ak_scale()
        return (lambda k: m * k), (lambda k: alpha * m), (lambda k: (1.0 - alpha) * m * k)
    A = params.tfp
    return (
        lambda k: A * k ** alpha,
        lambda k: alpha * A * k ** (alpha - 1.0),
        lambda k: (1.0 - alpha) * A * k ** alpha,
    )


def _integrate_market_aggregate(k0, c0, params, regime, dt, n_steps, stop_fn=None):
    """Jointly integrate the aggregate saddle system and its linear bases.

    State is (k, c, phi, pw, pg): the homogeneous solution phi of the asset
    equation, the wage-funded particular solution pw, and the response pg to
    one unit of initial consumption growing at the common factor c(t)/c(0).
    Household assets then follow by superposition:
    a_i(t) = pw + phi * a_i(0) - c_i(0) * pg.
    """
    f, fp, wage = _aggregate_scales(params, regime)
    theta, gamma = params.theta, params.gamma
    inv_c0 = 1.0 / c0

    def rhs(s):
        k, c, phi, pw, pg = s
        r = fp(k)
        return (
            f(k) - c,
            c * (r - theta) / gamma,
            r * phi,
            r * pw + wage(k),
            r * pg + c * inv_c0,
        )

    s = (k0, c0, 1.0, 0.0, 0.0)
    rows = [s]
    times = [0.0]
    stopped = False
    for i in range(1, n_steps + 1):
        d1 = rhs(s)
        s2 = tuple(s[j] + 0.5 * dt * d1[j] for j in range(5))
        if s2[0] <= 0.0 or s2[1] <= 0.0:
            break
        d2 = rhs(s2)
        s3 = tuple(s[j] + 0.5 * dt * d2[j] for j in range(5))
        if s3[0] <= 0.0 or s3[1] <= 0.0:
            break
        d3 = rhs(s3)
        s4 = tuple(s[j] + dt * d3[j] for j in range(5))
        if s4[0] <= 0.0 or s4[1] <= 0.0:
            break
        d4 = rhs(s4)
        s = tuple(
            s[j] + (dt / 6.0) * (d1[j] + 2.0 * d2[j] + 2.0 * d3[j] + d4[j])
            for j in range(5)
        )
        if s[0] <= 0.0 or s[1] <= 0.0:
            break
        times.append(i * dt)
        rows.append(s)
        if stop_fn is not None and stop_fn(s[0], s[1]):
            stopped = True
            break
    arr = np.asarray(rows)
    return np.asarray(times), arr, stopped


def _shoot_ray_scalar(k0: float, params: EconomyParams, config: ShootingConfig,
                      T: float) -> float:
    """Bisect aggregate c(0) onto the balanced ray of the spillover economy.

    The consumption/capital ratio drifts monotonically away from its unique
    admissible value, so shots classify by the direction of that drift.
    """
    m = params.ak_scale()
    g = (params.alpha * m - params.theta) / params.gamma
    mu = m - g

    def rhs(kk, cc):
        return m * kk - cc, cc * g

    def classify(c0):
        k, c = k0, c0
        n = int(round(T / config.dt))
        dt = config.dt
        for _ in range(n):
            dk1, dc1 = rhs(k, c)
            k2, c2 = k + 0.5 * dt * dk1, c + 0.5 * dt * dc1
            if k2 <= 0.0:
                return _HIGH
            dk2, dc2 = rhs(k2, c2)
            k3, c3 = k + 0.5 * dt * dk2, c + 0.5 * dt * dc2
            if k3 <= 0.0:
                return _HIGH
            dk3, dc3 = rhs(k3, c3)
            k4, c4 = k + dt * dk3, c + dt * dc3
            if k4 <= 0.0:
                return _HIGH
            dk4, dc4 = rhs(k4, c4)
            k += dt * (dk1 + 2.0 * dk2 + 2.0 * dk3 + dk4) / 6.0
            c += dt * (dc1 + 2.0 * dc2 + 2.0 * dc3 + dc4) / 6.0
            if k <= 0.0:
                return _HIGH
            x = c / k
            if x - mu > 0.5 * mu:
                return _HIGH
            if mu - x > 0.5 * mu:
                return _LOW
        return _LOW if c / k < mu else _HIGH

    lo, hi = 0.25 * mu * k0, 1.75 * mu * k0
    if classify(lo) != _LOW or classify(hi) != _HIGH:
        raise ShootingFailed("could not bracket the balanced-ray consumption")
    for _ in range(config.max_iterations):
        if hi - lo <= config.bisection_tol * hi:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if classify(mid) == _LOW:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _default_horizon_ray(params: EconomyParams, config: ShootingConfig) -> float:
    """Drift-safe horizon for ray-targeted shooting.

    The ratio instability grows at rate mu; float64 resolution of the initial
    consumption bounds how long the recorded path can hug the ray.
    """
    if config.horizon is not None:
        return config.horizon
    m = params.ak_scale()
    g = (params.alpha * m - params.theta) / params.gamma
    mu = m - g
    return max(2.0, math.log(config.terminal_band / (256.0 * _EPS)) / mu)


def _shoot_market(dist0, params, regime, config):
    a0 = dist0.as_array()
    kbar0 = float(a0.mean())
    if regime.is_endogenous:
        T = _default_horizon_ray(params, config)
        cbar0 = _shoot_ray_scalar(kbar0, params, config, T)
        m = params.ak_scale()
        g = (params.alpha * m - params.theta) / params.gamma
        mu = m - g

        def agg_stop(k, c):
            return False  # ride the ray for the whole drift-safe horizon

        band_ok = lambda k, c: abs(c / k - mu) <= config.terminal_band * mu
    else:
        target = ramsey_steady_state(params, regime)
        k_star, c_star = target.holding_star, target.consumption_star
        T = _default_horizon_exog(params, kbar0, config)
        cbar0 = _shoot_point_scalar(kbar0, params, config, T)
        band = config.terminal_band

        def agg_stop(k, c):
            return abs(k - k_star) <= band * k_star and abs(c - c_star) <= band * c_star

        band_ok = agg_stop

    n_steps = int(round(T / config.dt))
    times, rows, stopped = _integrate_market_aggregate(
        kbar0, cbar0, params, regime, config.dt, n_steps, stop_fn=agg_stop
    )
    k_path, c_path = rows[:, 0], rows[:, 1]
    if not band_ok(k_path[-1], c_path[-1]):
        raise ShootingFailed(
            f"aggregate path missed the terminal band by horizon {T}"
        )
    aggregate = _ramsey_trajectory(
        times, k_path[:, None], c_path[:, None], params, regime, converged=True,
        note="aggregate (per-capita) path",
    )
    if len(dist0) == 1:
        return aggregate
    return market_decompose(aggregate, dist0, params, regime)


def market_decompose(aggregate: Trajectory, a0: WealthDistribution,
                     params: EconomyParams, regime: Regime) -> Trajectory:
    """Expand an aggregate market path into household asset paths.

    Each household consumes its own initial level grown by the common factor;
    its assets obey the linear equation da = wage + r a - c. Working in
    deviations from the aggregate, a_i = kbar + phi * (a_i0 - kbar0) -
    (c_i0 - cbar0) * pg, the initial consumption gap of each household is
    bisected so the deviation stays bounded (its growing mode is killed at
    the end of the path). Deviations are mean-zero by construction, so the
    household paths must aggregate back to the mean path; failure raises
    DecompositionInconsistent.
    """
    validate_params(params, regime)
    if regime.is_olg or not regime.is_market:
        raise WrongRegime("market_decompose requires a Ramsey capital-market regime")
    if len(aggregate.times) < 2:
        raise DecompositionInconsistent("aggregate trajectory too short")
    a = a0.as_array()
    kbar0 = float(aggregate.mean_holding[0])
    if abs(float(a.mean()) - kbar0) > 1e-10 * max(1.0, kbar0):
        raise DecompositionInconsistent(
            "mean of household assets does not match the aggregate initial capital"
        )
    dt = float(aggregate.times[1] - aggregate.times[0])
    steps = np.diff(aggregate.times)
    if not np.allclose(steps, dt, rtol=0.0, atol=1e-12 * max(dt, 1.0)):
        raise DecompositionInconsistent("aggregate trajectory must use a uniform grid")
    cbar0 = float(aggregate.consumption[0, 0])
    n_steps = len(aggregate.times) - 1

    times, rows, _ = _integrate_market_aggregate(
        kbar0, cbar0, params, regime, dt, n_steps
    )
    if times.shape[0] != aggregate.times.shape[0]:
        raise DecompositionInconsistent(
            "could not re-integrate the aggregate path on its own grid"
        )
    k_path, c_path, phi, pw, pg = (rows[:, j] for j in range(5))
    growth_factor = c_path / cbar0

    _, fp, _ = _aggregate_scales(params, regime)
    r_T = fp(k_path[-1])
    if regime.is_endogenous:
        g_T = (params.alpha * params.ak_scale() - params.theta) / params.gamma
    else:
        g_T = 0.0
    G_T, phi_T, pg_T = growth_factor[-1], phi[-1], pg[-1]
    slope = G_T + (r_T - g_T) * pg_T  # d residual / d consumption gap, > 0

    def deviation_residual(da_i0: float, dc_i0: float) -> float:
        # terminal drift of the deviation beyond common growth; zero kills
        # the explosive mode of a_i - kbar
        da_T = phi_T * da_i0 - dc_i0 * pg_T
        return dc_i0 * G_T - (r_T - g_T) * da_T

    dc = np.empty_like(a)
    for i, a_i0 in enumerate(a):
        da_i0 = a_i0 - kbar0
        if da_i0 == 0.0:
            dc[i] = 0.0
            continue
        width = max(abs((r_T - g_T) * phi_T * da_i0) / slope, 1e-12 * cbar0)
        lo, hi = -2.0 * width, 2.0 * width
        expansions = 0
        while deviation_residual(da_i0, lo) > 0.0 or deviation_residual(
                da_i0, hi) < 0.0:
            lo *= 2.0
            hi *= 2.0
            expansions += 1
            if expansions > 60:
                raise ShootingFailed("household consumption bracket exploded")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if deviation_residual(da_i0, mid) < 0.0:
                lo = mid
            else:
                hi = mid
        dc[i] = 0.5 * (lo + hi)

    c0 = cbar0 + dc
    if np.any(c0 <= 0.0):
        raise StateLeftDomain(
            "a household initial consumption left the positive domain"
        )
    assets = k_path[:, None] + np.outer(phi, a - kbar0) - np.outer(pg, dc)
    consumption = np.outer(growth_factor, c0)
    if np.any(assets <= 0.0):
        raise StateLeftDomain(
            "a household asset path left the positive domain during decomposition"
        )
    agg_err = np.max(np.abs(assets.mean(axis=1) - k_path) / np.abs(k_path))
    if agg_err > 1e-8:
        raise DecompositionInconsistent(
            f"household paths do not aggregate to the mean path "
            f"(max relative error {agg_err:.3e})"
        )
    return _ramsey_trajectory(
        times, assets, consumption, params, regime, converged=True,
        note="household decomposition of the aggregate path",
    )


# ---------------------------------------------------------------------------
# autarky with spillover: multidimensional shooting by damped Newton


def _asym_rates(params: EconomyParams):
    """Linearised rates around the equalised balanced ray.

    Returns (mu, lam_plus, lam_minus, slope) where x' = a11 x - mu u and
    u' = -q x describe a household's relative capital x and consumption u,
    and slope maps x onto the stable manifold: u = slope * x.
    """
    m = params.ak_scale()
    alpha, gamma, theta = params.alpha, params.gamma, params.theta
    g = (alpha * m - theta) / gamma
    mu = m - g
    a11 = m * alpha - g
    q = alpha * m * (1.0 - alpha) / gamma
    disc = math.sqrt(a11 * a11 + 4.0 * mu * q)
    lam_plus = 0.5 * (a11 + disc)
    lam_minus = 0.5 * (a11 - disc)
    slope = (a11 - lam_minus) / mu
    return mu, lam_plus, lam_minus, slope


def _integrate_endog_autarky(k0, c0, params, dt, n_steps):
    """Fast fixed-grid integration; returns terminal (k, c) or None on exit.

    Pure-float inner loop: this sits inside the Newton continuation's
    finite-difference Jacobian, where numpy overhead on tiny vectors
    dominates runtime.
    """
    m = params.ak_scale()
    alpha, theta, gamma = params.alpha, params.theta, params.gamma
    one_minus_alpha = 1.0 - alpha
    inv_gamma = 1.0 / gamma
    L = len(k0)
    inv_L = 1.0 / L
    k = [float(x) for x in k0]
    c = [float(x) for x in c0]

    def rhs(kk, cc):
        # mpk_i = alpha * y_i / k_i reuses the output power
        kb_term = m * (sum(kk) * inv_L) ** one_minus_alpha
        dk = [0.0] * L
        dc = [0.0] * L
        for i in range(L):
            y = kb_term * kk[i] ** alpha
            dk[i] = y - cc[i]
            dc[i] = (alpha * y / kk[i] - theta) * inv_gamma * cc[i]
        return dk, dc

    half = 0.5 * dt
    sixth = dt / 6.0
    for _ in range(n_steps):
        dk1, dc1 = rhs(k, c)
        k2 = [k[i] + half * dk1[i] for i in range(L)]
        c2 = [c[i] + half * dc1[i] for i in range(L)]
        if min(k2) <= 0.0 or min(c2) <= 0.0:
            return None
        dk2, dc2 = rhs(k2, c2)
        k3 = [k[i] + half * dk2[i] for i in range(L)]
        c3 = [c[i] + half * dc2[i] for i in range(L)]
        if min(k3) <= 0.0 or min(c3) <= 0.0:
            return None
        dk3, dc3 = rhs(k3, c3)
        k4 = [k[i] + dt * dk3[i] for i in range(L)]
        c4 = [c[i] + dt * dc3[i] for i in range(L)]
        if min(k4) <= 0.0 or min(c4) <= 0.0:
            return None
        dk4, dc4 = rhs(k4, c4)
        k = [k[i] + sixth * (dk1[i] + 2.0 * (dk2[i] + dk3[i]) + dk4[i])
             for i in range(L)]
        c = [c[i] + sixth * (dc1[i] + 2.0 * (dc2[i] + dc3[i]) + dc4[i])
             for i in range(L)]
        if min(k) <= 0.0 or min(c) <= 0.0:
            return None
    return np.asarray(k), np.asarray(c)


def _ray_residual(c0, k0, params, mu, dt, T):
    out = _integrate_endog_autarky(k0, c0, params, dt, int(round(T / dt)))
    if out is None:
        return None
    k, c = out
    kbar = k.mean()
    res = (k[:-1] / kbar - 1.0).tolist()
    res.append(c.mean() / (mu * kbar) - 1.0)
    return np.asarray(res)


def _newton_stage(c0, k0, params, mu, dt, T, tol, max_iters=12):
    """Damped Newton on initial consumption; residual is ray distance at T."""
    L = c0.size
    best = c0
    nr = np.inf
    for _ in range(max_iters):
        r = _ray_residual(best, k0, params, mu, dt, T)
        if r is None:
            return None, np.inf
        nr = float(np.max(np.abs(r)))
        if nr < tol:
            return best, nr
        J = np.empty((L, L))
        for j in range(L):
            h = 1e-7 * best[j]
            cp = best.copy()
            cp[j] += h
            rp = _ray_residual(cp, k0, params, mu, dt, T)
            if rp is None:
                return best, nr
            J[:, j] = (rp - r) / h
        try:
            step = np.linalg.solve(J, r)
        except np.linalg.LinAlgError:
            return best, nr
        lam = 1.0
        improved = False
        while lam > 1e-8:
            cand = best - lam * step
            if np.all(cand > 0.0):
                rc = _ray_residual(cand, k0, params, mu, dt, T)
                if rc is not None and float(np.max(np.abs(rc))) < nr:
                    best = cand
                    improved = True
                    break
            lam *= 0.5
        if not improved:
            return best, nr
    return best, nr


def _sweep_stage(c0, k0, params, mu, dt, T, tol, sweeps=8):
    """Coordinate-wise bisection fallback for a stalled Newton stage.

    Household i's relative-capital residual falls as its own consumption
    rises; the aggregate ratio residual rises with the last household's
    consumption. Each sweep bisects every coordinate once on its residual.
    """
    L = c0.size
    c = c0.copy()
    for _ in range(sweeps):
        for i in range(L):
            direction = -1.0 if i < L - 1 else 1.0

            def resid_i(ci):
                probe = c.copy()
                probe[i] = ci
                r = _ray_residual(probe, k0, params, mu, dt, T)
                return None if r is None else direction * r[i]

            lo, hi = 0.6 * c[i], 1.4 * c[i]
            r_lo, r_hi = resid_i(lo), resid_i(hi)
            if r_lo is None or r_hi is None or r_lo * r_hi > 0.0:
                continue
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                r_mid = resid_i(mid)
                if r_mid is None:
                    break
                if abs(r_mid) < 0.1 * tol or hi - lo < 1e-14 * hi:
                    lo = hi = mid
                    break
                if (r_lo < 0.0) == (r_mid < 0.0):
                    lo, r_lo = mid, r_mid
                else:
                    hi, r_hi = mid, r_mid
            c[i] = 0.5 * (lo + hi)
        r = _ray_residual(c, k0, params, mu, dt, T)
        if r is not None and float(np.max(np.abs(r))) < tol:
            break
    return c


def _shoot_autarky_endog(dist0, params, regime, config):
    k0 = dist0.as_array()
    mu, lam_plus, lam_minus, slope = _asym_rates(params)
    kbar0 = float(k0.mean())
    x0 = k0 / kbar0 - 1.0
    c0 = mu * kbar0 * (1.0 + slope * x0)

    rate = max(mu, lam_plus)
    dev0 = float(np.max(np.abs(x0)))
    if config.horizon is not None:
        T_need = config.horizon
    elif dev0 <= config.terminal_band:
        T_need = max(4.0 / rate, 2.0)
    else:
        T_need = math.log(dev0 / (0.5 * config.terminal_band)) / abs(lam_minus)
    T_float = math.log(0.05 / _EPS) / rate  # residual floor hits float64 here
    stage_tol = 1e-8

    T = min(2.5 / rate, T_need)
    dT = 1.5 / rate
    solved_T = 0.0
    used_fallback = False
    for _ in range(config.max_iterations):
        cand, nr = _newton_stage(c0, k0, params, mu, config.dt, T, tol=1e-10)
        if (cand is None or nr > stage_tol) and solved_T == 0.0 and not used_fallback:
            # initial guess not good enough for Newton: refine by sweeps once
            c0 = _sweep_stage(c0, k0, params, mu, config.dt, T, tol=1e-6)
            used_fallback = True
            continue
        if cand is None or nr > stage_tol:
            if dT > 0.2 / rate and solved_T > 0.0:
                T = min(solved_T + 0.5 * dT, T_need)
                dT *= 0.5
                continue
            break
        c0 = cand
        solved_T = T
        if T >= min(T_need, T_float):
            break
        dT *= 1.3
        T = min(T + dT, T_need, T_float)
    if solved_T == 0.0:
        raise ShootingFailed(
            "multidimensional shooting never produced an on-ray shot"
        )

    band = config.terminal_band

    def on_ray(k, c):
        kbar = k.sum() / k.size
        dev = np.max(np.abs(k / kbar - 1.0))
        agg = abs(c.sum() / c.size / (mu * kbar) - 1.0)
        return bool(max(dev, agg) <= band)

    horizon = max(solved_T, min(T_need, T_float))
    times, K, C, stopped, feasible = _integrate_vector(
        k0, c0, params, regime, config.dt, int(round(horizon / config.dt)),
        config.record_stride, stop_fn=on_ray,
    )
    if not stopped and not on_ray(K[-1], C[-1]):
        raise ShootingFailed(
            f"path did not reach the equalised ray band {band} by t={horizon}; "
            f"float64 limits this regime to bands above "
            f"~{dev0 * math.exp(lam_minus * T_float):.1e}"
        )
    return _ramsey_trajectory(times, K, C, params, regime, converged=True)


def shoot_saddle_path(dist0: WealthDistribution, params: EconomyParams,
                      regime: Regime,
                      config: ShootingConfig | None = None) -> Trajectory:
    """Find the saddle path from the given holdings and record it.

    Consumption levels at time zero are solved so the path enters the
    terminal band around the steady state (fixed technology) or the balanced
    growth ray (spillover technology) within the horizon; the recorded
    trajectory stops at arrival.
    """
    validate_params(params, regime)
    if regime.is_olg:
        raise WrongRegime("shoot_saddle_path requires a Ramsey regime")
    if config is None:
        config = ShootingConfig()
    if regime.is_market:
        return _shoot_market(dist0, params, regime, config)
    if regime.is_endogenous:
        return _shoot_autarky_endog(dist0, params, regime, config)
    return _shoot_autarky_exog(dist0, params, regime, config)
