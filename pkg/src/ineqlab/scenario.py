"""Scenario documents: a flat key-value format, runner, and CSV emission.

A scenario is a UTF-8 text document of ``key = value`` lines with dotted
section keys and JSON-compatible values (bare words are accepted as strings
for convenience). Example::

    name = "converge-from-dispersion"
    regime.family = olg
    regime.market = autarky
    regime.technology = exogenous
    params.tfp = 1.0
    params.alpha = 0.5
    params.theta = 0.0
    initial_distribution = [0.01, 1.0]
    horizon.max_generations = 200
    outputs = [csv, summary]

Running a scenario writes ``<name>_trajectory.csv`` and ``<name>_metrics.csv``
(RFC-4180, CRLF line endings) and optionally a minimal SVG chart; identical
configs produce byte-identical files.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, fields
from pathlib import Path

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
from .errors import (
    GrowthConditionViolated,
    IneqLabError,
    OutOfRange,
    ParseError,
    ValidationError,
)
from .olg import olg_simulate, olg_steady_state
from .ramsey import ShootingConfig, ramsey_steady_state, shoot_saddle_path
from .svgplot import line_chart

OUTPUT_KINDS = ("csv", "svg", "summary")


@dataclass(frozen=True)
class ScenarioConfig:
    """A fully validated scenario: regime, parameters, start, horizon, outputs."""

    name: str
    regime: Regime
    params: EconomyParams
    initial_distribution: tuple[float, ...]
    max_generations: int = 10000
    stop_tol: float = 1e-9
    shooting: ShootingConfig = ShootingConfig()
    outputs: frozenset[str] = frozenset({"csv", "summary"})


_FAMILY = {"olg": Family.OLG, "ramsey": Family.RAMSEY}
_MARKET = {"market": Market.CAPITAL_MARKET, "autarky": Market.AUTARKY}
_TECH = {"exogenous": Technology.EXOGENOUS, "endogenous_ak": Technology.ENDOGENOUS_AK}

_KNOWN_KEYS = {
    "name",
    "regime.family",
    "regime.market",
    "regime.technology",
    "params.tfp",
    "params.alpha",
    "params.theta",
    "params.gamma",
    "params.population",
    "initial_distribution",
    "horizon.max_generations",
    "horizon.stop_tol",
    "horizon.time",
    "horizon.dt",
    "horizon.bisection_tol",
    "horizon.max_iterations",
    "horizon.terminal_band",
    "horizon.record_stride",
    "outputs",
}


def _parse_value(token: str, line_no: int):
    token = token.strip()
    if not token:
        raise ParseError(line_no, "missing value")
    try:
        return json.loads(token)
    except json.JSONDecodeError:
        pass
    if token.startswith("[") and token.endswith("]"):
        inner = token[1:-1].strip()
        if not inner:
            return []
        return [_parse_value(item, line_no) for item in inner.split(",")]
    return token  # bare word -> string


def parse_scenario(text: str) -> ScenarioConfig:
    """Parse and validate a scenario document.

    Raises ParseError for malformed lines and ValidationError (naming the
    offending key) for unknown keys, bad types, or violated model bounds.
    """
    raw: dict[str, object] = {}
    lines: dict[str, int] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ParseError(line_no, f"expected 'key = value', got {stripped!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key not in _KNOWN_KEYS:
            raise ValidationError(key, f"line {line_no}: unknown key {key!r}")
        if key in raw:
            raise ParseError(line_no, f"duplicate key {key!r}")
        raw[key] = _parse_value(value, line_no)
        lines[key] = line_no

    def need(key: str):
        if key not in raw:
            raise ValidationError(key, f"missing required key {key!r}")
        return raw[key]

    def pick(key: str, default):
        return raw.get(key, default)

    def as_number(key: str, value) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValidationError(key, f"{key} must be a number, got {value!r}")
        return float(value)

    def as_int(key: str, value) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValidationError(key, f"{key} must be an integer, got {value!r}")
        return value

    name = need("name")
    if not isinstance(name, str) or not name:
        raise ValidationError("name", "name must be a nonempty string")

    def enum_of(key: str, table: dict):
        value = need(key)
        if not isinstance(value, str) or value not in table:
            raise ValidationError(
                key, f"{key} must be one of {sorted(table)}, got {value!r}"
            )
        return table[value]

    regime = Regime(
        family=enum_of("regime.family", _FAMILY),
        market=enum_of("regime.market", _MARKET),
        technology=enum_of("regime.technology", _TECH),
    )

    dist_raw = need("initial_distribution")
    if not isinstance(dist_raw, list) or not dist_raw:
        raise ValidationError("initial_distribution", "must be a nonempty list")
    dist = tuple(as_number("initial_distribution", x) for x in dist_raw)

    population = pick("params.population", len(dist))
    params = EconomyParams(
        tfp=as_number("params.tfp", need("params.tfp")),
        alpha=as_number("params.alpha", need("params.alpha")),
        theta=as_number("params.theta", need("params.theta")),
        gamma=as_number("params.gamma", pick("params.gamma", 1.0)),
        population=as_int("params.population", population),
    )
    try:
        validate_params(params, regime)
    except (OutOfRange, GrowthConditionViolated) as exc:
        field = getattr(exc, "field", "params")
        raise ValidationError(field, str(exc)) from exc

    if len(dist) != params.population:
        raise ValidationError(
            "initial_distribution",
            f"length {len(dist)} does not match population {params.population}",
        )
    if any(x <= 0.0 for x in dist):
        raise ValidationError("initial_distribution", "entries must be > 0")

    outputs_raw = pick("outputs", ["csv", "summary"])
    if not isinstance(outputs_raw, list):
        raise ValidationError("outputs", "outputs must be a list")
    for kind in outputs_raw:
        if kind not in OUTPUT_KINDS:
            raise ValidationError("outputs", f"unknown output kind {kind!r}")

    horizon_time = pick("horizon.time", None)
    if horizon_time is not None:
        horizon_time = as_number("horizon.time", horizon_time)
    shooting = ShootingConfig(
        horizon=horizon_time,
        dt=as_number("horizon.dt", pick("horizon.dt", 1e-2)),
        bisection_tol=as_number(
            "horizon.bisection_tol", pick("horizon.bisection_tol", 1e-15)
        ),
        max_iterations=as_int(
            "horizon.max_iterations", pick("horizon.max_iterations", 200)
        ),
        terminal_band=as_number(
            "horizon.terminal_band", pick("horizon.terminal_band", 1e-4)
        ),
        record_stride=as_int(
            "horizon.record_stride", pick("horizon.record_stride", 1)
        ),
    )
    return ScenarioConfig(
        name=name,
        regime=regime,
        params=params,
        initial_distribution=dist,
        max_generations=as_int(
            "horizon.max_generations", pick("horizon.max_generations", 10000)
        ),
        stop_tol=as_number("horizon.stop_tol", pick("horizon.stop_tol", 1e-9)),
        shooting=shooting,
        outputs=frozenset(outputs_raw),
    )


def render_scenario(config: ScenarioConfig) -> str:
    """Canonical text form; parse_scenario(render_scenario(c)) == c."""
    enum_name = {v: k for k, v in _FAMILY.items()}
    market_name = {v: k for k, v in _MARKET.items()}
    tech_name = {v: k for k, v in _TECH.items()}
    sc = config.shooting
    pairs = [
        ("name", json.dumps(config.name)),
        ("regime.family", enum_name[config.regime.family]),
        ("regime.market", market_name[config.regime.market]),
        ("regime.technology", tech_name[config.regime.technology]),
        ("params.tfp", json.dumps(config.params.tfp)),
        ("params.alpha", json.dumps(config.params.alpha)),
        ("params.theta", json.dumps(config.params.theta)),
        ("params.gamma", json.dumps(config.params.gamma)),
        ("params.population", json.dumps(config.params.population)),
        ("initial_distribution", json.dumps(list(config.initial_distribution))),
        ("horizon.max_generations", json.dumps(config.max_generations)),
        ("horizon.stop_tol", json.dumps(config.stop_tol)),
        ("horizon.time", json.dumps(sc.horizon)),
        ("horizon.dt", json.dumps(sc.dt)),
        ("horizon.bisection_tol", json.dumps(sc.bisection_tol)),
        ("horizon.max_iterations", json.dumps(sc.max_iterations)),
        ("horizon.terminal_band", json.dumps(sc.terminal_band)),
        ("horizon.record_stride", json.dumps(sc.record_stride)),
        ("outputs", json.dumps(sorted(config.outputs))),
    ]
    return "\n".join(f"{k} = {v}" for k, v in pairs) + "\n"


# ---------------------------------------------------------------------------
# running


def _fmt(x: float) -> str:
    return repr(float(x))


def _atomic_write(path: Path, data: str):
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _per_household_output(traj: Trajectory, params: EconomyParams,
                          regime: Regime) -> np.ndarray:
    K = traj.holdings
    alpha = params.alpha
    if regime.is_market and not regime.is_olg:
        # market dynasties operate the mean regardless of ownership
        if regime.is_endogenous:
            y = params.ak_scale() * traj.mean_holding
        else:
            y = params.tfp * traj.mean_holding ** alpha
        return np.repeat(y[:, None], K.shape[1], axis=1)
    if regime.is_endogenous:
        m = params.ak_scale()
        return m * traj.mean_holding[:, None] ** (1.0 - alpha) * K ** alpha
    return params.tfp * K ** alpha


TRAJECTORY_COLUMNS = ("t", "household", "holding", "consumption", "output",
                      "r", "g", "gini", "cv", "r_minus_g")
METRICS_COLUMNS = ("t", "gini", "cv", "ratio_max_min", "r", "g", "r_minus_g")


def trajectory_csv_text(traj: Trajectory, params: EconomyParams,
                        regime: Regime) -> str:
    y = _per_household_output(traj, params, regime)
    rows = [",".join(TRAJECTORY_COLUMNS)]
    L = traj.population
    for i in range(len(traj)):
        t = _fmt(traj.times[i])
        for h in range(L):
            rows.append(",".join([
                t, str(h), _fmt(traj.holdings[i, h]), _fmt(traj.consumption[i, h]),
                _fmt(y[i, h]), "", "", "", "", "",
            ]))
        rows.append(",".join([
            t, "agg", _fmt(traj.mean_holding[i]),
            _fmt(traj.consumption[i].mean()), _fmt(traj.mean_output[i]),
            _fmt(traj.interest[i]), _fmt(traj.growth[i]), _fmt(traj.gini[i]),
            _fmt(traj.cv[i]), _fmt(traj.interest[i] - traj.growth[i]),
        ]))
    return "\r\n".join(rows) + "\r\n"


def metrics_csv_text(traj: Trajectory) -> str:
    rows = [",".join(METRICS_COLUMNS)]
    for i in range(len(traj)):
        rows.append(",".join([
            _fmt(traj.times[i]), _fmt(traj.gini[i]), _fmt(traj.cv[i]),
            _fmt(traj.ratio_max_min[i]), _fmt(traj.interest[i]),
            _fmt(traj.growth[i]), _fmt(traj.interest[i] - traj.growth[i]),
        ]))
    return "\r\n".join(rows) + "\r\n"


def _steady_for(config: ScenarioConfig) -> SteadyState:
    if config.regime.is_olg:
        return olg_steady_state(config.params, config.regime)
    return ramsey_steady_state(config.params, config.regime)


def summary_text(config: ScenarioConfig, steady: SteadyState,
                 traj: Trajectory) -> str:
    p = config.params
    lines = [
        f"scenario {config.name}  [case {config.regime.case_label()}]",
        (f"params: tfp={_fmt(p.tfp)} alpha={_fmt(p.alpha)} theta={_fmt(p.theta)} "
         f"gamma={_fmt(p.gamma)} population={p.population}"),
    ]
    if steady.holding_star is not None:
        lines.append(
            f"steady state: holding*={_fmt(steady.holding_star)} "
            f"r*={_fmt(steady.interest_star)} g*={_fmt(steady.growth_star)}"
        )
    else:
        lines.append(
            f"steady state: balanced ray, r*={_fmt(steady.interest_star)} "
            f"g*={_fmt(steady.growth_star)}"
        )
    i = len(traj) - 1
    lines.append(
        f"terminal t={_fmt(traj.times[i])}: mean holding={_fmt(traj.mean_holding[i])} "
        f"gini={_fmt(traj.gini[i])} cv={_fmt(traj.cv[i])}"
    )
    lines.append(
        f"r - g: terminal r={_fmt(traj.interest[i])} g={_fmt(traj.growth[i])} "
        f"r-g={_fmt(traj.interest[i] - traj.growth[i])}"
    )
    lines.append(f"converged: {'yes' if traj.converged else 'NO (' + traj.note + ')'}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RunArtifacts:
    """What run_scenario produced: file paths, summary text, raw objects."""

    trajectory_csv: Path | None
    metrics_csv: Path | None
    svg: Path | None
    summary: str
    trajectory: Trajectory
    steady: SteadyState


def run_scenario(config: ScenarioConfig, out_dir: str | Path = "out",
                 fmt: str | None = None) -> RunArtifacts:
    """Simulate the configured economy and write its artifact bundle.

    ``fmt`` narrows file outputs to "csv", "svg", or "both" (None means
    both); which artifacts exist at all is governed by ``config.outputs``.
    Identical configs produce byte-identical files.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    steady = _steady_for(config)
    dist0 = WealthDistribution(np.asarray(config.initial_distribution))
    if config.regime.is_olg:
        traj = olg_simulate(
            dist0, config.params, config.regime,
            max_generations=config.max_generations, stop_tol=config.stop_tol,
        )
    else:
        traj = shoot_saddle_path(dist0, config.params, config.regime,
                                 config.shooting)

    want_csv = "csv" in config.outputs and fmt in (None, "csv", "both")
    want_svg = "svg" in config.outputs and fmt in (None, "svg", "both")
    traj_path = metrics_path = svg_path = None
    if want_csv:
        traj_path = out / f"{config.name}_trajectory.csv"
        _atomic_write(traj_path, trajectory_csv_text(traj, config.params,
                                                     config.regime))
        metrics_path = out / f"{config.name}_metrics.csv"
        _atomic_write(metrics_path, metrics_csv_text(traj))
    if want_svg:
        svg_path = out / f"{config.name}.svg"
        series = [
            (f"household {h}", traj.times, traj.holdings[:, h])
            for h in range(traj.population)
        ]
        series.append(("mean", traj.times, traj.mean_holding))
        _atomic_write(svg_path, line_chart(
            series, title=f"{config.name} [{config.regime.case_label()}]",
            xlabel="time", ylabel="holding",
        ))
    return RunArtifacts(
        trajectory_csv=traj_path,
        metrics_csv=metrics_path,
        svg=svg_path,
        summary=summary_text(config, steady, traj),
        trajectory=traj,
        steady=steady,
    )
