"""Numerical laboratory for growth-and-inequality benchmark economies.

Eight toy economies (overlapping generations or infinite dynasties, with or
without a capital market, fixed or spillover technology), their solvers and
steady states, inequality metrics, Leontief value-theory theorems, and a CLI
for scenario runs and figure reproduction.
"""

from .core import (
    ALL_REGIMES,
    OLG_AUTARKY_AK,
    OLG_AUTARKY_EXOG,
    OLG_MARKET_AK,
    OLG_MARKET_EXOG,
    POSITIVITY_FLOOR,
    RAMSEY_AUTARKY_AK,
    RAMSEY_AUTARKY_EXOG,
    RAMSEY_MARKET_AK,
    RAMSEY_MARKET_EXOG,
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
from .metrics import (
    MetricsRow,
    RMinusGSeries,
    coefficient_of_variation,
    gini,
    mean_preserving_spread,
    metrics_row,
    r_minus_g_series,
    ratio_max_min,
)
from .olg import (
    CobwebData,
    OlgStepReport,
    cobweb_data,
    olg_mean_map,
    olg_simulate,
    olg_steady_state,
    olg_step,
    ratio_step,
)
from .production import (
    AllocationCheck,
    TechnologyView,
    aggregate_output,
    allocation_output,
    equal_allocation_is_optimal,
    mpk_private,
    mpk_social,
    per_capita_output,
    view_for,
)
from .ramsey import (
    RamseyState,
    ShootingConfig,
    euler_growth,
    market_decompose,
    ramsey_rhs,
    ramsey_steady_state,
    rk4_step,
    shoot_saddle_path,
)
from .scenario import (
    RunArtifacts,
    ScenarioConfig,
    parse_scenario,
    render_scenario,
    run_scenario,
)
from .figures import FIGURE_NAMES, figure
from .value_theory import (
    FmtReport,
    GcetReport,
    LeontiefEconomy,
    SweepReport,
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

from . import errors

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
