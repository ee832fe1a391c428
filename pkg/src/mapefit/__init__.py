"""Linear regression under MSE, MAE, and MAPE losses.

Percentage-error fitting is weighted median regression: the absolute
deviations are weighted by 1/|y_i| and minimized exactly with a dense
two-phase simplex solver. The package also evaluates covering-number,
uniform-deviation, and exponential-series bound formulas, and checks the
percentage-vs-absolute shattering inequality on finite model classes.
"""

from .bounds import (
    BoundInputs,
    ConsistencyReport,
    FiniteModelClass,
    ProbePoint,
    SeriesTailReport,
    consistency_condition,
    envelope_bound,
    k_series_tail_report,
    k_term,
    log_k_term,
    log_ulln_bound,
    log_vc_covering_bound,
    scale_thresholds_by_abs_y,
    shattering_vc,
    ulln_bound,
    vc_covering_bound,
)
from .cli import BenchResult, run_bench
from .data import Dataset, DatasetSummary, load_csv, summarize, write_csv
from .errors import BoundInputError, DataError, FitError, MapefitError
from .fitting import (
    InstanceWeights,
    LinearModel,
    fit,
    fit_ols,
    fit_weighted_lad,
    inverse_abs_target_weights,
    predict,
    unit_weights,
    weighted_absolute_objective,
)
from .losses import LossKind, RiskReport, empirical_risk, loss, pointwise_losses, risk_report
from .lp import (
    DEFAULT_CONFIG,
    LPSolution,
    LPStatus,
    SimplexConfig,
    StandardFormLP,
    enumerate_vertices_oracle,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "BenchResult",
    "BoundInputError",
    "BoundInputs",
    "ConsistencyReport",
    "DEFAULT_CONFIG",
    "DataError",
    "Dataset",
    "DatasetSummary",
    "FiniteModelClass",
    "FitError",
    "InstanceWeights",
    "LPSolution",
    "LPStatus",
    "LinearModel",
    "LossKind",
    "MapefitError",
    "ProbePoint",
    "RiskReport",
    "SeriesTailReport",
    "SimplexConfig",
    "StandardFormLP",
    "consistency_condition",
    "empirical_risk",
    "enumerate_vertices_oracle",
    "envelope_bound",
    "fit",
    "fit_ols",
    "fit_weighted_lad",
    "inverse_abs_target_weights",
    "k_series_tail_report",
    "k_term",
    "load_csv",
    "log_k_term",
    "log_ulln_bound",
    "log_vc_covering_bound",
    "loss",
    "pointwise_losses",
    "predict",
    "risk_report",
    "run_bench",
    "scale_thresholds_by_abs_y",
    "shattering_vc",
    "solve",
    "summarize",
    "ulln_bound",
    "unit_weights",
    "vc_covering_bound",
    "weighted_absolute_objective",
    "write_csv",
]
