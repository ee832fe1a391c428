"""Linear-model fitting under squared, absolute, and percentage losses.

Least squares is solved in closed form by orthogonal factorization of the
intercept-augmented design matrix. Absolute-error fitting, optionally
instance-weighted, is encoded as a standard-form LP (split coefficients
plus positive/negative residual parts) and handed to the simplex engine;
percentage-error fitting is the same program with weights 1/|y_i|. An
intercept is always included.

Absolute-deviation optima need not be unique: only the optimal objective
value is guaranteed, not a canonical coefficient vector.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import DataError, FitError
from .losses import LossKind
from .lp import LPStatus, StandardFormLP, solve


@dataclass(frozen=True)
class LinearModel:
    """Affine predictor x -> intercept + coefficients . x."""

    coefficients: np.ndarray
    intercept: float
    loss_trained_on: LossKind

    def __post_init__(self):
        coefs = np.asarray(self.coefficients, dtype=float).ravel()
        if not (np.all(np.isfinite(coefs)) and math.isfinite(self.intercept)):
            raise FitError("model has non-finite parameters")
        coefs = coefs.copy()
        coefs.flags.writeable = False
        object.__setattr__(self, "coefficients", coefs)
        object.__setattr__(self, "intercept", float(self.intercept))

    def predict(self, features) -> np.ndarray:
        return predict(self, features)

    def to_json_dict(self) -> dict:
        return {
            "coefficients": [float(v) for v in self.coefficients],
            "intercept": self.intercept,
            "loss": self.loss_trained_on.value,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, d: dict) -> "LinearModel":
        try:
            return cls(
                coefficients=np.asarray(d["coefficients"], dtype=float),
                intercept=float(d["intercept"]),
                loss_trained_on=LossKind.from_name(d["loss"]),
            )
        except (KeyError, TypeError) as exc:
            raise DataError(f"malformed model JSON: {exc}") from None


@dataclass(frozen=True)
class InstanceWeights:
    """Strictly positive, finite per-row weights."""

    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float).ravel()
        if w.size == 0:
            raise DataError("empty weight vector")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise DataError("instance weights must be finite and > 0")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "w", w)


def unit_weights(n: int) -> InstanceWeights:
    return InstanceWeights(np.ones(n))


def inverse_abs_target_weights(targets) -> InstanceWeights:
    """Weights 1/|y_i|; rejects zero targets, naming the offending rows."""
    y = np.asarray(targets, dtype=float).ravel()
    zero_rows = [i + 1 for i in np.flatnonzero(y == 0.0)]
    if zero_rows:
        raise FitError(
            "percentage-error fit undefined: target is 0 at "
            f"row{'s' if len(zero_rows) > 1 else ''} {', '.join(map(str, zero_rows))}"
        )
    return InstanceWeights(1.0 / np.abs(y))


def _augmented(ds: Dataset) -> np.ndarray:
    return np.column_stack([np.ones(ds.n_rows), ds.features])


def fit_ols(ds: Dataset) -> LinearModel:
    """Closed-form least squares on the intercept-augmented design matrix."""
    n, d = ds.n_rows, ds.n_features
    if n < d + 1:
        raise FitError(f"least squares needs at least {d + 1} rows, got {n}")
    xa = _augmented(ds)
    beta, _, rank, _ = np.linalg.lstsq(xa, ds.target, rcond=None)
    if rank < d + 1:
        raise FitError(
            f"collinear features: augmented design matrix has rank {rank} < {d + 1}"
        )
    return LinearModel(
        coefficients=beta[1:], intercept=float(beta[0]), loss_trained_on=LossKind.MSE
    )


def fit_weighted_lad(ds: Dataset, weights: InstanceWeights) -> LinearModel:
    """Minimize sum_i w_i |intercept + coef.x_i - y_i| via the simplex engine.

    LP encoding: split the intercept-augmented coefficient vector into
    nonnegative parts bp - bm and each residual y_i - prediction_i into
    u_i - v_i; minimize sum w_i (u_i + v_i) subject to
    Xa (bp - bm) + u - v = y. The 1/N factor is dropped inside the LP and
    reapplied by report code.
    """
    n, d = ds.n_rows, ds.n_features
    if weights.w.size != n:
        raise DataError(f"{weights.w.size} weights for {n} rows")
    nb = d + 1
    xa = _augmented(ds)
    objective = np.concatenate([np.zeros(2 * nb), weights.w, weights.w])
    eye = np.eye(n)
    constraint = np.hstack([xa, -xa, eye, -eye])
    lp = StandardFormLP(objective=objective, constraint_matrix=constraint, rhs=ds.target)
    sol = solve(lp)
    if sol.status is not LPStatus.OPTIMAL:
        # the LAD program is always feasible and bounded below by 0
        raise FitError(
            f"internal error: absolute-deviation LP reported {sol.status.value}"
        )
    beta = sol.x[:nb] - sol.x[nb : 2 * nb]
    return LinearModel(
        coefficients=beta[1:], intercept=float(beta[0]), loss_trained_on=LossKind.MAE
    )


def fit(ds: Dataset, kind: LossKind) -> LinearModel:
    """Empirical-risk-minimizing affine fit under the requested loss.

    MSE dispatches to least squares, MAE to unit-weight absolute fitting,
    and MAPE to absolute fitting with weights 1/|y_i| (which requires all
    targets nonzero).
    """
    if kind is LossKind.MSE:
        return fit_ols(ds)
    if kind is LossKind.MAE:
        model = fit_weighted_lad(ds, unit_weights(ds.n_rows))
        return LinearModel(model.coefficients, model.intercept, LossKind.MAE)
    model = fit_weighted_lad(ds, inverse_abs_target_weights(ds.target))
    return LinearModel(model.coefficients, model.intercept, LossKind.MAPE)


def predict(model: LinearModel, features) -> np.ndarray:
    """Row-wise intercept + coefficients . x."""
    x = np.asarray(features, dtype=float)
    if x.ndim != 2:
        raise DataError("features must be a 2-D matrix")
    d = model.coefficients.shape[0]
    if x.shape[1] != d:
        raise DataError(f"model expects {d} feature columns, got {x.shape[1]}")
    return x @ model.coefficients + model.intercept


def weighted_absolute_objective(predictions, targets, weights: InstanceWeights) -> float:
    """Mean weighted absolute deviation, the quantity the LAD fits minimize."""
    p = np.asarray(predictions, dtype=float).ravel()
    y = np.asarray(targets, dtype=float).ravel()
    if p.shape != y.shape or p.shape != weights.w.shape:
        raise DataError("predictions, targets, and weights must share a length")
    return float(np.mean(weights.w * np.abs(p - y)))
