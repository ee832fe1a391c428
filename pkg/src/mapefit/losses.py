"""Pointwise losses, empirical risks, and normalized risk reports.

The percentage loss is made total by the conventions a/0 = +inf for a != 0
and 0/0 = 1, so no input raises; infinities propagate through empirical
means. All functions here are pure and safe to call concurrently.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .data import DatasetSummary
from .errors import DataError


class LossKind(Enum):
    MSE = "mse"
    MAE = "mae"
    MAPE = "mape"

    @classmethod
    def from_name(cls, name: str) -> "LossKind":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise DataError(f"unknown loss {name!r}; expected mse, mae, or mape") from None


def loss(kind: LossKind, p: float, y: float) -> float:
    """Pointwise loss of prediction p against target y, as an extended real.

    MAPE divides the absolute deviation by |y|, with loss(MAPE, p, 0) = +inf
    for p != 0 and loss(MAPE, 0, 0) = 1.
    """
    if kind is LossKind.MSE:
        return (p - y) ** 2
    if kind is LossKind.MAE:
        return abs(p - y)
    if y == 0.0:
        return 1.0 if p == 0.0 else math.inf
    return abs(p - y) / abs(y)


def pointwise_losses(kind: LossKind, predictions, targets) -> np.ndarray:
    """Vectorized loss(kind, p_i, y_i), same zero-target conventions."""
    p = np.asarray(predictions, dtype=float).ravel()
    y = np.asarray(targets, dtype=float).ravel()
    if p.shape != y.shape:
        raise DataError(f"length mismatch: {p.size} predictions vs {y.size} targets")
    if p.size == 0:
        raise DataError("empty prediction/target vectors")
    if kind is LossKind.MSE:
        return (p - y) ** 2
    if kind is LossKind.MAE:
        return np.abs(p - y)
    out = np.empty_like(p)
    zero = y == 0.0
    nz = ~zero
    out[nz] = np.abs(p[nz] - y[nz]) / np.abs(y[nz])
    out[zero] = np.where(p[zero] == 0.0, 1.0, math.inf)
    return out


def empirical_risk(kind: LossKind, predictions, targets) -> float:
    """Arithmetic mean of the pointwise losses; +inf propagates."""
    return float(np.mean(pointwise_losses(kind, predictions, targets)))


@dataclass(frozen=True)
class RiskReport:
    """Cross-loss report: normalized RMSE, normalized MAE, raw MAPE."""

    nrmse: float
    nmae: float
    mape: float

    def to_json_dict(self) -> dict:
        """JSON-safe mapping; infinities appear as the string "inf"."""

        def enc(v: float):
            return "inf" if math.isinf(v) else v

        return {"nrmse": enc(self.nrmse), "nmae": enc(self.nmae), "mape": enc(self.mape)}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def risk_report(predictions, summary: DatasetSummary, targets) -> RiskReport:
    """Evaluate predictions against targets under all three losses.

    nrmse = sqrt(mean squared error) / target std; nmae = mean absolute
    error / target median; mape is reported unnormalized. The summary must
    come from the same targets.
    """
    if summary.target_std == 0.0:
        raise DataError("target standard deviation is 0; NRMSE undefined")
    if summary.target_median == 0.0:
        raise DataError("target median is 0; NMAE undefined")
    return RiskReport(
        nrmse=math.sqrt(empirical_risk(LossKind.MSE, predictions, targets))
        / summary.target_std,
        nmae=empirical_risk(LossKind.MAE, predictions, targets) / summary.target_median,
        mape=empirical_risk(LossKind.MAPE, predictions, targets),
    )
