"""CSV ingestion, validation, and target summaries.

A Dataset is the immutable unit every fitting routine consumes: an N x d
feature matrix plus a length-N target vector, read from a headered CSV of
plain decimal numbers. DatasetSummary records the target statistics used
to normalize risk reports, together with the conventions they were
computed under. Both types are frozen and safe to share across threads.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError

STD_CONVENTION = "sample (N-1 denominator)"
MEDIAN_CONVENTION = "midpoint of the two middle order statistics"


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Dataset:
    """Immutable design matrix and target vector with column names."""

    features: np.ndarray
    target: np.ndarray
    feature_names: tuple[str, ...]
    target_name: str

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=float)
        target = np.asarray(self.target, dtype=float).ravel()
        if feats.ndim != 2:
            raise DataError("features must be a 2-D matrix")
        n, d = feats.shape
        if n < 1 or d < 1:
            raise DataError("dataset needs at least one row and one feature column")
        if target.shape[0] != n:
            raise DataError(f"target length {target.shape[0]} != feature row count {n}")
        if not (np.all(np.isfinite(feats)) and np.all(np.isfinite(target))):
            raise DataError("dataset contains NaN or infinite entries")
        names = tuple(str(s) for s in self.feature_names)
        if len(names) != d:
            raise DataError(f"{len(names)} feature names for {d} feature columns")
        object.__setattr__(self, "features", _frozen(feats))
        object.__setattr__(self, "target", _frozen(target))
        object.__setattr__(self, "feature_names", names)

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class DatasetSummary:
    """Target statistics for report normalization, conventions recorded."""

    n_rows: int
    target_std: float
    target_median: float
    target_min_abs: float
    std_convention: str = STD_CONVENTION
    median_convention: str = MEDIAN_CONVENTION


def load_csv(path, target_column: str) -> Dataset:
    """Read a headered numeric CSV and split off one column as the target.

    Feature columns keep their file order. A cell that does not parse as a
    finite decimal number is reported with its 1-based data row and column
    name.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise DataError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if target_column not in header:
        raise DataError(
            f"{path}: no column named {target_column!r} (columns: {', '.join(header)})"
        )
    if len(header) < 2:
        raise DataError(f"{path}: need at least one feature column besides {target_column!r}")
    t_idx = header.index(target_column)
    data = rows[1:]
    if not data:
        raise DataError(f"{path}: no data rows")

    features = []
    target = []
    for i, row in enumerate(data, start=1):
        if len(row) != len(header):
            raise DataError(f"{path}: row {i} has {len(row)} cells, expected {len(header)}")
        vals = []
        for j, cell in enumerate(row):
            try:
                v = float(cell)
            except ValueError:
                v = math.nan
            if not math.isfinite(v):
                raise DataError(
                    f"{path}: non-numeric value {cell.strip()!r} at row {i}, "
                    f"column {header[j]!r}"
                )
            vals.append(v)
        target.append(vals[t_idx])
        features.append([v for j, v in enumerate(vals) if j != t_idx])

    names = tuple(h for j, h in enumerate(header) if j != t_idx)
    return Dataset(
        features=np.array(features),
        target=np.array(target),
        feature_names=names,
        target_name=target_column,
    )


def write_csv(ds: Dataset, path) -> None:
    """Write features (in order) plus the target as the last column.

    Values are written with repr, so reloading reproduces the matrices bit
    for bit.
    """
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([*ds.feature_names, ds.target_name])
        for row, y in zip(ds.features, ds.target):
            writer.writerow([repr(float(v)) for v in row] + [repr(float(y))])


def summarize(ds: Dataset) -> DatasetSummary:
    """Sample std, midpoint median, and min |y| of the target."""
    y = ds.target
    if y.size < 2:
        raise DataError("summary needs at least 2 rows (standard deviation undefined)")
    return DatasetSummary(
        n_rows=int(y.size),
        target_std=float(np.std(y, ddof=1)),
        target_median=float(np.median(y)),
        target_min_abs=float(np.min(np.abs(y))),
    )
