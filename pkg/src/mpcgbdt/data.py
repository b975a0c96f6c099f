"""Dataset ingestion, binning, splitting and vertical partitioning."""

from __future__ import annotations

import csv
import importlib.resources
from dataclasses import dataclass

import numpy as np

from .trainer import PartyData


class ParseError(ValueError):
    pass


@dataclass
class Dataset:
    """Aligned numeric features plus a binary label column."""

    X: np.ndarray  # (N, F) float64
    y: np.ndarray  # (N,) int in {0,1}
    feature_names: list

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]


def load_csv(path, label_col: str) -> Dataset:
    """Parse a headered numeric CSV; errors carry row/column positions."""
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        raise ParseError("empty file")
    header = rows[0]
    if label_col not in header:
        raise ParseError(f"missing label column {label_col!r}")
    label_idx = header.index(label_col)
    feat_idx = [i for i in range(len(header)) if i != label_idx]
    X = np.empty((len(rows) - 1, len(feat_idx)))
    y = np.empty(len(rows) - 1, dtype=np.int64)
    for r, row in enumerate(rows[1:], start=2):
        for c, i in enumerate(feat_idx):
            try:
                X[r - 2, c] = float(row[i])
            except (ValueError, IndexError):
                raise ParseError(f"non-numeric cell at row {r}, column {header[i]!r}") from None
        try:
            y[r - 2] = int(float(row[label_idx]))
        except (ValueError, IndexError):
            raise ParseError(f"bad label at row {r}") from None
    if not np.isin(y, (0, 1)).all():
        raise ParseError("labels must be 0/1")
    return Dataset(X, y, [header[i] for i in feat_idx])


def load_fixture() -> Dataset:
    """The bundled breast-cancer diagnostic dataset."""
    path = importlib.resources.files("mpcgbdt").joinpath("data/breast_cancer.csv")
    return load_csv(str(path), "label")


def bin_features(X: np.ndarray, buckets: int) -> list:
    """Equal-width thresholds t_u = min + u*(max-min)/B for u = 1..B-1.

    A constant feature degenerates to B-1 copies of the constant; with
    the strict less-than split test every sample then routes right.
    """
    if buckets < 2:
        raise ValueError("need at least 2 buckets")
    out = []
    for j in range(X.shape[1]):
        lo, hi = X[:, j].min(), X[:, j].max()
        out.append(lo + np.arange(1, buckets) * (hi - lo) / buckets)
    return out


def split_train_test(ds: Dataset, ratio: float = 0.8, seed: int = 0):
    """Seeded shuffle then split; not stratified."""
    rng = np.random.default_rng(seed)
    perm = rng.permutation(ds.n_samples)
    cut = int(round(ds.n_samples * ratio))
    tr, te = perm[:cut], perm[cut:]
    return (
        Dataset(ds.X[tr], ds.y[tr], ds.feature_names),
        Dataset(ds.X[te], ds.y[te], ds.feature_names),
    )


def vertical_split(ds: Dataset, thresholds: list, n_features_p0: int | None = None):
    """Partition columns between the parties; party 1 holds the labels."""
    f = ds.n_features
    f0 = (f + 1) // 2 if n_features_p0 is None else n_features_p0
    if not (0 < f0 < f):
        raise ValueError("each party needs at least one feature column")
    d0 = PartyData(ds.X[:, :f0], thresholds[:f0], None, f, f0)
    d1 = PartyData(ds.X[:, f0:], thresholds[f0:], ds.y, f, f0)
    return d0, d1
