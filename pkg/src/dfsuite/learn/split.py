"""Stratified shuffle split."""
from __future__ import annotations

import numpy as np

from ..core.types import Dataset
from ..errors import DataError


def train_test_split(ds: Dataset, ratio: float = 0.8, rng: np.random.Generator | None = None):
    """Split into (train, test) preserving per-class proportions.

    |train| = round(ratio * n) overall, realized per class so each class
    keeps its share within one row.
    """
    if not 0.0 < ratio < 1.0:
        raise DataError(f"ratio must be in (0, 1), got {ratio}")
    if len(ds) == 0:
        raise DataError("cannot split an empty dataset")
    if rng is None:
        raise DataError("a seeded generator is required")
    by_class: dict[int | None, list[int]] = {}
    for i, row in enumerate(ds.rows):
        by_class.setdefault(row.label, []).append(i)
    for label, idx in by_class.items():
        if len(idx) < 2:
            raise DataError(f"class {label} has fewer than 2 rows; cannot stratify")
    train_idx, test_idx = [], []
    for label in sorted(by_class, key=lambda v: (v is None, v)):
        idx = np.array(by_class[label])
        perm = rng.permutation(len(idx))
        n_train = int(round(ratio * len(idx)))
        n_train = min(max(n_train, 1), len(idx) - 1)
        train_idx.extend(idx[perm[:n_train]])
        test_idx.extend(idx[perm[n_train:]])
    train = Dataset(rows=tuple(ds.rows[i] for i in sorted(train_idx)))
    test = Dataset(rows=tuple(ds.rows[i] for i in sorted(test_idx)))
    return train, test
