"""Synthetic minority oversampling.

Each synthetic row interpolates between a minority row x and one of its
k nearest minority neighbors: x + u * (x_nn - x), u ~ U[0, 1). The
minority class is upsampled until both class counts are equal.
"""
from __future__ import annotations

import warnings

import numpy as np

from .. import kernels
from ..core.types import Dataset, VideoFeatureVector
from ..errors import DataError

DEFAULT_K = 5


def smote(ds: Dataset, k: int = DEFAULT_K, rng: np.random.Generator | None = None) -> Dataset:
    counts = ds.class_counts
    if set(counts) != {0, 1}:
        raise DataError(f"SMOTE needs both binary classes present, got {counts}")
    if rng is None:
        raise DataError("a seeded generator is required")
    minority = min(counts, key=counts.get)
    majority = 1 - minority
    need = counts[majority] - counts[minority]
    if need == 0:
        return ds
    min_rows = [r for r in ds.rows if r.label == minority]
    if len(min_rows) < k + 1:
        raise DataError(
            f"minority class has {len(min_rows)} rows; need at least k+1 = {k + 1}"
        )
    X = np.array([r.values for r in min_rows])
    d = kernels.pairwise_sqdist(X)
    np.fill_diagonal(d, np.inf)
    neighbor_idx = np.argsort(d, axis=1, kind="stable")[:, :k]
    if np.allclose(X, X[0]):
        warnings.warn("degenerate minority class: all rows identical; synthetic rows duplicate it")
    synth = []
    for s in range(need):
        i = int(rng.integers(len(min_rows)))
        j = int(neighbor_idx[i][int(rng.integers(k))])
        u = float(rng.random())
        values = X[i] + u * (X[j] - X[i])
        synth.append(
            VideoFeatureVector(
                video_id=f"smote-{s}-{min_rows[i].video_id}",
                values=values,
                label=minority,
            )
        )
    return Dataset(rows=ds.rows + tuple(synth))
