"""Permutation feature importance: accuracy drop under column shuffling."""
from __future__ import annotations

import numpy as np

from ..core.types import FEATURE_NAMES
from ..errors import DataError

N_SHUFFLES = 10


def permutation_importance(
    model,
    X: np.ndarray,
    y: np.ndarray,
    rng: np.random.Generator,
    n_shuffles: int = N_SHUFFLES,
    feature_names=FEATURE_NAMES,
) -> list[tuple[str, float]]:
    """Mean accuracy drop per shuffled feature, sorted descending."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64).ravel()
    if len(X) != len(y) or len(X) == 0:
        raise DataError("need matching, non-empty features and labels")
    if X.shape[1] != len(feature_names):
        raise DataError(f"expected {len(feature_names)} features, got {X.shape[1]}")
    baseline = float(np.mean(model.predict(X) == y))
    scores = []
    for col, name in enumerate(feature_names):
        drops = []
        for _ in range(n_shuffles):
            Xs = X.copy()
            Xs[:, col] = Xs[rng.permutation(len(X)), col]
            drops.append(baseline - float(np.mean(model.predict(Xs) == y)))
        scores.append((name, float(np.mean(drops))))
    return sorted(scores, key=lambda t: t[1], reverse=True)
