"""Gini-impurity decision tree and bagged random forest baselines."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError


@dataclass
class TreeConfig:
    max_depth: int = 8
    min_samples_split: int = 2
    max_features: int | None = None  # per-split feature subsample; None = all


@dataclass
class ForestConfig:
    n_estimators: int = 100
    max_depth: int = 8
    bootstrap: bool = True
    max_features: int | None = -1  # -1 means round(sqrt(n_features))


@dataclass
class TreeNode:
    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    prediction: int = 0
    probability: float = 0.0  # fraction of label-1 rows at this node

    @property
    def is_leaf(self) -> bool:
        return self.left is None


def _gini(y: np.ndarray) -> float:
    if len(y) == 0:
        return 0.0
    p = np.mean(y)
    return float(2.0 * p * (1.0 - p))


def _best_split(X, y, feature_ids):
    """Lowest weighted-Gini (feature, threshold) among candidate features."""
    best = (np.inf, -1, 0.0)
    n = len(y)
    for f in feature_ids:
        order = np.argsort(X[:, f], kind="stable")
        xs, ys = X[order, f], y[order]
        ones_left = np.cumsum(ys)
        total_ones = ones_left[-1]
        for i in range(n - 1):
            if xs[i + 1] <= xs[i]:
                continue
            nl = i + 1
            nr = n - nl
            pl = ones_left[i] / nl
            pr = (total_ones - ones_left[i]) / nr
            score = (nl * 2 * pl * (1 - pl) + nr * 2 * pr * (1 - pr)) / n
            if score < best[0] - 1e-15:
                best = (score, f, (xs[i] + xs[i + 1]) / 2.0)
    return best


def _grow(X, y, depth, config: TreeConfig, rng) -> TreeNode:
    node = TreeNode(
        prediction=int(np.mean(y) >= 0.5),
        probability=float(np.mean(y)),
    )
    if (
        depth >= config.max_depth
        or len(y) < config.min_samples_split
        or _gini(y) == 0.0
    ):
        return node
    n_features = X.shape[1]
    if config.max_features is not None and config.max_features < n_features:
        feature_ids = np.sort(rng.choice(n_features, size=config.max_features, replace=False))
    else:
        feature_ids = np.arange(n_features)
    score, f, thr = _best_split(X, y, feature_ids)
    if not np.isfinite(score) or score >= _gini(y) - 1e-15:
        return node
    mask = X[:, f] <= thr
    node.feature = f
    node.threshold = thr
    node.left = _grow(X[mask], y[mask], depth + 1, config, rng)
    node.right = _grow(X[~mask], y[~mask], depth + 1, config, rng)
    return node


@dataclass
class TreeModel:
    root: TreeNode
    config: TreeConfig
    n_features: int
    seed: int | None = None

    def _leaf(self, x) -> TreeNode:
        node = self.root
        while not node.is_leaf:
            node = node.left if x[node.feature] <= node.threshold else node.right
        return node

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        return np.array([self._leaf(x).prediction for x in X], dtype=np.int64)

    def predict_proba(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        return np.array([self._leaf(x).probability for x in X])


def tree_train(
    X, y, config: TreeConfig | None = None, rng: np.random.Generator | None = None, seed=None
) -> TreeModel:
    config = config or TreeConfig()
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64).ravel()
    if len(y) == 0:
        raise DataError("empty training set")
    if rng is None and config.max_features is not None:
        raise DataError("feature subsampling requires a seeded generator")
    root = _grow(X, y, 0, config, rng)
    return TreeModel(root=root, config=config, n_features=X.shape[1], seed=seed)


@dataclass
class ForestModel:
    trees: list[TreeModel]
    config: ForestConfig
    n_features: int
    seed: int | None = None

    def predict_proba(self, X) -> np.ndarray:
        votes = np.stack([t.predict(X) for t in self.trees])
        return votes.mean(axis=0)

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X) >= 0.5).astype(np.int64)


def forest_train(
    X, y, config: ForestConfig | None = None, rng: np.random.Generator | None = None, seed=None
) -> ForestModel:
    config = config or ForestConfig()
    if rng is None:
        raise DataError("a seeded generator is required")
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64).ravel()
    if len(y) == 0:
        raise DataError("empty training set")
    max_features = config.max_features
    if max_features == -1:
        max_features = int(round(np.sqrt(X.shape[1])))
    tree_config = TreeConfig(max_depth=config.max_depth, max_features=max_features)
    trees = []
    n = len(y)
    for _ in range(config.n_estimators):
        if config.bootstrap:
            idx = rng.integers(0, n, size=n)
            Xb, yb = X[idx], y[idx]
        else:
            Xb, yb = X, y
        trees.append(tree_train(Xb, yb, tree_config, rng))
    return ForestModel(trees=trees, config=config, n_features=X.shape[1], seed=seed)
