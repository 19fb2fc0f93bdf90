"""From-scratch feedforward binary classifier.

Architecture: input -> rectifier hidden layers -> single logistic output.
Each neuron computes sigma(sum_i w_ij * a_i + b_j). Training is
mini-batch gradient descent with classical momentum on binary
cross-entropy; everything is deterministic under a fixed seed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError, NumericError
from .losses import bce_loss, relu, sigmoid

_STD_EPS = 1e-12


@dataclass
class AnnConfig:
    hidden: tuple[int, ...] = (64, 32)
    learning_rate: float = 0.01
    momentum: float = 0.9
    epochs: int = 200
    batch_size: int = 32


@dataclass
class AnnModel:
    layer_dims: tuple[int, ...]
    weights: list[np.ndarray]  # (n_in, n_out) per layer
    biases: list[np.ndarray]  # (n_out,) per layer
    norm_mean: np.ndarray
    norm_std: np.ndarray
    config: AnnConfig = field(default_factory=AnnConfig)
    seed: int | None = None
    history: list[tuple[int, float, float]] = field(default_factory=list)

    def normalize(self, X: np.ndarray) -> np.ndarray:
        return (X - self.norm_mean) / self.norm_std

    def forward(self, Xn: np.ndarray) -> np.ndarray:
        """Probabilities for already-normalized inputs (n, d) -> (n,)."""
        if Xn.shape[1] != self.layer_dims[0]:
            raise DataError(
                f"expected {self.layer_dims[0]} input features, got {Xn.shape[1]}"
            )
        a = Xn
        last = len(self.weights) - 1
        for l, (W, b) in enumerate(zip(self.weights, self.biases)):
            z = a @ W + b
            a = sigmoid(z) if l == last else relu(z)
        return a.ravel()

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return self.forward(self.normalize(np.asarray(X, dtype=np.float64)))

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.predict_proba(X) >= 0.5).astype(np.int64)

    def parameters(self) -> list[np.ndarray]:
        return self.weights + self.biases


def _forward_cached(model: AnnModel, Xn: np.ndarray):
    activations = [Xn]
    pre = []
    a = Xn
    last = len(model.weights) - 1
    for l, (W, b) in enumerate(zip(model.weights, model.biases)):
        z = a @ W + b
        pre.append(z)
        a = sigmoid(z) if l == last else relu(z)
        activations.append(a)
    return activations, pre


def ann_gradients(model: AnnModel, Xn: np.ndarray, y: np.ndarray):
    """Backprop gradients of mean BCE w.r.t. every weight and bias."""
    n = len(y)
    activations, pre = _forward_cached(model, Xn)
    probs = activations[-1].ravel()
    loss = bce_loss(y, probs)
    # d(loss)/d(z_out) for sigmoid + BCE
    delta = ((probs - y) / n).reshape(-1, 1)
    grads_w: list[np.ndarray] = [None] * len(model.weights)
    grads_b: list[np.ndarray] = [None] * len(model.biases)
    for l in range(len(model.weights) - 1, -1, -1):
        grads_w[l] = activations[l].T @ delta
        grads_b[l] = delta.sum(axis=0)
        if l > 0:
            delta = (delta @ model.weights[l].T) * (pre[l - 1] > 0)
    return loss, grads_w, grads_b


def init_ann(
    n_features: int, config: AnnConfig, rng: np.random.Generator, seed: int | None = None
) -> AnnModel:
    dims = (n_features,) + tuple(config.hidden) + (1,)
    weights, biases = [], []
    for d_in, d_out in zip(dims, dims[1:]):
        weights.append(rng.standard_normal((d_in, d_out)) * np.sqrt(2.0 / d_in))
        biases.append(np.zeros(d_out))
    return AnnModel(
        layer_dims=dims,
        weights=weights,
        biases=biases,
        norm_mean=np.zeros(n_features),
        norm_std=np.ones(n_features),
        config=config,
        seed=seed,
    )


def ann_train(
    X: np.ndarray,
    y: np.ndarray,
    config: AnnConfig | None = None,
    rng: np.random.Generator | None = None,
    seed: int | None = None,
) -> AnnModel:
    """Train on raw features; z-score stats are learned here and stored."""
    config = config or AnnConfig()
    if rng is None:
        raise DataError("a seeded generator is required")
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).ravel()
    if len(X) != len(y) or len(X) == 0:
        raise DataError("need matching, non-empty features and labels")
    model = init_ann(X.shape[1], config, rng, seed)
    model.norm_mean = X.mean(axis=0)
    model.norm_std = np.maximum(X.std(axis=0), _STD_EPS)
    Xn = model.normalize(X)

    vel_w = [np.zeros_like(w) for w in model.weights]
    vel_b = [np.zeros_like(b) for b in model.biases]
    n = len(y)
    for epoch in range(config.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            loss, gw, gb = ann_gradients(model, Xn[batch], y[batch])
            if not np.isfinite(loss):
                raise NumericError(f"training diverged at epoch {epoch}")
            epoch_loss += loss * len(batch)
            for l in range(len(model.weights)):
                vel_w[l] = config.momentum * vel_w[l] - config.learning_rate * gw[l]
                vel_b[l] = config.momentum * vel_b[l] - config.learning_rate * gb[l]
                model.weights[l] += vel_w[l]
                model.biases[l] += vel_b[l]
        probs = model.forward(Xn)
        acc = float(np.mean((probs >= 0.5) == (y == 1)))
        model.history.append((epoch, epoch_loss / n, acc))
    return model
