"""Activations and the binary cross-entropy loss."""
from __future__ import annotations

import numpy as np

from ..errors import DataError

BCE_EPS = 1e-12


def sigmoid(z):
    arr = np.asarray(z, dtype=np.float64)
    out = np.empty_like(arr)
    pos = arr >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-arr[pos]))
    ez = np.exp(arr[~pos])
    out[~pos] = ez / (1.0 + ez)
    return float(out) if np.isscalar(z) else out


def relu(z):
    return np.maximum(z, 0.0)


def bce_loss(y_true, y_prob) -> float:
    """-(1/N) * sum(y*log(p) + (1-y)*log(1-p)) with probabilities clipped
    to [eps, 1-eps]."""
    y_true = np.asarray(y_true, dtype=np.float64).ravel()
    y_prob = np.asarray(y_prob, dtype=np.float64).ravel()
    if y_true.shape != y_prob.shape:
        raise DataError(f"length mismatch: {y_true.shape} vs {y_prob.shape}")
    p = np.clip(y_prob, BCE_EPS, 1.0 - BCE_EPS)
    return float(-np.mean(y_true * np.log(p) + (1.0 - y_true) * np.log(1.0 - p)))
