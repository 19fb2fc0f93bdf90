"""Compact 2-D convolutional binary classifier for spectrograms.

Stack: [conv 3x3 valid + relu + 2x2 maxpool] per filter count, flatten,
dense + relu, dropout (training only), logistic output. Convolution
forward goes through the kernels dispatch layer; backward uses the
im2col formulation. Training is mini-batch gradient descent with
momentum on binary cross-entropy.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from ..errors import DataError, NumericError
from .losses import bce_loss, relu, sigmoid


@dataclass
class CnnConfig:
    input_shape: tuple[int, int] = (128, 128)
    filters: tuple[int, ...] = (8, 16)
    kernel_size: int = 3
    dense_units: int = 64
    dropout: float = 0.3
    learning_rate: float = 0.005
    momentum: float = 0.9
    epochs: int = 12
    batch_size: int = 16


def fix_frames(mat: np.ndarray, n_frames: int = 128, pad_value: float = 0.0) -> np.ndarray:
    """Center-crop or pad the time axis to exactly n_frames columns."""
    mat = np.asarray(mat, dtype=np.float64)
    t = mat.shape[1]
    if t > n_frames:
        start = (t - n_frames) // 2
        return mat[:, start : start + n_frames]
    if t < n_frames:
        left = (n_frames - t) // 2
        out = np.full((mat.shape[0], n_frames), pad_value)
        out[:, left : left + t] = mat
        return out
    return mat


def _maxpool2(x: np.ndarray):
    n, c, h, w = x.shape
    h2, w2 = h // 2, w // 2
    view = x[:, :, : 2 * h2, : 2 * w2].reshape(n, c, h2, 2, w2, 2)
    flat = view.transpose(0, 1, 2, 4, 3, 5).reshape(n, c, h2, w2, 4)
    arg = flat.argmax(axis=-1)
    out = np.take_along_axis(flat, arg[..., None], axis=-1)[..., 0]
    return out, arg


def _maxpool2_backward(dout: np.ndarray, arg: np.ndarray, x_shape):
    n, c, h, w = x_shape
    h2, w2 = dout.shape[2], dout.shape[3]
    dflat = np.zeros((n, c, h2, w2, 4))
    np.put_along_axis(dflat, arg[..., None], dout[..., None], axis=-1)
    dx = np.zeros(x_shape)
    dx[:, :, : 2 * h2, : 2 * w2] = (
        dflat.reshape(n, c, h2, w2, 2, 2).transpose(0, 1, 2, 4, 3, 5).reshape(n, c, 2 * h2, 2 * w2)
    )
    return dx


def _col2im(dcols: np.ndarray, x_shape, kh: int, kw: int) -> np.ndarray:
    n, c, h, w = x_shape
    oh, ow = h - kh + 1, w - kw + 1
    patches = dcols.reshape(n, oh, ow, c, kh, kw)
    dx = np.zeros(x_shape)
    for ky in range(kh):
        for kx in range(kw):
            dx[:, :, ky : ky + oh, kx : kx + ow] += patches[:, :, :, :, ky, kx].transpose(0, 3, 1, 2)
    return dx


@dataclass
class CnnModel:
    config: CnnConfig
    conv_kernels: list[np.ndarray]  # (f, c, k, k) per block
    conv_biases: list[np.ndarray]
    dense_w: np.ndarray  # (flat, dense_units)
    dense_b: np.ndarray
    out_w: np.ndarray  # (dense_units, 1)
    out_b: np.ndarray
    norm_mean: float = 0.0
    norm_std: float = 1.0
    seed: int | None = None
    history: list[tuple[int, float, float]] = field(default_factory=list)

    def parameters(self) -> list[np.ndarray]:
        return (
            self.conv_kernels + self.conv_biases + [self.dense_w, self.dense_b, self.out_w, self.out_b]
        )

    def _check_input(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 3:
            X = X[:, None, :, :]
        if X.shape[2:] != self.config.input_shape or X.shape[1] != 1:
            raise DataError(
                f"expected inputs (n, 1, {self.config.input_shape[0]}, "
                f"{self.config.input_shape[1]}), got {X.shape}"
            )
        return (X - self.norm_mean) / self.norm_std

    def _forward(self, Xn, rng=None, dropout=False):
        """Forward pass with caches; dropout only when a generator is given."""
        cache = {"conv": [], "pool": []}
        a = Xn
        for K, b in zip(self.conv_kernels, self.conv_biases):
            z = kernels.conv2d(a, K) + b[None, :, None, None]
            pooled, arg = _maxpool2(relu(z))
            cache["conv"].append((a, z))
            cache["pool"].append((arg, relu(z).shape))
            a = pooled
        cache["flat_shape"] = a.shape
        flat = a.reshape(a.shape[0], -1)
        z_d = flat @ self.dense_w + self.dense_b
        a_d = relu(z_d)
        if dropout and self.config.dropout > 0:
            mask = (rng.random(a_d.shape) >= self.config.dropout) / (1.0 - self.config.dropout)
            a_d = a_d * mask
            cache["drop_mask"] = mask
        z_o = a_d @ self.out_w + self.out_b
        probs = sigmoid(z_o).ravel()
        cache.update(flat=flat, z_d=z_d, a_d=a_d)
        return probs, cache

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        probs, _ = self._forward(self._check_input(X))
        return probs

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.predict_proba(X) >= 0.5).astype(np.int64)


def cnn_gradients(model: CnnModel, Xn: np.ndarray, y: np.ndarray, rng=None, dropout=False):
    """Loss and backprop gradients in model.parameters() order."""
    n = len(y)
    probs, cache = model._forward(Xn, rng=rng, dropout=dropout)
    loss = bce_loss(y, probs)
    delta = ((probs - y) / n).reshape(-1, 1)
    g_out_w = cache["a_d"].T @ delta
    g_out_b = delta.sum(axis=0)
    d_ad = delta @ model.out_w.T
    if dropout and "drop_mask" in cache:
        d_ad = d_ad * cache["drop_mask"]
    d_zd = d_ad * (cache["z_d"] > 0)
    g_dense_w = cache["flat"].T @ d_zd
    g_dense_b = d_zd.sum(axis=0)
    d_flat = d_zd @ model.dense_w.T
    da = d_flat.reshape(cache["flat_shape"])
    g_kernels = [None] * len(model.conv_kernels)
    g_biases = [None] * len(model.conv_biases)
    for l in range(len(model.conv_kernels) - 1, -1, -1):
        arg, relu_shape = cache["pool"][l]
        x_in, z = cache["conv"][l]
        d_relu = _maxpool2_backward(da, arg, relu_shape)
        dz = d_relu * (z > 0)
        f = model.conv_kernels[l].shape[0]
        kh = kw = model.config.kernel_size
        cols = kernels._im2col(x_in, kh, kw)  # (n, oh*ow, c*kh*kw)
        dflat2 = dz.reshape(dz.shape[0], f, -1).transpose(0, 2, 1)  # (n, oh*ow, f)
        g_kernels[l] = np.einsum("npf,npk->fk", dflat2, cols).reshape(model.conv_kernels[l].shape)
        g_biases[l] = dz.sum(axis=(0, 2, 3))
        if l > 0:
            kflat = model.conv_kernels[l].reshape(f, -1)
            dcols = dflat2 @ kflat  # (n, oh*ow, c*kh*kw)
            da = _col2im(dcols, x_in.shape, kh, kw)
    grads = g_kernels + g_biases + [g_dense_w, g_dense_b, g_out_w, g_out_b]
    return loss, grads


def init_cnn(config: CnnConfig, rng: np.random.Generator, seed: int | None = None) -> CnnModel:
    h, w = config.input_shape
    k = config.kernel_size
    c_in = 1
    conv_kernels, conv_biases = [], []
    for f in config.filters:
        conv_kernels.append(rng.standard_normal((f, c_in, k, k)) * np.sqrt(2.0 / (c_in * k * k)))
        conv_biases.append(np.zeros(f))
        h, w = (h - k + 1) // 2, (w - k + 1) // 2
        if h < 1 or w < 1:
            raise DataError("input too small for the configured conv stack")
        c_in = f
    flat = h * w * c_in
    dense_w = rng.standard_normal((flat, config.dense_units)) * np.sqrt(2.0 / flat)
    out_w = rng.standard_normal((config.dense_units, 1)) * np.sqrt(2.0 / config.dense_units)
    return CnnModel(
        config=config,
        conv_kernels=conv_kernels,
        conv_biases=conv_biases,
        dense_w=dense_w,
        dense_b=np.zeros(config.dense_units),
        out_w=out_w,
        out_b=np.zeros(1),
        seed=seed,
    )


def cnn_train(
    X: np.ndarray,
    y: np.ndarray,
    config: CnnConfig | None = None,
    rng: np.random.Generator | None = None,
    seed: int | None = None,
) -> CnnModel:
    """Train on (n, bands, frames) spectrogram stacks with binary labels."""
    config = config or CnnConfig()
    if rng is None:
        raise DataError("a seeded generator is required")
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 3:
        X = X[:, None, :, :]
    y = np.asarray(y, dtype=np.float64).ravel()
    if X.shape[2:] != config.input_shape:
        raise DataError(f"inputs must be {config.input_shape}, got {X.shape[2:]}")
    model = init_cnn(config, rng, seed)
    model.norm_mean = float(X.mean())
    model.norm_std = float(max(X.std(), 1e-12))
    Xn = (X - model.norm_mean) / model.norm_std

    velocity = [np.zeros_like(p) for p in model.parameters()]
    n = len(y)
    for epoch in range(config.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        correct = 0
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            loss, grads = cnn_gradients(model, Xn[batch], y[batch], rng=rng, dropout=True)
            if not np.isfinite(loss):
                raise NumericError(f"training diverged at epoch {epoch}")
            epoch_loss += loss * len(batch)
            params = model.parameters()
            for v, p, g in zip(velocity, params, grads):
                v *= config.momentum
                v -= config.learning_rate * g
                p += v
        probs, _ = model._forward(Xn)
        correct = float(np.mean((probs >= 0.5) == (y == 1)))
        model.history.append((epoch, epoch_loss / n, correct))
    return model
