"""Hot numeric kernels with two interchangeable backends.

The numba backend compiles the inner loops with @njit; the numpy backend
implements the same contracts with vectorized array code. Selection:

  * DFSUITE_NUMBA=0 in the environment forces the numpy backend;
  * otherwise numba is used when importable.

Both backends must agree bit-for-bit on integer outputs and to float
round-off on float outputs; tests/test_kernels.py enforces parity, and
benchmarks/bench_kernels.py compares throughput.
"""
from __future__ import annotations

import os

import numpy as np

_WANT_NUMBA = os.environ.get("DFSUITE_NUMBA", "1") != "0"

if _WANT_NUMBA:
    try:
        from numba import njit, prange
    except ImportError:  # pragma: no cover
        _WANT_NUMBA = False

USING_NUMBA = _WANT_NUMBA


def using_numba() -> bool:
    return USING_NUMBA


# -- GLCM pair counting -------------------------------------------------

def _glcm_counts_np(img: np.ndarray, dx: int, dy: int, levels: int) -> np.ndarray:
    h, w = img.shape
    y0, y1 = max(0, -dy), min(h, h - dy)
    x0, x1 = max(0, -dx), min(w, w - dx)
    a = img[y0:y1, x0:x1].ravel()
    b = img[y0 + dy : y1 + dy, x0 + dx : x1 + dx].ravel()
    counts = np.zeros((levels, levels), dtype=np.int64)
    np.add.at(counts, (a, b), 1)
    return counts


if USING_NUMBA:

    @njit(cache=True)
    def _glcm_counts_nb(img, dx, dy, levels):  # pragma: no cover - jitted
        h, w = img.shape
        counts = np.zeros((levels, levels), dtype=np.int64)
        for y in range(h):
            yy = y + dy
            if yy < 0 or yy >= h:
                continue
            for x in range(w):
                xx = x + dx
                if xx < 0 or xx >= w:
                    continue
                counts[img[y, x], img[yy, xx]] += 1
        return counts


def glcm_counts(img: np.ndarray, dx: int, dy: int, levels: int) -> np.ndarray:
    """Count co-occurring level pairs (p, p+offset); offset = (dx cols, dy rows)."""
    img = np.ascontiguousarray(img, dtype=np.int64)
    if USING_NUMBA:
        return _glcm_counts_nb(img, dx, dy, levels)
    return _glcm_counts_np(img, dx, dy, levels)


# -- valid-mode 2-D convolution (cross-correlation) ----------------------

def _im2col(x: np.ndarray, kh: int, kw: int) -> np.ndarray:
    """(n, c, h, w) -> (n, oh*ow, c*kh*kw) patch matrix, valid mode."""
    n, c, h, w = x.shape
    oh, ow = h - kh + 1, w - kw + 1
    s0, s1, s2, s3 = x.strides
    patches = np.lib.stride_tricks.as_strided(
        x, shape=(n, c, oh, ow, kh, kw), strides=(s0, s1, s2, s3, s2, s3)
    )
    return patches.transpose(0, 2, 3, 1, 4, 5).reshape(n, oh * ow, c * kh * kw)


def _conv2d_np(x: np.ndarray, k: np.ndarray) -> np.ndarray:
    n, c, h, w = x.shape
    f, _, kh, kw = k.shape
    cols = _im2col(x, kh, kw)
    out = cols @ k.reshape(f, -1).T  # (n, oh*ow, f)
    return out.transpose(0, 2, 1).reshape(n, f, h - kh + 1, w - kw + 1)


if USING_NUMBA:

    @njit(cache=True, parallel=True)
    def _conv2d_nb(x, k):  # pragma: no cover - jitted
        n, c, h, w = x.shape
        f, _, kh, kw = k.shape
        oh, ow = h - kh + 1, w - kw + 1
        out = np.zeros((n, f, oh, ow), dtype=np.float64)
        for i in prange(n):
            for j in range(f):
                for oy in range(oh):
                    for ox in range(ow):
                        acc = 0.0
                        for ci in range(c):
                            for ky in range(kh):
                                for kx in range(kw):
                                    acc += x[i, ci, oy + ky, ox + kx] * k[j, ci, ky, kx]
                        out[i, j, oy, ox] = acc
        return out


def conv2d(x: np.ndarray, kernels: np.ndarray) -> np.ndarray:
    """Valid cross-correlation of (n, c, h, w) inputs with (f, c, kh, kw) kernels."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    kernels = np.ascontiguousarray(kernels, dtype=np.float64)
    if USING_NUMBA:
        return _conv2d_nb(x, kernels)
    return _conv2d_np(x, kernels)


# -- pairwise squared distances (SMOTE neighbor search) ------------------

def _pairwise_sqdist_np(a: np.ndarray) -> np.ndarray:
    sq = np.einsum("ij,ij->i", a, a)
    d = sq[:, None] + sq[None, :] - 2.0 * (a @ a.T)
    np.maximum(d, 0.0, out=d)
    return d


if USING_NUMBA:

    @njit(cache=True, parallel=True)
    def _pairwise_sqdist_nb(a):  # pragma: no cover - jitted
        n, m = a.shape
        d = np.zeros((n, n), dtype=np.float64)
        for i in prange(n):
            for j in range(n):
                acc = 0.0
                for k in range(m):
                    t = a[i, k] - a[j, k]
                    acc += t * t
                d[i, j] = acc
        return d


def pairwise_sqdist(a: np.ndarray) -> np.ndarray:
    """Dense (n, n) squared Euclidean distance matrix."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    if USING_NUMBA:
        return _pairwise_sqdist_nb(a)
    return _pairwise_sqdist_np(a)
