"""Texture and skin-tone features over face ROIs.

A ROI is quantized to N gray levels, split into a 3x3 block grid, and
each block contributes GLCM contrast and correlation averaged over the
four unit offsets. The color features are per-pixel means in the oRGB
opponent color space (luminance + two chrominances).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core.types import GrayImage, RgbImage
from .errors import DataError, DegenerateInputError

DEFAULT_GRAY_LEVELS = 32

#: Unit-distance offsets (dx, dy) covering the 4 principal directions.
GLCM_OFFSETS = ((1, 0), (1, 1), (0, 1), (-1, 1))

#: RGB -> oRGB transform; rows are L, C1, C2.
ORGB_MATRIX = np.array(
    [
        [0.299, 0.587, 0.114],
        [0.500, 0.500, -1.000],
        [0.866, -0.866, 0.000],
    ]
)

_VAR_EPS = 1e-12


@dataclass(frozen=True)
class Glcm:
    n_levels: int
    P: np.ndarray  # (N, N) probabilities or raw counts
    offset: tuple[int, int]
    symmetric: bool


def quantize_gray(img: GrayImage, n_levels: int = DEFAULT_GRAY_LEVELS) -> np.ndarray:
    """Map 8-bit pixels to levels [0, n_levels-1] via floor(p * N / 256)."""
    if n_levels < 2:
        raise DataError(f"need at least 2 gray levels, got {n_levels}")
    return (img.pixels.astype(np.int64) * n_levels) // 256


def glcm(
    quantized: np.ndarray,
    offset: tuple[int, int] = (1, 0),
    n_levels: int = DEFAULT_GRAY_LEVELS,
    symmetric: bool = True,
    normalized: bool = True,
) -> Glcm:
    """Co-occurrence matrix of level pairs (p, p + offset) inside bounds."""
    dx, dy = offset
    counts = kernels.glcm_counts(quantized, dx, dy, n_levels)
    if symmetric:
        counts = counts + counts.T
    total = counts.sum()
    if total == 0:
        raise DataError(f"image too small for offset {offset}: no valid pairs")
    P = counts.astype(np.float64)
    if normalized:
        P /= total
    return Glcm(n_levels=n_levels, P=P, offset=offset, symmetric=symmetric)


def glcm_contrast(g: Glcm) -> float:
    """Sum of P[i, j] * (i - j)^2."""
    i, j = np.indices(g.P.shape)
    return float(np.sum(g.P * (i - j) ** 2))


def glcm_correlation(g: Glcm) -> float:
    """Normalized covariance of the co-occurrence distribution, in [-1, 1].

    Raises DegenerateInputError when a marginal variance vanishes
    (constant image); callers decide how to handle that block.
    """
    P = g.P / g.P.sum()
    i, j = np.indices(P.shape)
    mu_i = float(np.sum(i * P))
    mu_j = float(np.sum(j * P))
    sigma_i = float(np.sqrt(np.sum(P * (i - mu_i) ** 2)))
    sigma_j = float(np.sqrt(np.sum(P * (j - mu_j) ** 2)))
    if sigma_i < _VAR_EPS or sigma_j < _VAR_EPS:
        raise DegenerateInputError("zero marginal variance: correlation undefined")
    return float(np.sum((i - mu_i) * (j - mu_j) * P) / (sigma_i * sigma_j))


def _block_slices(size: int, parts: int = 3):
    # integer division; last block absorbs the remainder
    step = size // parts
    for k in range(parts):
        yield slice(k * step, (k + 1) * step if k < parts - 1 else size)


def blockwise_texture(
    roi: GrayImage, n_levels: int = DEFAULT_GRAY_LEVELS
) -> tuple[float, float, int]:
    """(contrast, correlation, n_degenerate_blocks) over a 3x3 block grid.

    Per block, both features are averaged over the four unit offsets;
    the video-level value is the mean over blocks. Blocks with undefined
    correlation are excluded from the correlation mean and counted in
    the returned degeneracy tally. All nine degenerate -> error.
    """
    if roi.height < 9 or roi.width < 9:
        raise DataError(f"ROI must be at least 9x9, got {roi.height}x{roi.width}")
    q = quantize_gray(roi, n_levels)
    contrasts, correlations = [], []
    degenerate = 0
    for ys in _block_slices(roi.height):
        for xs in _block_slices(roi.width):
            block = q[ys, xs]
            con_vals, cor_vals = [], []
            block_degenerate = False
            for off in GLCM_OFFSETS:
                g = glcm(block, offset=off, n_levels=n_levels)
                con_vals.append(glcm_contrast(g))
                try:
                    cor_vals.append(glcm_correlation(g))
                except DegenerateInputError:
                    block_degenerate = True
            contrasts.append(float(np.mean(con_vals)))
            if block_degenerate or not cor_vals:
                degenerate += 1
            else:
                correlations.append(float(np.mean(cor_vals)))
    if not correlations:
        raise DegenerateInputError("all 9 blocks degenerate: correlation undefined")
    return float(np.mean(contrasts)), float(np.mean(correlations)), degenerate


def rgb_to_orgb(pixel) -> np.ndarray:
    """Linear RGB -> (L, C1, C2). Gray inputs map to (v, 0, 0)."""
    return ORGB_MATRIX @ np.asarray(pixel, dtype=np.float64)


def skin_tone_features(roi: RgbImage) -> tuple[float, float, float]:
    """Mean (L, C1, C2) over all ROI pixels."""
    if roi.pixels.size == 0:
        raise DataError("empty ROI")
    flat = roi.pixels.reshape(-1, 3).astype(np.float64)
    means = (ORGB_MATRIX @ flat.mean(axis=0))
    return float(means[0]), float(means[1]), float(means[2])


def to_gray(roi: RgbImage) -> GrayImage:
    """RGB -> 8-bit gray via the oRGB luminance row (same weights everywhere)."""
    lum = roi.pixels.astype(np.float64) @ ORGB_MATRIX[0]
    return GrayImage(np.clip(np.round(lum), 0, 255).astype(np.uint8))
