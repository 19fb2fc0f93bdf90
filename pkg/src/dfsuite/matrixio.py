"""DFSMATRX binary matrix format plus a PGM renderer for eyeballing
spectrograms.

Layout: 8-byte magic "DFSMATRX", u32 rows, u32 cols (little-endian),
then rows*cols little-endian float32 values row-major. Lossless at
32-bit precision.
"""
from __future__ import annotations

import struct

import numpy as np

from .core.ppm import write_ppm
from .core.types import GrayImage
from .errors import DataError

MAGIC = b"DFSMATRX"
_HEADER = struct.Struct("<8sII")


def write_matrix(m: np.ndarray, path) -> None:
    m = np.asarray(m)
    if m.ndim != 2:
        raise DataError(f"matrix must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DataError("matrix has non-finite entries")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, m.shape[0], m.shape[1]))
        fh.write(np.ascontiguousarray(m, dtype="<f4").tobytes())


def read_matrix(path) -> np.ndarray:
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) < _HEADER.size:
            raise DataError(f"{path}: truncated header")
        magic, rows, cols = _HEADER.unpack(header)
        if magic != MAGIC:
            raise DataError(f"{path}: bad magic {magic!r}")
        payload = fh.read(rows * cols * 4)
    if len(payload) != rows * cols * 4:
        raise DataError(f"{path}: truncated payload")
    return np.frombuffer(payload, dtype="<f4").reshape(rows, cols).astype(np.float32)


def render_pgm(m: np.ndarray, path, floor_db: float = -80.0, top_db: float = 0.0) -> None:
    """Affine map floor_db -> 0 and top_db -> 255, clipped, as 8-bit PGM."""
    if top_db <= floor_db:
        raise DataError("top_db must exceed floor_db")
    scaled = (np.asarray(m, dtype=np.float64) - floor_db) / (top_db - floor_db) * 255.0
    write_ppm(GrayImage(np.clip(np.round(scaled), 0, 255).astype(np.uint8)), path)
