"""Binary PPM (P6) / PGM (P5) codec, 8-bit maxval 255 only.

Netpbm was chosen for ROI images because it parses with no dependencies
in any language.
"""
from __future__ import annotations

import numpy as np

from ..errors import DataError
from .types import GrayImage, RgbImage


def _read_header_token(buf: bytes, pos: int) -> tuple[bytes, int]:
    # skip whitespace and '#' comment lines
    n = len(buf)
    while pos < n:
        c = buf[pos : pos + 1]
        if c == b"#":
            while pos < n and buf[pos : pos + 1] != b"\n":
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not buf[pos : pos + 1].isspace():
        pos += 1
    if start == pos:
        raise DataError("truncated netpbm header")
    return buf[start:pos], pos


def read_ppm(path) -> GrayImage | RgbImage:
    """Decode a binary PGM (P5) into GrayImage or PPM (P6) into RgbImage."""
    with open(path, "rb") as fh:
        buf = fh.read()
    magic, pos = _read_header_token(buf, 0)
    if magic not in (b"P5", b"P6"):
        raise DataError(f"{path}: bad magic {magic!r}, expected P5 or P6")
    fields = []
    for _ in range(3):
        tok, pos = _read_header_token(buf, pos)
        if not tok.isdigit():
            raise DataError(f"{path}: non-numeric header field {tok!r}")
        fields.append(int(tok))
    width, height, maxval = fields
    if maxval != 255:
        raise DataError(f"{path}: maxval must be 255, got {maxval}")
    if width <= 0 or height <= 0:
        raise DataError(f"{path}: bad dimensions {width}x{height}")
    pos += 1  # single whitespace byte after maxval
    channels = 1 if magic == b"P5" else 3
    need = width * height * channels
    payload = buf[pos : pos + need]
    if len(payload) != need:
        raise DataError(f"{path}: truncated payload, need {need} bytes, have {len(payload)}")
    arr = np.frombuffer(payload, dtype=np.uint8)
    if channels == 1:
        return GrayImage(arr.reshape(height, width))
    return RgbImage(arr.reshape(height, width, 3))


def write_ppm(img: GrayImage | RgbImage, path) -> None:
    if isinstance(img, GrayImage):
        magic, data = b"P5", img.pixels
    elif isinstance(img, RgbImage):
        magic, data = b"P6", img.pixels
    else:
        raise DataError(f"cannot write {type(img).__name__} as netpbm")
    header = b"%s\n%d %d\n255\n" % (magic, img.width, img.height)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(data.tobytes())
