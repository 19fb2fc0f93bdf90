"""Mel-spectrogram pipeline: STFT over an internal radix-2 FFT, HTK mel
conversions, triangular filter-bank construction, and dB scaling.

Defaults (all overridable): 16 kHz, frame 2048, hop 512, Hann window,
128 bands over 0..sr/2, -80 dB floor, mel projection before dB.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core.types import AudioClip
from .core.wav import resample_linear
from .errors import DataError, NumericError

MEL_SCALE = 2595.0
MEL_BREAK_HZ = 700.0

DEFAULT_FLOOR_DB = -80.0


def hz_to_mel(f):
    """HTK mel scale: m = 2595 * log10(1 + f/700)."""
    f = np.asarray(f, dtype=np.float64)
    if np.any(f < 0):
        raise DataError("frequency must be nonnegative")
    return MEL_SCALE * np.log10(1.0 + f / MEL_BREAK_HZ)


def mel_to_hz(m):
    """Inverse mel scale: f = 700 * (10^(m/2595) - 1)."""
    m = np.asarray(m, dtype=np.float64)
    if np.any(m < 0):
        raise DataError("mel value must be nonnegative")
    return MEL_BREAK_HZ * (10.0 ** (m / MEL_SCALE) - 1.0)


# -- FFT -----------------------------------------------------------------

def fft_radix2(x: np.ndarray) -> np.ndarray:
    """Iterative Cooley-Tukey FFT along the last axis; length must be 2^k."""
    x = np.asarray(x)
    n = x.shape[-1]
    if n == 0 or n & (n - 1):
        raise DataError(f"FFT length must be a power of two, got {n}")
    levels = n.bit_length() - 1
    # bit-reversal permutation
    rev = np.zeros(n, dtype=np.int64)
    for i in range(1, n):
        rev[i] = (rev[i >> 1] >> 1) | ((i & 1) << (levels - 1))
    y = x[..., rev].astype(np.complex128)
    size = 2
    while size <= n:
        half = size // 2
        tw = np.exp(-2j * np.pi * np.arange(half) / size)
        shaped = y.reshape(*y.shape[:-1], n // size, size)
        even = shaped[..., :half].copy()
        odd = shaped[..., half:] * tw
        shaped[..., :half] = even + odd
        shaped[..., half:] = even - odd
        size *= 2
    return y


# -- STFT ----------------------------------------------------------------

@dataclass(frozen=True)
class Stft:
    frame_size: int
    hop: int
    window: str
    magnitudes: np.ndarray  # (frame_size//2 + 1, n_frames)


def _window(name: str, n: int) -> np.ndarray:
    if name == "hann":
        return 0.5 * (1.0 - np.cos(2.0 * np.pi * np.arange(n) / n))
    if name == "rect":
        return np.ones(n)
    raise DataError(f"unknown window {name!r}")


def stft(clip: AudioClip, frame_size: int = 2048, hop: int = 512, window: str = "hann") -> Stft:
    if frame_size & (frame_size - 1):
        raise DataError(f"frame_size must be a power of two, got {frame_size}")
    if hop > frame_size or hop < 1:
        raise DataError(f"hop must be in [1, frame_size], got {hop}")
    x = clip.samples
    if len(x) < frame_size:
        raise DataError(f"clip ({len(x)} samples) shorter than one frame ({frame_size})")
    n_frames = 1 + (len(x) - frame_size) // hop
    idx = np.arange(frame_size)[None, :] + hop * np.arange(n_frames)[:, None]
    frames = x[idx] * _window(window, frame_size)[None, :]
    spec = fft_radix2(frames)[:, : frame_size // 2 + 1]
    return Stft(frame_size=frame_size, hop=hop, window=window, magnitudes=np.abs(spec).T)


# -- dB scaling ----------------------------------------------------------

def amplitude_to_db(mag: np.ndarray, floor_db: float = DEFAULT_FLOOR_DB, ref: float | None = None) -> np.ndarray:
    """20*log10(mag/ref) clipped below at floor_db; ref defaults to max(mag).

    An all-zero matrix maps to uniform floor_db.
    """
    mag = np.asarray(mag, dtype=np.float64)
    if np.any(mag < 0):
        raise DataError("magnitudes must be nonnegative")
    if ref is None:
        ref = float(mag.max()) if mag.size else 1.0
    if ref <= 0.0:
        return np.full_like(mag, floor_db)
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(mag / ref)
    return np.maximum(db, floor_db)


# -- Mel filter bank -----------------------------------------------------

@dataclass(frozen=True)
class MelFilterBank:
    n_bands: int
    sample_rate: int
    frame_size: int
    weights: np.ndarray  # (n_bands, frame_size//2 + 1)
    band_edges_hz: np.ndarray  # n_bands + 2 edge frequencies

    @property
    def center_bins(self) -> np.ndarray:
        return np.argmax(self.weights, axis=1)


def build_mel_filter_bank(
    n_bands: int,
    sample_rate: int,
    frame_size: int,
    fmin: float = 0.0,
    fmax: float | None = None,
) -> MelFilterBank:
    """Triangular filters with unit peaks on rounded FFT-bin centers.

    Construction: mel-space endpoints for [fmin, fmax], n_bands + 2
    equally spaced mel points, back to Hz, rounded to the nearest FFT
    bin, then a 0->1->0 triangle across each consecutive bin triple.
    Adjacent points that round to the same bin are an error (the band
    count is too high for the FFT resolution).
    """
    if fmax is None:
        fmax = sample_rate / 2.0
    if not (0 <= fmin < fmax <= sample_rate / 2.0):
        raise DataError(f"need 0 <= fmin < fmax <= sr/2, got fmin={fmin} fmax={fmax}")
    if n_bands < 1:
        raise DataError(f"n_bands must be >= 1, got {n_bands}")
    n_bins = frame_size // 2 + 1
    mel_points = np.linspace(hz_to_mel(fmin), hz_to_mel(fmax), n_bands + 2)
    hz_points = mel_to_hz(mel_points)
    bins = np.round(hz_points * frame_size / sample_rate).astype(np.int64)
    for k in range(len(bins) - 1):
        if bins[k + 1] <= bins[k]:
            raise NumericError(
                f"filter-bank bin collision at band edge {k}: mel points "
                f"{mel_points[k]:.3f} and {mel_points[k + 1]:.3f} both round to bin {bins[k]}"
            )
    weights = np.zeros((n_bands, n_bins))
    for b in range(n_bands):
        left, center, right = bins[b], bins[b + 1], bins[b + 2]
        up = np.arange(left, center + 1)
        weights[b, up] = (up - left) / (center - left)
        down = np.arange(center, right + 1)
        weights[b, down] = (right - down) / (right - center)
        weights[b, center] = 1.0
    return MelFilterBank(
        n_bands=n_bands,
        sample_rate=sample_rate,
        frame_size=frame_size,
        weights=weights,
        band_edges_hz=hz_points,
    )


# -- Full pipeline -------------------------------------------------------

@dataclass(frozen=True)
class MelParams:
    sample_rate: int = 16000
    frame_size: int = 2048
    hop: int = 512
    window: str = "hann"
    n_bands: int = 128
    fmin: float = 0.0
    fmax: float | None = None
    floor_db: float = DEFAULT_FLOOR_DB
    db_first: bool = False  # apply dB to the spectrogram before mel projection


@dataclass(frozen=True)
class MelSpectrogram:
    values: np.ndarray  # (n_bands, n_frames) in dB
    params: MelParams


def mel_spectrogram(clip: AudioClip, params: MelParams = MelParams(), ref: float | None = None) -> MelSpectrogram:
    """Filter bank times power spectrogram, then dB (default order).

    With db_first=True the paper's literal step order is used instead:
    the spectrogram is dB-scaled first and the filter bank is applied to
    the dB matrix.
    """
    if clip.sample_rate != params.sample_rate:
        clip = resample_linear(clip, params.sample_rate)
    spec = stft(clip, params.frame_size, params.hop, params.window)
    bank = build_mel_filter_bank(
        params.n_bands, params.sample_rate, params.frame_size, params.fmin, params.fmax
    )
    if params.db_first:
        db = amplitude_to_db(spec.magnitudes, params.floor_db, ref)
        row_sums = bank.weights.sum(axis=1, keepdims=True)
        values = (bank.weights @ db) / np.maximum(row_sums, 1e-300)
        values = np.maximum(values, params.floor_db)
    else:
        power = spec.magnitudes**2
        mel_power = bank.weights @ power
        # sqrt puts the matrix back on an amplitude scale, so the shared
        # 20*log10 dB conversion yields 10*log10 of the mel power
        values = amplitude_to_db(np.sqrt(mel_power), params.floor_db, None if ref is None else np.sqrt(ref))
    return MelSpectrogram(values=values, params=params)
