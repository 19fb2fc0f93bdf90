"""RIFF/WAVE reader and writer, PCM 16-bit little-endian only.

Stereo input is averaged to mono; samples are scaled by 1/32768 into
[-1, 1].
"""
from __future__ import annotations

import wave

import numpy as np

from ..errors import DataError
from .types import AudioClip

PCM_SCALE = 32768.0


def read_wav(path) -> AudioClip:
    try:
        with wave.open(str(path), "rb") as wf:
            comp = wf.getcomptype()
            if comp != "NONE":
                raise DataError(f"{path}: non-PCM encoding {comp!r}")
            width = wf.getsampwidth()
            if width != 2:
                raise DataError(f"{path}: unsupported bit depth {8 * width}, need 16")
            channels = wf.getnchannels()
            if channels not in (1, 2):
                raise DataError(f"{path}: unsupported channel count {channels}")
            rate = wf.getframerate()
            raw = wf.readframes(wf.getnframes())
    except wave.Error as exc:
        raise DataError(f"{path}: not a valid WAV file: {exc}") from exc
    data = np.frombuffer(raw, dtype="<i2").astype(np.float64) / PCM_SCALE
    if channels == 2:
        data = data.reshape(-1, 2).mean(axis=1)
    return AudioClip(sample_rate=rate, samples=data)


def write_wav(clip: AudioClip, path) -> None:
    pcm = np.clip(np.round(clip.samples * PCM_SCALE), -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(clip.sample_rate)
        wf.writeframes(pcm.tobytes())


def resample_linear(clip: AudioClip, target_rate: int) -> AudioClip:
    """Linear-interpolation resampler; identity when rates already match."""
    if clip.sample_rate == target_rate:
        return clip
    n_out = int(round(len(clip.samples) * target_rate / clip.sample_rate))
    if n_out < 1:
        raise DataError("clip too short to resample")
    t_out = np.arange(n_out) * (clip.sample_rate / target_rate)
    t_in = np.arange(len(clip.samples))
    out = np.interp(t_out, t_in, clip.samples)
    return AudioClip(sample_rate=target_rate, samples=out)
