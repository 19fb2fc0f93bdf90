"""Shared domain types, codecs, and the deterministic PRNG contract."""

from .bundle import read_landmark_bundle, resolve_roi_path, write_landmark_bundle
from .featcsv import CSV_HEADER, read_feature_csv, write_feature_csv
from .ppm import read_ppm, write_ppm
from .rng import RNG_ALGORITHM, make_rng, spawn
from .types import (
    FEATURE_NAMES,
    FOURWAY_NAMES,
    N_LANDMARKS,
    AudioClip,
    Dataset,
    GrayImage,
    LandmarkBundle,
    LandmarkFrame,
    RgbImage,
    VideoFeatureVector,
    fourway_category,
)
from .wav import read_wav, resample_linear, write_wav

__all__ = [
    "AudioClip",
    "CSV_HEADER",
    "Dataset",
    "FEATURE_NAMES",
    "FOURWAY_NAMES",
    "GrayImage",
    "LandmarkBundle",
    "LandmarkFrame",
    "N_LANDMARKS",
    "RgbImage",
    "RNG_ALGORITHM",
    "VideoFeatureVector",
    "fourway_category",
    "make_rng",
    "read_feature_csv",
    "read_landmark_bundle",
    "read_ppm",
    "read_wav",
    "resample_linear",
    "resolve_roi_path",
    "spawn",
    "write_feature_csv",
    "write_landmark_bundle",
    "write_ppm",
    "write_wav",
]
