"""Per-video feature extraction: one 13-value vector per landmark bundle.

Aggregation across sampled frames: mean for the distance features
(cheekbone height, inter-pupil distance, nose, lip), std-dev for the
head-pose angles, raw count for blinks, pixel means for texture/color.
Blink counting uses every frame; the rest honor the sampling stride.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import geometry, texture
from .core.bundle import resolve_roi_path
from .core.ppm import read_ppm
from .core.types import (
    FEATURE_NAMES,
    GrayImage,
    LandmarkBundle,
    RgbImage,
    VideoFeatureVector,
)
from .errors import DataError, DegenerateInputError, NumericError

DEFAULT_STRIDE = 5


@dataclass
class ExtractionLog:
    video_id: str = ""
    degenerate_texture_blocks: int = 0
    pnp_failures: int = 0
    notes: list[str] = field(default_factory=list)


def _roi_images(bundle: LandmarkBundle, bundle_path) -> list[tuple[int, GrayImage, RgbImage | None]]:
    out = []
    for frame_index, rel in bundle.roi_refs:
        img = read_ppm(resolve_roi_path(bundle_path, rel))
        if isinstance(img, RgbImage):
            out.append((frame_index, texture.to_gray(img), img))
        else:
            out.append((frame_index, img, None))
    return out


def extract_video_features(
    bundle: LandmarkBundle,
    bundle_path,
    stride: int = DEFAULT_STRIDE,
    label: int | None = None,
    gray_levels: int = texture.DEFAULT_GRAY_LEVELS,
) -> tuple[VideoFeatureVector, ExtractionLog]:
    log = ExtractionLog(video_id=bundle.video_id)
    frames = bundle.frames[::stride]
    if not frames:
        raise DataError(f"{bundle.video_id}: no frames after stride {stride}")

    cheek, ipd, nose, lip = [], [], [], []
    for f in frames:
        try:
            cheek.append(geometry.cheekbone_height(f).H)
        except NumericError as exc:
            log.notes.append(f"frame {f.frame_index}: kite degenerate ({exc})")
        ipd.append(geometry.inter_pupil_distance(f))
        nose.append(geometry.nose_size(f))
        lip.append(geometry.lip_size(f))
    if not cheek:
        raise NumericError(f"{bundle.video_id}: cheekbone kite degenerate in every sampled frame")

    blink_count = geometry.count_blinks(bundle)
    hp_x, hp_y, hp_z = geometry.headpose_features(bundle, stride=stride)

    rois = _roi_images(bundle, bundle_path)
    if not rois:
        raise DataError(f"{bundle.video_id}: bundle has no roi_refs; texture features need ROIs")
    contrasts, correlations = [], []
    lums, c1s, c2s = [], [], []
    for frame_index, gray, rgb in rois:
        try:
            con, cor, degen = texture.blockwise_texture(gray, gray_levels)
            contrasts.append(con)
            correlations.append(cor)
            log.degenerate_texture_blocks += degen
        except DegenerateInputError as exc:
            log.notes.append(f"roi frame {frame_index}: {exc}")
        if rgb is not None:
            l, c1, c2 = texture.skin_tone_features(rgb)
        else:
            # grayscale ROI: chrominances are identically zero
            l, c1, c2 = float(gray.pixels.mean()), 0.0, 0.0
        lums.append(l)
        c1s.append(c1)
        c2s.append(c2)
    if not correlations:
        raise DegenerateInputError(
            f"{bundle.video_id}: texture correlation degenerate in every ROI"
        )

    values = {
        "cheekbone_height": float(np.mean(cheek)),
        "inter_pupil_distance": float(np.mean(ipd)),
        "blink_count": float(blink_count),
        "headpose_x": hp_x,
        "headpose_y": hp_y,
        "headpose_z": hp_z,
        "nose_size": float(np.mean(nose)),
        "lip_size": float(np.mean(lip)),
        "contrast": float(np.mean(contrasts)),
        "correlation": float(np.mean(correlations)),
        "luminance": float(np.mean(lums)),
        "chrominance1": float(np.mean(c1s)),
        "chrominance2": float(np.mean(c2s)),
    }
    vec = VideoFeatureVector(
        video_id=bundle.video_id,
        values=[values[name] for name in FEATURE_NAMES],
        label=label,
    )
    return vec, log
