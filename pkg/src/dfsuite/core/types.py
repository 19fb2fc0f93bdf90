"""Domain types shared by every stage of the pipeline.

All containers are frozen dataclasses: once constructed (and validated)
they are immutable and safe to share across threads.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError

#: Fixed order of the 13 per-video features, matching the feature CSV header.
FEATURE_NAMES: tuple[str, ...] = (
    "cheekbone_height",
    "inter_pupil_distance",
    "blink_count",
    "headpose_x",
    "headpose_y",
    "headpose_z",
    "nose_size",
    "lip_size",
    "contrast",
    "correlation",
    "luminance",
    "chrominance1",
    "chrominance2",
)

N_LANDMARKS = 468

FOURWAY_NAMES = {
    (0, 0): "real-real",
    (0, 1): "real-deepfake",
    (1, 0): "deepfake-real",
    (1, 1): "deepfake-deepfake",
}


def fourway_category(video_label: int, audio_label: int) -> str:
    """Map binary (video, audio) labels to the four-way category name."""
    key = (int(video_label), int(audio_label))
    if key not in FOURWAY_NAMES:
        raise DataError(f"labels must be binary, got {key}")
    return FOURWAY_NAMES[key]


@dataclass(frozen=True)
class LandmarkFrame:
    frame_index: int
    image_width: int
    image_height: int
    points: np.ndarray  # (468, 3) float64, x/y in [0,1] image fractions
    roi_box: tuple[int, int, int, int]  # x0, y0, x1, y1 pixel rectangle

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.shape != (N_LANDMARKS, 3):
            raise DataError(
                f"frame {self.frame_index}: expected {N_LANDMARKS} landmark "
                f"points, got shape {pts.shape}"
            )
        if not np.all(np.isfinite(pts)):
            raise DataError(f"frame {self.frame_index}: non-finite landmark coordinates")
        xy = pts[:, :2]
        if xy.min() < 0.0 or xy.max() > 1.0:
            raise DataError(
                f"frame {self.frame_index}: landmark x/y outside [0, 1]"
            )
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        x0, y0, x1, y1 = self.roi_box
        if not (0 <= x0 < x1 <= self.image_width and 0 <= y0 < y1 <= self.image_height):
            raise DataError(
                f"frame {self.frame_index}: roi_box {self.roi_box} outside "
                f"{self.image_width}x{self.image_height} image"
            )

    def pixel_points(self) -> np.ndarray:
        """Landmark x/y in pixel units, shape (468, 2)."""
        scale = np.array([self.image_width, self.image_height], dtype=np.float64)
        return self.points[:, :2] * scale


@dataclass(frozen=True)
class LandmarkBundle:
    video_id: str
    fps: float
    frame_count: int
    frames: tuple[LandmarkFrame, ...]
    roi_refs: tuple[tuple[int, str], ...] = ()  # (frame_index, path) pairs
    audio_ref: str | None = None

    def __post_init__(self):
        if self.fps <= 0:
            raise DataError(f"{self.video_id}: fps must be positive, got {self.fps}")
        idx = [f.frame_index for f in self.frames]
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise DataError(f"{self.video_id}: frame_index not strictly increasing")
        if self.frame_count != len(self.frames):
            raise DataError(
                f"{self.video_id}: frame_count {self.frame_count} != "
                f"{len(self.frames)} frames"
            )
        known = set(idx)
        for fi, _path in self.roi_refs:
            if fi not in known:
                raise DataError(f"{self.video_id}: roi_ref frame_index {fi} has no frame")

    def frame_by_index(self, frame_index: int) -> LandmarkFrame:
        for f in self.frames:
            if f.frame_index == frame_index:
                return f
        raise DataError(f"{self.video_id}: no frame with index {frame_index}")


@dataclass(frozen=True)
class VideoFeatureVector:
    video_id: str
    values: np.ndarray  # 13 floats in FEATURE_NAMES order
    label: int | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (len(FEATURE_NAMES),):
            raise DataError(
                f"{self.video_id}: expected {len(FEATURE_NAMES)} features, "
                f"got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise DataError(f"{self.video_id}: non-finite feature value")
        if v[FEATURE_NAMES.index("blink_count")] < 0:
            raise DataError(f"{self.video_id}: negative blink_count")
        if v[FEATURE_NAMES.index("contrast")] < 0:
            raise DataError(f"{self.video_id}: negative contrast")
        if self.label is not None and self.label not in (0, 1):
            raise DataError(f"{self.video_id}: label must be 0 or 1")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __getitem__(self, name: str) -> float:
        return float(self.values[FEATURE_NAMES.index(name)])


@dataclass(frozen=True)
class Dataset:
    """Feature-table container: one row per video, optional binary labels."""

    rows: tuple[VideoFeatureVector, ...]

    def __post_init__(self):
        ids = [r.video_id for r in self.rows]
        if len(set(ids)) != len(ids):
            raise DataError("duplicate video_id in dataset")

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def class_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for r in self.rows:
            if r.label is not None:
                counts[r.label] = counts.get(r.label, 0) + 1
        return counts

    def matrix(self) -> np.ndarray:
        """(n, 13) feature matrix in FEATURE_NAMES order."""
        return np.array([r.values for r in self.rows], dtype=np.float64)

    def labels(self) -> np.ndarray:
        if any(r.label is None for r in self.rows):
            raise DataError("dataset has unlabeled rows")
        return np.array([r.label for r in self.rows], dtype=np.int64)


@dataclass(frozen=True)
class AudioClip:
    sample_rate: int
    samples: np.ndarray  # mono float64 in [-1, 1]

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.float64)
        if s.ndim != 1:
            raise DataError(f"audio samples must be 1-D, got shape {s.shape}")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate


@dataclass(frozen=True)
class GrayImage:
    pixels: np.ndarray  # (h, w) uint8

    def __post_init__(self):
        p = np.asarray(self.pixels, dtype=np.uint8)
        if p.ndim != 2:
            raise DataError(f"gray image must be 2-D, got shape {p.shape}")
        p.setflags(write=False)
        object.__setattr__(self, "pixels", p)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class RgbImage:
    pixels: np.ndarray  # (h, w, 3) uint8

    def __post_init__(self):
        p = np.asarray(self.pixels, dtype=np.uint8)
        if p.ndim != 3 or p.shape[2] != 3:
            raise DataError(f"rgb image must be (h, w, 3), got shape {p.shape}")
        p.setflags(write=False)
        object.__setattr__(self, "pixels", p)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]
