"""Shared synthetic fixtures: landmark frames, bundles, ROI images, WAVs."""
from __future__ import annotations

import os

import numpy as np
import pytest

from dfsuite import landmarks as lm
from dfsuite.core import (
    AudioClip,
    LandmarkBundle,
    LandmarkFrame,
    RgbImage,
    write_landmark_bundle,
    write_ppm,
    write_wav,
)
from dfsuite.pose import default_camera_matrix, project_points, rotation_from_euler, rodrigues_inverse

IMG_W, IMG_H = 640, 480

# normalized (x, y) layout of the landmarks the features consume; eye A is
# the 130/243 set, eye B the 359/463 set
BASE_LAYOUT = {
    lm.NOSE_BASE: (0.50, 0.55),
    lm.NOSE_TIP: (0.50, 0.45),
    lm.MOUTH_LEFT: (0.42, 0.68),
    lm.MOUTH_RIGHT: (0.58, 0.68),
    lm.KITE_LEFT: (0.30, 0.50),
    lm.KITE_RIGHT: (0.70, 0.50),
    lm.KITE_CHIN: (0.50, 0.80),
    33: (0.34, 0.40),
    263: (0.66, 0.40),
    # eye A corners
    130: (0.35, 0.40),
    243: (0.45, 0.40),
    # eye B corners
    359: (0.65, 0.40),
    463: (0.55, 0.40),
}
_EYE_A_X = (0.36, 0.38, 0.40, 0.42, 0.44)
_EYE_B_X = (0.64, 0.62, 0.60, 0.58, 0.56)
_LID_UP_Y, _LID_DOWN_Y = 0.385, 0.415

for x, (up, down) in zip(_EYE_A_X, ((161, 110), (160, 24), (159, 23), (158, 22), (157, 26))):
    BASE_LAYOUT[up] = (x, _LID_UP_Y)
    BASE_LAYOUT[down] = (x, _LID_DOWN_Y)
for x, (up, down) in zip(_EYE_B_X, ((388, 339), (387, 254), (386, 253), (385, 252), (384, 256))):
    BASE_LAYOUT[up] = (x, _LID_UP_Y)
    BASE_LAYOUT[down] = (x, _LID_DOWN_Y)
BASE_LAYOUT[145] = (0.40, _LID_DOWN_Y)  # lower-lid center under 159
BASE_LAYOUT[374] = (0.60, _LID_DOWN_Y)  # lower-lid center under 386


def base_points() -> np.ndarray:
    """468 x 3 points: documented layout for used indices, a grid elsewhere."""
    pts = np.zeros((468, 3))
    grid = np.linspace(0.1, 0.9, 468)
    pts[:, 0] = grid
    pts[:, 1] = 0.1 + 0.8 * ((np.arange(468) * 37) % 468) / 468.0
    for idx, (x, y) in BASE_LAYOUT.items():
        pts[idx, 0], pts[idx, 1] = x, y
    return pts


def make_frame(
    frame_index: int = 0,
    points: np.ndarray | None = None,
    eyes_closed: bool = False,
    pose_deg: tuple[float, float, float] | None = None,
    translation=(0.0, 0.0, 2000.0),
    width: int = IMG_W,
    height: int = IMG_H,
) -> LandmarkFrame:
    pts = base_points() if points is None else points.copy()
    if eyes_closed:
        for up, down in (
            (161, 110), (160, 24), (159, 23), (158, 22), (157, 26),
            (388, 339), (387, 254), (386, 253), (385, 252), (384, 256),
        ):
            pts[down] = pts[up]
        pts[145] = pts[159]
        pts[374] = pts[386]
    if pose_deg is not None:
        camera = default_camera_matrix(width, height)
        rvec = rodrigues_inverse(rotation_from_euler(*pose_deg))
        image_pts = project_points(lm.POSE_MODEL_POINTS, rvec, translation, camera)
        for mesh_idx, (u, v) in zip(lm.POSE_MESH_INDICES, image_pts):
            pts[mesh_idx, 0] = u / width
            pts[mesh_idx, 1] = v / height
    return LandmarkFrame(
        frame_index=frame_index,
        image_width=width,
        image_height=height,
        points=pts,
        roi_box=(width // 4, height // 4, 3 * width // 4, 5 * height // 6),
    )


def textured_roi(rng: np.random.Generator, size=(64, 64)) -> RgbImage:
    px = rng.integers(0, 256, size=(size[0], size[1], 3), dtype=np.uint8)
    return RgbImage(px)


def make_bundle_dir(
    tmp_path,
    video_id: str,
    n_frames: int = 12,
    fps: float = 30.0,
    rng: np.random.Generator | None = None,
    with_audio: bool = True,
    blink_frames: tuple[int, ...] = (),
    yaw_wobble: float = 0.0,
) -> str:
    """Write a bundle JSON + ROI PPMs (+ WAV) into tmp_path; returns JSON path."""
    rng = rng or np.random.default_rng(7)
    frames = []
    roi_refs = []
    out_dir = tmp_path / video_id
    out_dir.mkdir(exist_ok=True)
    for i in range(n_frames):
        yaw = yaw_wobble if (yaw_wobble and i % 2) else (-yaw_wobble if yaw_wobble else 0.0)
        frame = make_frame(
            frame_index=i,
            eyes_closed=i in blink_frames,
            pose_deg=(3.0, yaw, 0.0),
        )
        frames.append(frame)
        if i % 5 == 0:
            roi = textured_roi(rng, (frame.roi_box[3] - frame.roi_box[1], frame.roi_box[2] - frame.roi_box[0]))
            rel = f"{video_id}/roi_{i:04d}.ppm"
            write_ppm(roi, tmp_path / rel)
            roi_refs.append((i, rel))
    audio_ref = None
    if with_audio:
        t = np.arange(32000) / 16000.0
        clip = AudioClip(16000, 0.4 * np.sin(2 * np.pi * 440.0 * t))
        audio_ref = f"{video_id}/audio.wav"
        write_wav(clip, tmp_path / audio_ref)
    bundle = LandmarkBundle(
        video_id=video_id,
        fps=fps,
        frame_count=n_frames,
        frames=tuple(frames),
        roi_refs=tuple(roi_refs),
        audio_ref=audio_ref,
    )
    path = tmp_path / f"{video_id}.json"
    write_landmark_bundle(bundle, path)
    return str(path)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
