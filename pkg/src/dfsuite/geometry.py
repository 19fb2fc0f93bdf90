"""Geometric facial features from landmark frames.

All distances are in pixel units (normalized landmark coordinates are
scaled by the frame's image size first). Per-video aggregation lives in
features.py; everything here is per-frame except blink counting.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import landmarks as lm
from .core.types import LandmarkBundle, LandmarkFrame
from .errors import NumericError
from .pose import HeadPose, default_camera_matrix, solve_pnp

#: EAR below this means the eye is closed.
BLINK_THRESHOLD = 0.2
#: A closed run must persist this many consecutive frames to count.
BLINK_MIN_RUN = 2

_DEGENERATE_EPS = 1e-9
_COS_TOL = 1e-9


@dataclass(frozen=True)
class EyeState:
    ear: float
    is_closed: bool


@dataclass(frozen=True)
class KiteMeasure:
    """Distances and angles of the cheekbone kite (all pixel units/degrees)."""

    LR: float
    MTR: float
    MTC: float
    RC: float
    angle_R: float
    angle_x: float
    angle_y: float
    h: float
    H: float


def euclid(p, q) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def nose_size(frame: LandmarkFrame) -> float:
    pts = frame.pixel_points()
    return euclid(pts[lm.NOSE_BASE], pts[lm.NOSE_TIP])


def lip_size(frame: LandmarkFrame) -> float:
    pts = frame.pixel_points()
    return euclid(pts[lm.MOUTH_LEFT], pts[lm.MOUTH_RIGHT])


def inter_pupil_distance(frame: LandmarkFrame) -> float:
    pts = frame.pixel_points()
    left = (pts[lm.LEFT_PUPIL_TOP] + pts[lm.LEFT_PUPIL_BOTTOM]) / 2.0
    right = (pts[lm.RIGHT_PUPIL_TOP] + pts[lm.RIGHT_PUPIL_BOTTOM]) / 2.0
    return euclid(left, right)


def eye_aspect_ratio(
    frame: LandmarkFrame,
    eye: str = "right",
    threshold: float = BLINK_THRESHOLD,
) -> EyeState:
    """Mean vertical lid gap over the horizontal corner span."""
    table = {"left": lm.LEFT_EYE, "right": lm.RIGHT_EYE}[eye]
    pts = frame.pixel_points()
    horizontal = euclid(pts[table.corner_outer], pts[table.corner_inner])
    if horizontal < _DEGENERATE_EPS:
        raise NumericError(
            f"frame {frame.frame_index}: degenerate {eye} eye (zero corner span)"
        )
    vertical = np.mean([euclid(pts[u], pts[l]) for u, l in table.lid_pairs])
    ear = float(vertical / horizontal)
    return EyeState(ear=ear, is_closed=ear < threshold)


def count_blinks_from_trace(
    ears, threshold: float = BLINK_THRESHOLD, min_run: int = BLINK_MIN_RUN
) -> int:
    """Number of closed-eye runs lasting at least `min_run` frames."""
    blinks = 0
    run = 0
    for ear in ears:
        if ear < threshold:
            run += 1
            if run == min_run:
                blinks += 1
        else:
            run = 0
    return blinks


def count_blinks(
    bundle: LandmarkBundle,
    threshold: float = BLINK_THRESHOLD,
    min_run: int = BLINK_MIN_RUN,
) -> int:
    """Blink count over the whole frame sequence (mean of both eyes' EAR)."""
    if len(bundle.frames) < 2:
        raise NumericError(f"{bundle.video_id}: need at least 2 frames to count blinks")
    ears = [
        (eye_aspect_ratio(f, "left", threshold).ear + eye_aspect_ratio(f, "right", threshold).ear)
        / 2.0
        for f in bundle.frames
    ]
    return count_blinks_from_trace(ears, threshold, min_run)


def kite_from_points(mid_top, chin, right, left) -> KiteMeasure:
    """Cheekbone-height geometry from the four kite vertices (pixel coords).

    Uses the law of cosines for the angles at the right cheekbone (R,
    between LR and MTR) and at the mid-top of the nose (x, between MTR
    and MTC), then the law of sines for the partial height h; the
    cheekbone height is H = MTC - h.
    """
    LR = euclid(left, right)
    MTR = euclid(mid_top, right)
    MTC = euclid(mid_top, chin)
    RC = euclid(right, chin)
    if min(LR, MTR, MTC, RC) < _DEGENERATE_EPS:
        raise NumericError("degenerate kite: coincident vertices")
    cos_R = (LR**2 + MTR**2 - MTC**2) / (2.0 * LR * MTR)
    cos_x = (MTR**2 + MTC**2 - RC**2) / (2.0 * MTR * MTC)
    for name, c in (("R", cos_R), ("x", cos_x)):
        if abs(c) > 1.0 + _COS_TOL:
            raise NumericError(f"degenerate kite: cos {name} = {c:.6g} outside [-1, 1]")
    cos_R = min(1.0, max(-1.0, cos_R))
    cos_x = min(1.0, max(-1.0, cos_x))
    angle_R = math.degrees(math.acos(cos_R))
    angle_x = math.degrees(math.acos(cos_x))
    angle_y = 180.0 - (angle_x + angle_R)
    sin_y = math.sin(math.radians(angle_y))
    if abs(sin_y) < _DEGENERATE_EPS:
        raise NumericError("degenerate kite: sin y ~ 0")
    h = math.sin(math.radians(angle_R)) * MTR / sin_y
    return KiteMeasure(
        LR=LR, MTR=MTR, MTC=MTC, RC=RC,
        angle_R=angle_R, angle_x=angle_x, angle_y=angle_y,
        h=h, H=MTC - h,
    )


def cheekbone_height(frame: LandmarkFrame) -> KiteMeasure:
    pts = frame.pixel_points()
    return kite_from_points(
        pts[lm.KITE_MID_TOP], pts[lm.KITE_CHIN], pts[lm.KITE_RIGHT], pts[lm.KITE_LEFT]
    )


def frame_head_pose(frame: LandmarkFrame) -> HeadPose:
    """Pose of one frame from the 6-point correspondence set."""
    pts = frame.pixel_points()
    image_points = pts[list(lm.POSE_MESH_INDICES)]
    camera = default_camera_matrix(frame.image_width, frame.image_height)
    return solve_pnp(lm.POSE_MODEL_POINTS, image_points, camera)


def headpose_features(bundle: LandmarkBundle, stride: int = 1) -> tuple[float, float, float]:
    """Population std-dev of (pitch, yaw, roll) across sampled frames."""
    frames = bundle.frames[::stride]
    angles = []
    for f in frames:
        try:
            pose = frame_head_pose(f)
        except NumericError:
            continue
        angles.append((pose.pitch, pose.yaw, pose.roll))
    if len(angles) < 2:
        raise NumericError(
            f"{bundle.video_id}: need at least 2 usable frames for head-pose features"
        )
    arr = np.asarray(angles)
    std = arr.std(axis=0)  # population std-dev
    return float(std[0]), float(std[1]), float(std[2])
