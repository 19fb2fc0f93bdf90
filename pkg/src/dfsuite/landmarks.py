"""Face-mesh landmark index tables used by the geometric features.

Indices refer to the 468-point face mesh topology. The eye tables pair
upper-lid points with the lower-lid point beneath them (outer to inner
corner order); the pairing is a documented convention and can be swapped
out by passing a different EyeLandmarks instance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NOSE_BASE = 1
NOSE_TIP = 197
MOUTH_LEFT = 61
MOUTH_RIGHT = 291

# pupil centers: midpoint of center-top / center-bottom lid landmarks
LEFT_PUPIL_TOP, LEFT_PUPIL_BOTTOM = 159, 145
RIGHT_PUPIL_TOP, RIGHT_PUPIL_BOTTOM = 386, 374

# cheekbone kite: left/right cheekbones, mid-top of nose, chin
KITE_LEFT = 234
KITE_RIGHT = 454
KITE_MID_TOP = 197
KITE_CHIN = 152


@dataclass(frozen=True)
class EyeLandmarks:
    corner_outer: int
    corner_inner: int
    lid_pairs: tuple[tuple[int, int], ...]  # (upper, lower), outer to inner


RIGHT_EYE = EyeLandmarks(
    corner_outer=130,
    corner_inner=243,
    lid_pairs=((161, 110), (160, 24), (159, 23), (158, 22), (157, 26)),
)

LEFT_EYE = EyeLandmarks(
    corner_outer=359,
    corner_inner=463,
    lid_pairs=((388, 339), (387, 254), (386, 253), (385, 252), (384, 256)),
)

# 6-point correspondence set for the pose solver: mesh index -> generic
# 3-D face model coordinates (arbitrary model units, nose tip at origin).
# Axes follow the image convention: x right, y down, z away from the
# camera, so an identity-pose projection renders the face upright.
POSE_MESH_INDICES = (1, 152, 33, 263, 61, 291)

POSE_MODEL_POINTS = np.array(
    [
        [0.0, 0.0, 0.0],        # nose tip
        [0.0, 330.0, -65.0],    # chin
        [-225.0, -170.0, -135.0],  # left eye outer corner
        [225.0, -170.0, -135.0],   # right eye outer corner
        [-150.0, 150.0, -125.0],  # mouth left corner
        [150.0, 150.0, -125.0],   # mouth right corner
    ]
)
