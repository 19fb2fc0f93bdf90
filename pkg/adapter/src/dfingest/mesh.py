"""Static 468-point face template mapped into a detection box.

This adapter version does not run a learned mesh model (see the project
notes on which inference path a given adapter build uses); it places a
canonical face template into the detected box. Every downstream named
index (eyes, pupils, nose, mouth, cheekbone kite, pose mesh) lands at an
anatomically plausible position, so geometric feature extraction behaves
sensibly on controlled footage while the bundle schema stays identical
to what a learned-mesh build would emit.
"""
from __future__ import annotations

import numpy as np

from dfsuite import landmarks as lm
from dfsuite.core import N_LANDMARKS

# Named landmark positions in face-box-relative coordinates (0..1).
_NAMED = {
    lm.NOSE_TIP: (0.50, 0.45),
    lm.NOSE_BASE: (0.50, 0.55),
    lm.KITE_CHIN: (0.50, 0.92),
    lm.KITE_LEFT: (0.12, 0.52),
    lm.KITE_RIGHT: (0.88, 0.52),
    lm.MOUTH_LEFT: (0.38, 0.72),
    lm.MOUTH_RIGHT: (0.62, 0.72),
    lm.LEFT_PUPIL_TOP: (0.35, 0.345),
    lm.LEFT_PUPIL_BOTTOM: (0.35, 0.375),
    lm.RIGHT_PUPIL_TOP: (0.65, 0.345),
    lm.RIGHT_PUPIL_BOTTOM: (0.65, 0.375),
    # pose mesh outer eye corners
    33: (0.28, 0.36),
    263: (0.72, 0.36),
}


def _eye(template, eye: lm.EyeLandmarks, cx: float):
    half_span = 0.07
    outer = cx - half_span if cx < 0.5 else cx + half_span
    inner = cx + half_span if cx < 0.5 else cx - half_span
    template[eye.corner_outer] = (outer, 0.36)
    template[eye.corner_inner] = (inner, 0.36)
    xs = np.linspace(outer, inner, len(eye.lid_pairs) + 2)[1:-1]
    for x, (upper, lower) in zip(xs, eye.lid_pairs):
        template[upper] = (x, 0.345)
        template[lower] = (x, 0.375)


def _build_template() -> np.ndarray:
    template = np.zeros((N_LANDMARKS, 2))
    # filler lattice over the face oval for all unnamed indices
    side = int(np.ceil(np.sqrt(N_LANDMARKS)))
    for i in range(N_LANDMARKS):
        template[i] = (
            0.08 + 0.84 * ((i % side) / (side - 1)),
            0.05 + 0.90 * ((i // side) / (side - 1)),
        )
    _eye(template, lm.RIGHT_EYE, 0.35)
    _eye(template, lm.LEFT_EYE, 0.65)
    for idx, pos in _NAMED.items():
        template[idx] = pos
    return template


FACE_TEMPLATE = _build_template()
FACE_TEMPLATE.setflags(write=False)


def template_in_box(
    box: tuple[int, int, int, int], image_width: int, image_height: int
) -> np.ndarray:
    """Template points as image-normalized (x, y, z) rows, z = 0."""
    x0, y0, x1, y1 = box
    pts = np.zeros((N_LANDMARKS, 3))
    pts[:, 0] = (x0 + FACE_TEMPLATE[:, 0] * (x1 - x0)) / image_width
    pts[:, 1] = (y0 + FACE_TEMPLATE[:, 1] * (y1 - y0)) / image_height
    return pts
