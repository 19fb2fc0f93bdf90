"""Face localization with a pluggable backend.

A Haar cascade is used when a cascade XML path is supplied (the
classical detector the pipeline was designed around). Without one, a
brightness-contrast heuristic finds the dominant foreground blob; it is
good enough for controlled footage and for fixture clips, and keeps the
adapter dependency-light. Either backend returns the same
(box, confidence) contract, so they are interchangeable.
"""
from __future__ import annotations

from dataclasses import dataclass

import cv2
import numpy as np


@dataclass(frozen=True)
class Detection:
    box: tuple[int, int, int, int]  # x0, y0, x1, y1 in pixels
    confidence: float


class HaarDetector:
    def __init__(self, cascade_path: str):
        self._cascade = cv2.CascadeClassifier(cascade_path)
        if self._cascade.empty():
            raise ValueError(f"could not load cascade from {cascade_path}")

    def detect(self, frame_bgr: np.ndarray) -> Detection | None:
        gray = cv2.cvtColor(frame_bgr, cv2.COLOR_BGR2GRAY)
        faces = self._cascade.detectMultiScale(gray, scaleFactor=1.1, minNeighbors=4)
        if len(faces) == 0:
            return None
        x, y, w, h = max(faces, key=lambda f: f[2] * f[3])
        # cascades expose no score; report the area fraction as a proxy
        conf = min(1.0, (w * h) / (0.05 * gray.shape[0] * gray.shape[1]))
        return Detection(box=(int(x), int(y), int(x + w), int(y + h)), confidence=conf)


class BlobDetector:
    """Largest bright connected region, scored by how much it stands out.

    Confidence is the fraction of above-threshold pixels falling inside
    the winning component's bounding box, so a clean single subject
    scores near 1 and cluttered or empty frames score low.
    """

    def __init__(self, min_area_fraction: float = 0.01, min_contrast: float = 10.0):
        self.min_area_fraction = min_area_fraction
        self.min_contrast = min_contrast

    def detect(self, frame_bgr: np.ndarray) -> Detection | None:
        gray = cv2.cvtColor(frame_bgr, cv2.COLOR_BGR2GRAY)
        h, w = gray.shape
        if gray.std() < self.min_contrast:  # nothing stands out
            return None
        thresh = gray.mean() + 0.5 * gray.std()
        mask = (gray > thresh).astype(np.uint8)
        if mask.sum() < self.min_area_fraction * h * w:
            return None
        n, labels, stats, _ = cv2.connectedComponentsWithStats(mask)
        if n < 2:
            return None
        best = 1 + int(np.argmax(stats[1:, cv2.CC_STAT_AREA]))
        x, y, bw, bh, area = stats[best]
        if area < self.min_area_fraction * h * w:
            return None
        conf = float(area / max(int(mask.sum()), 1))
        return Detection(box=(int(x), int(y), int(x + bw), int(y + bh)), confidence=conf)


def make_detector(cascade_path: str | None = None):
    if cascade_path:
        return HaarDetector(cascade_path)
    return BlobDetector()
