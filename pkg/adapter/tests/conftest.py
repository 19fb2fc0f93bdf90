import math

import cv2
import numpy as np
import pytest


def synthesize_clip(path, seconds=10.0, fps=30, size=(320, 240), face_every=1, rng=None):
    """MJPG clip with a bright face-like ellipse over a dark background.

    face_every > 1 leaves periodic faceless frames so detection-dropout
    paths can be exercised.
    """
    rng = rng or np.random.default_rng(0)
    w, h = size
    writer = cv2.VideoWriter(str(path), cv2.VideoWriter_fourcc(*"MJPG"), fps, (w, h))
    assert writer.isOpened()
    n = int(seconds * fps)
    for i in range(n):
        frame = rng.integers(0, 30, (h, w, 3)).astype(np.uint8)
        if i % face_every == 0:
            cx = w // 2 + int(10 * math.sin(i / 10))
            cv2.ellipse(frame, (cx, h // 2), (w // 5, h // 3), 0, 0, 360, (180, 190, 210), -1)
            cv2.circle(frame, (cx - 20, h // 2 - 20), 6, (40, 40, 40), -1)
            cv2.circle(frame, (cx + 20, h // 2 - 20), 6, (40, 40, 40), -1)

        writer.write(frame)
    writer.release()
    return str(path)


def synthesize_sibling_wav(video_path, seconds=10.0, sample_rate=44100, freq=440.0):
    from dfsuite.core import AudioClip, write_wav

    t = np.arange(int(seconds * sample_rate)) / sample_rate
    clip = AudioClip(samples=0.4 * np.sin(2 * math.pi * freq * t), sample_rate=sample_rate)
    wav_path = str(video_path).rsplit(".", 1)[0] + ".wav"
    write_wav(clip, wav_path)
    return wav_path


@pytest.fixture
def fixture_clip(tmp_path):
    video = synthesize_clip(tmp_path / "clip0.avi")
    synthesize_sibling_wav(video)
    return video
