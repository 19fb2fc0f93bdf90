"""Convert a raw video clip into the canonical landmark-bundle layout.

Per clip the adapter writes, under the output directory:

    <video_id>.json               landmark bundle
    <video_id>_roi/<frame>.ppm    ROI crop per sampled frame with a face
    <video_id>.wav                16 kHz mono PCM-16 audio

Audio comes from a sibling WAV file (same stem as the video); container
audio tracks are out of reach without a demuxer, so a missing sibling
simply yields a bundle without an audio_ref. Frames whose detection
confidence falls below the threshold are omitted and logged.
"""
from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field

import cv2
import numpy as np

from dfsuite.core import (
    AudioClip,
    LandmarkBundle,
    LandmarkFrame,
    RgbImage,
    read_wav,
    resample_linear,
    write_landmark_bundle,
    write_ppm,
    write_wav,
)

from .detect import make_detector
from .mesh import template_in_box

TARGET_SAMPLE_RATE = 16000


@dataclass(frozen=True)
class AdapterConfig:
    out_dir: str
    stride: int = 5
    min_confidence: float = 0.5
    cascade_path: str | None = None

    def __post_init__(self):
        if self.stride < 1:
            raise ValueError(f"stride must be >= 1, got {self.stride}")


@dataclass
class IngestResult:
    video_id: str
    bundle_path: str
    wav_path: str | None
    frames_sampled: int
    frames_kept: int
    notes: list[str] = field(default_factory=list)


class IngestError(Exception):
    pass


def _clamp_box(box, width, height):
    x0, y0, x1, y1 = box
    return (max(0, x0), max(0, y0), min(width, x1), min(height, y1))


def _demux_audio(video_path: str, out_path: str) -> str | None:
    sibling = os.path.splitext(video_path)[0] + ".wav"
    if not os.path.isfile(sibling):
        return None
    clip = read_wav(sibling)
    if clip.sample_rate != TARGET_SAMPLE_RATE:
        clip = resample_linear(clip, TARGET_SAMPLE_RATE)
    write_wav(AudioClip(samples=clip.samples, sample_rate=TARGET_SAMPLE_RATE), out_path)
    return out_path


def ingest(video_path: str, config: AdapterConfig) -> IngestResult:
    if not os.path.isfile(video_path):
        raise IngestError(f"no such video: {video_path}")
    cap = cv2.VideoCapture(video_path)
    if not cap.isOpened():
        raise IngestError(f"unreadable container: {video_path}")
    fps = cap.get(cv2.CAP_PROP_FPS) or 30.0
    video_id = os.path.splitext(os.path.basename(video_path))[0]
    os.makedirs(config.out_dir, exist_ok=True)
    roi_dir_rel = f"{video_id}_roi"
    os.makedirs(os.path.join(config.out_dir, roi_dir_rel), exist_ok=True)
    detector = make_detector(config.cascade_path)

    frames: list[LandmarkFrame] = []
    roi_refs: list[tuple[int, str]] = []
    notes: list[str] = []
    sampled = 0
    index = 0
    while True:
        ok, frame_bgr = cap.read()
        if not ok:
            break
        if index % config.stride:
            index += 1
            continue
        sampled += 1
        height, width = frame_bgr.shape[:2]
        det = detector.detect(frame_bgr)
        if det is None or det.confidence < config.min_confidence:
            why = "no detection" if det is None else f"confidence {det.confidence:.2f}"
            notes.append(f"frame {index}: dropped ({why})")
            index += 1
            continue
        box = _clamp_box(det.box, width, height)
        if box[2] - box[0] < 2 or box[3] - box[1] < 2:
            notes.append(f"frame {index}: dropped (degenerate box {box})")
            index += 1
            continue
        frames.append(
            LandmarkFrame(
                frame_index=index,
                image_width=width,
                image_height=height,
                points=template_in_box(box, width, height),
                roi_box=box,
            )
        )
        roi = frame_bgr[box[1] : box[3], box[0] : box[2], ::-1]  # BGR -> RGB
        roi_rel = os.path.join(roi_dir_rel, f"{index:06d}.ppm")
        write_ppm(RgbImage(pixels=np.ascontiguousarray(roi)), os.path.join(config.out_dir, roi_rel))
        roi_refs.append((index, roi_rel))
        index += 1
    cap.release()

    if sampled == 0:
        raise IngestError(f"{video_id}: no frames decoded")
    if not frames or len(frames) < 0.5 * sampled:
        raise IngestError(
            f"{video_id}: face found in {len(frames)}/{sampled} sampled frames (< 50%)"
        )

    wav_path = _demux_audio(video_path, os.path.join(config.out_dir, f"{video_id}.wav"))
    if wav_path is None:
        notes.append("no sibling WAV; bundle emitted without audio_ref")

    bundle = LandmarkBundle(
        video_id=video_id,
        fps=float(fps),
        frame_count=len(frames),
        frames=tuple(frames),
        roi_refs=tuple(roi_refs),
        audio_ref=os.path.basename(wav_path) if wav_path else None,
    )
    bundle_path = os.path.join(config.out_dir, f"{video_id}.json")
    write_landmark_bundle(bundle, bundle_path)
    return IngestResult(
        video_id=video_id,
        bundle_path=bundle_path,
        wav_path=wav_path,
        frames_sampled=sampled,
        frames_kept=len(frames),
        notes=notes,
    )


VIDEO_EXTENSIONS = (".avi", ".mp4", ".mov", ".mkv", ".webm")


def batch_ingest(video_dir: str, config: AdapterConfig, resume: bool = False) -> str:
    """Ingest every video in a directory; returns the manifest CSV path.

    With resume=True, clips whose bundle JSON already exists are skipped
    and recorded as such.
    """
    paths = sorted(
        os.path.join(video_dir, f)
        for f in os.listdir(video_dir)
        if f.lower().endswith(VIDEO_EXTENSIONS)
    )
    if not paths:
        raise IngestError(f"no video files in {video_dir}")
    os.makedirs(config.out_dir, exist_ok=True)
    manifest_path = os.path.join(config.out_dir, "manifest.csv")
    rows = []
    failures = 0
    for path in paths:
        video_id = os.path.splitext(os.path.basename(path))[0]
        bundle_path = os.path.join(config.out_dir, f"{video_id}.json")
        if resume and os.path.isfile(bundle_path):
            rows.append([video_id, "skipped", bundle_path, "", "", "already ingested"])
            continue
        try:
            result = ingest(path, config)
        except IngestError as exc:
            failures += 1
            rows.append([video_id, "failed", "", "", "", str(exc)])
            continue
        rows.append(
            [video_id, "ok", result.bundle_path, result.wav_path or "",
             str(result.frames_kept), "; ".join(result.notes)]
        )
    with open(manifest_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["video_id", "status", "bundle_path", "wav_path", "frames", "notes"])
        w.writerows(rows)
    if failures == len(paths):
        raise IngestError(f"all {failures} clips failed; see {manifest_path}")
    return manifest_path
