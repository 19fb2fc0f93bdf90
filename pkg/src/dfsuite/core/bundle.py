"""Landmark-bundle JSON codec.

Schema (documented contract with the ingest adapter):

    {
      "video_id": str,
      "fps": number,
      "frame_count": int,
      "frames": [
        {
          "frame_index": int,
          "image_width": int,
          "image_height": int,
          "roi_box": [x0, y0, x1, y1],
          "points": [[x, y, z] * 468]
        }, ...
      ],
      "roi_refs": [{"frame_index": int, "path": str}, ...],
      "audio_ref": str | null
    }

ROI paths are resolved relative to the JSON file's directory. Writing
uses `repr` floats (17 significant digits), so write/read round-trips
are value-exact.
"""
from __future__ import annotations

import json
import os

from ..errors import DataError
from .types import LandmarkBundle, LandmarkFrame


def _require(doc: dict, key: str, ctx: str):
    if key not in doc:
        raise DataError(f"{ctx}: missing field {key!r}")
    return doc[key]


def read_landmark_bundle(path, check_roi_files: bool = True) -> LandmarkBundle:
    """Read and fully validate a bundle; errors name the offending frame."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DataError(f"{path}: top level must be an object")
    ctx = str(path)
    video_id = _require(doc, "video_id", ctx)
    frames = []
    for fdoc in _require(doc, "frames", ctx):
        fi = _require(fdoc, "frame_index", ctx)
        frames.append(
            LandmarkFrame(
                frame_index=fi,
                image_width=_require(fdoc, "image_width", f"{ctx} frame {fi}"),
                image_height=_require(fdoc, "image_height", f"{ctx} frame {fi}"),
                points=_require(fdoc, "points", f"{ctx} frame {fi}"),
                roi_box=tuple(_require(fdoc, "roi_box", f"{ctx} frame {fi}")),
            )
        )
    roi_refs = tuple(
        (r["frame_index"], r["path"]) for r in doc.get("roi_refs", [])
    )
    bundle = LandmarkBundle(
        video_id=video_id,
        fps=_require(doc, "fps", ctx),
        frame_count=_require(doc, "frame_count", ctx),
        frames=tuple(frames),
        roi_refs=roi_refs,
        audio_ref=doc.get("audio_ref"),
    )
    if check_roi_files:
        base = os.path.dirname(os.path.abspath(path))
        for fi, rel in bundle.roi_refs:
            full = os.path.join(base, rel)
            if not os.path.isfile(full):
                raise DataError(f"{ctx}: roi_ref for frame {fi} not readable: {rel}")
    return bundle


def write_landmark_bundle(bundle: LandmarkBundle, path) -> None:
    doc = {
        "video_id": bundle.video_id,
        "fps": bundle.fps,
        "frame_count": bundle.frame_count,
        "frames": [
            {
                "frame_index": f.frame_index,
                "image_width": f.image_width,
                "image_height": f.image_height,
                "roi_box": list(f.roi_box),
                "points": [[float(v) for v in p] for p in f.points],
            }
            for f in bundle.frames
        ],
        "roi_refs": [{"frame_index": fi, "path": p} for fi, p in bundle.roi_refs],
        "audio_ref": bundle.audio_ref,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def resolve_roi_path(bundle_path, rel_path: str) -> str:
    return os.path.join(os.path.dirname(os.path.abspath(bundle_path)), rel_path)
