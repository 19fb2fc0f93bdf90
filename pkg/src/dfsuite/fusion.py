"""OR-rule fusion of per-modality verdicts and four-way evaluation-set
assembly by audio swapping.

A sample is deepfake when either modality says deepfake. Ground truth
of a synthetic (video, audio) pairing is the OR of its source labels.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core.types import fourway_category
from .errors import DataError

DECISION_THRESHOLD = 0.5


@dataclass(frozen=True)
class ModalityVerdict:
    probability: float
    modality: str  # "video" | "audio"
    model_id: str = ""

    def __post_init__(self):
        if not 0.0 <= self.probability <= 1.0:
            raise DataError(f"probability {self.probability} outside [0, 1]")
        if self.modality not in ("video", "audio"):
            raise DataError(f"modality must be video or audio, got {self.modality!r}")

    @property
    def label(self) -> int:
        return int(self.probability >= DECISION_THRESHOLD)


@dataclass(frozen=True)
class FusionVerdict:
    video: ModalityVerdict
    audio: ModalityVerdict
    combined_label: int  # 0 real, 1 deepfake
    category: str  # predicted four-way category


def fuse(video: ModalityVerdict, audio: ModalityVerdict) -> FusionVerdict:
    if video.modality != "video" or audio.modality != "audio":
        raise DataError("fuse expects (video verdict, audio verdict)")
    combined = int(video.label == 1 or audio.label == 1)
    return FusionVerdict(
        video=video,
        audio=audio,
        combined_label=combined,
        category=fourway_category(video.label, audio.label),
    )


@dataclass(frozen=True)
class PairedSample:
    video_id: str
    audio_id: str
    video_label: int
    audio_label: int

    @property
    def category(self) -> str:
        return fourway_category(self.video_label, self.audio_label)

    @property
    def truth_label(self) -> int:
        return int(self.video_label == 1 or self.audio_label == 1)


def assemble_fourway(
    videos: list[tuple[str, int]],
    audios: list[tuple[str, int]],
    rng: np.random.Generator,
) -> list[PairedSample]:
    """Pair (id, label) pools into four categories as evenly as possible.

    Category counts differ pairwise by at most 1 when the pools allow;
    items are drawn round-robin (with seeded shuffling) so every pool
    member is used before any is reused.
    """
    v_pool = {0: [v for v in videos if v[1] == 0], 1: [v for v in videos if v[1] == 1]}
    a_pool = {0: [a for a in audios if a[1] == 0], 1: [a for a in audios if a[1] == 1]}
    for label in (0, 1):
        if not v_pool[label]:
            raise DataError(f"no videos with label {label}")
        if not a_pool[label]:
            raise DataError(f"no audios with label {label}")
        v_pool[label] = [v_pool[label][i] for i in rng.permutation(len(v_pool[label]))]
        a_pool[label] = [a_pool[label][i] for i in rng.permutation(len(a_pool[label]))]

    total = min(len(videos), len(audios))
    base, extra = divmod(total, 4)
    categories = [(0, 0), (0, 1), (1, 0), (1, 1)]
    counts = {cat: base + (1 if i < extra else 0) for i, cat in enumerate(categories)}
    samples = []
    cursor_v = {0: 0, 1: 0}
    cursor_a = {0: 0, 1: 0}
    for vl, al in categories:
        for _ in range(counts[(vl, al)]):
            vid = v_pool[vl][cursor_v[vl] % len(v_pool[vl])]
            aud = a_pool[al][cursor_a[al] % len(a_pool[al])]
            cursor_v[vl] += 1
            cursor_a[al] += 1
            samples.append(
                PairedSample(video_id=vid[0], audio_id=aud[0], video_label=vl, audio_label=al)
            )
    return samples


@dataclass(frozen=True)
class CategoryResult:
    category: str
    samples: int
    correct: int
    strict_correct: int  # both modality labels individually correct


def evaluate_multimodal(
    samples: list[PairedSample],
    video_probs: dict[str, float],
    audio_probs: dict[str, float],
) -> tuple[list[CategoryResult], float]:
    """Per-category correct counts plus overall accuracy.

    A sample counts as correct when the fused label matches the OR of
    its source labels; the stricter both-modalities-correct count is
    reported alongside.
    """
    tallies = {name: [0, 0, 0] for name in ("real-real", "real-deepfake", "deepfake-real", "deepfake-deepfake")}
    for s in samples:
        if s.video_id not in video_probs:
            raise DataError(f"missing video verdict for {s.video_id}")
        if s.audio_id not in audio_probs:
            raise DataError(f"missing audio verdict for {s.audio_id}")
        verdict = fuse(
            ModalityVerdict(video_probs[s.video_id], "video"),
            ModalityVerdict(audio_probs[s.audio_id], "audio"),
        )
        t = tallies[s.category]
        t[0] += 1
        if verdict.combined_label == s.truth_label:
            t[1] += 1
        if verdict.video.label == s.video_label and verdict.audio.label == s.audio_label:
            t[2] += 1
    results = [
        CategoryResult(category=name, samples=t[0], correct=t[1], strict_correct=t[2])
        for name, t in tallies.items()
    ]
    total = sum(r.samples for r in results)
    if total == 0:
        raise DataError("no samples to evaluate")
    accuracy = sum(r.correct for r in results) / total
    return results, accuracy
