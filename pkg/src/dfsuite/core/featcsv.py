"""Feature-table CSV codec.

Fixed header: video_id, the 13 feature columns in their canonical order,
then label. Values are written with repr (17 significant digits) so a
write/read cycle is lossless. The label column may be empty (unlabeled
rows) or omitted entirely (unlabeled file).
"""
from __future__ import annotations

import csv

from ..errors import DataError
from .types import FEATURE_NAMES, Dataset, VideoFeatureVector

CSV_HEADER = ("video_id",) + FEATURE_NAMES + ("label",)


def write_feature_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in rows:
            label = "" if r.label is None else str(r.label)
            w.writerow([r.video_id] + [repr(float(v)) for v in r.values] + [label])


def read_feature_csv(path) -> Dataset:
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty CSV") from None
        has_label = tuple(header) == CSV_HEADER
        if not has_label and tuple(header) != CSV_HEADER[:-1]:
            raise DataError(
                f"{path}: bad header; expected {','.join(CSV_HEADER)} "
                f"(label column optional)"
            )
        rows = []
        for lineno, rec in enumerate(reader, start=2):
            expected = len(CSV_HEADER) if has_label else len(CSV_HEADER) - 1
            if len(rec) != expected:
                raise DataError(f"{path}:{lineno}: expected {expected} columns, got {len(rec)}")
            try:
                values = [float(v) for v in rec[1 : 1 + len(FEATURE_NAMES)]]
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: non-numeric cell: {exc}") from exc
            label = None
            if has_label and rec[-1] != "":
                try:
                    label = int(rec[-1])
                except ValueError as exc:
                    raise DataError(f"{path}:{lineno}: bad label {rec[-1]!r}") from exc
            rows.append(VideoFeatureVector(video_id=rec[0], values=values, label=label))
    return Dataset(rows=tuple(rows))
