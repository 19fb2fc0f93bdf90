"""Confusion-matrix metrics and the classification report."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int
    degenerate: bool  # any zero-denominator ratio was reported as 0


@dataclass(frozen=True)
class Metrics:
    tp: int
    fp: int
    tn: int
    fn: int
    accuracy: float
    per_class: dict[int, ClassMetrics]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float

    def as_dict(self) -> dict:
        return {
            "confusion": {"tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn},
            "accuracy": self.accuracy,
            "per_class": {
                str(k): {
                    "precision": v.precision,
                    "recall": v.recall,
                    "f1": v.f1,
                    "support": v.support,
                    "degenerate": v.degenerate,
                }
                for k, v in self.per_class.items()
            },
            "macro": {
                "precision": self.macro_precision,
                "recall": self.macro_recall,
                "f1": self.macro_f1,
            },
            "weighted": {
                "precision": self.weighted_precision,
                "recall": self.weighted_recall,
                "f1": self.weighted_f1,
            },
        }


def _safe_ratio(num: int, den: int) -> tuple[float, bool]:
    if den == 0:
        return 0.0, True
    return num / den, False


def classification_report(y_true, y_pred) -> Metrics:
    y_true = np.asarray(y_true, dtype=np.int64).ravel()
    y_pred = np.asarray(y_pred, dtype=np.int64).ravel()
    if len(y_true) == 0:
        raise DataError("empty input")
    if len(y_true) != len(y_pred):
        raise DataError(f"length mismatch: {len(y_true)} vs {len(y_pred)}")
    if not (set(np.unique(y_true)) <= {0, 1} and set(np.unique(y_pred)) <= {0, 1}):
        raise DataError("labels must be binary")
    tp = int(np.sum((y_true == 1) & (y_pred == 1)))
    fp = int(np.sum((y_true == 0) & (y_pred == 1)))
    tn = int(np.sum((y_true == 0) & (y_pred == 0)))
    fn = int(np.sum((y_true == 1) & (y_pred == 0)))
    n = len(y_true)
    per_class = {}
    for cls in (0, 1):
        if cls == 1:
            c_tp, c_fp, c_fn = tp, fp, fn
        else:
            c_tp, c_fp, c_fn = tn, fn, fp
        precision, d1 = _safe_ratio(c_tp, c_tp + c_fp)
        recall, d2 = _safe_ratio(c_tp, c_tp + c_fn)
        if precision + recall > 0:
            f1, d3 = 2 * precision * recall / (precision + recall), False
        else:
            f1, d3 = 0.0, True
        per_class[cls] = ClassMetrics(
            precision=precision,
            recall=recall,
            f1=f1,
            support=int(np.sum(y_true == cls)),
            degenerate=d1 or d2 or d3,
        )
    supports = np.array([per_class[c].support for c in (0, 1)], dtype=np.float64)
    weights = supports / n

    def _avg(attr):
        vals = np.array([getattr(per_class[c], attr) for c in (0, 1)])
        return float(vals.mean()), float(np.sum(vals * weights))

    macro_p, weighted_p = _avg("precision")
    macro_r, weighted_r = _avg("recall")
    macro_f, weighted_f = _avg("f1")
    return Metrics(
        tp=tp, fp=fp, tn=tn, fn=fn,
        accuracy=(tp + tn) / n,
        per_class=per_class,
        macro_precision=macro_p, macro_recall=macro_r, macro_f1=macro_f,
        weighted_precision=weighted_p, weighted_recall=weighted_r, weighted_f1=weighted_f,
    )


def format_report(m: Metrics) -> str:
    lines = [
        f"{'class':>8} {'precision':>10} {'recall':>10} {'f1':>10} {'support':>8}",
    ]
    for cls in (0, 1):
        c = m.per_class[cls]
        flag = " *" if c.degenerate else ""
        lines.append(
            f"{cls:>8} {c.precision:>10.4f} {c.recall:>10.4f} {c.f1:>10.4f} {c.support:>8}{flag}"
        )
    lines.append(
        f"{'macro':>8} {m.macro_precision:>10.4f} {m.macro_recall:>10.4f} {m.macro_f1:>10.4f}"
    )
    lines.append(
        f"{'weighted':>8} {m.weighted_precision:>10.4f} {m.weighted_recall:>10.4f} "
        f"{m.weighted_f1:>10.4f}"
    )
    lines.append(f"accuracy: {m.accuracy:.4f}")
    return "\n".join(lines)
