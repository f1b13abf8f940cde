"""Classification metrics and prediction persistence.

Weighted F1 follows the support-weighted convention: each class
contributes (support / total) * F1, with precision/recall/F1 defined as
0 whenever their denominator is 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from collections.abc import Sequence


@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    per_class: dict[str, ClassScores]
    weighted_f1: float
    predictions: tuple[str, ...]


def evaluate(y_true: Sequence[str], y_pred: Sequence[str]) -> EvalReport:
    """Per-class precision/recall/F1 and the support-weighted F1."""
    if len(y_true) != len(y_pred):
        raise ValueError(f"length mismatch: {len(y_true)} vs {len(y_pred)}")
    if not y_true:
        raise ValueError("empty evaluation input")
    labels = sorted(set(y_true) | set(y_pred))
    tp = {c: 0 for c in labels}
    fp = {c: 0 for c in labels}
    fn = {c: 0 for c in labels}
    support = {c: 0 for c in labels}
    for t, p in zip(y_true, y_pred):
        support[t] += 1
        if t == p:
            tp[t] += 1
        else:
            fp[p] += 1
            fn[t] += 1
    total = len(y_true)
    per_class: dict[str, ClassScores] = {}
    weighted = 0.0
    for c in labels:
        prec = tp[c] / (tp[c] + fp[c]) if tp[c] + fp[c] else 0.0
        rec = tp[c] / (tp[c] + fn[c]) if tp[c] + fn[c] else 0.0
        f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
        per_class[c] = ClassScores(prec, rec, f1, support[c])
        weighted += (support[c] / total) * f1
    return EvalReport(
        per_class=per_class,
        weighted_f1=weighted,
        predictions=tuple(y_pred),
    )


def save_predictions(
    path: str, y_true: Sequence[str], y_pred: Sequence[str]
) -> None:
    """Persist paired predictions as JSON lines, one record per index."""
    if len(y_true) != len(y_pred):
        raise ValueError("true/predicted length mismatch")
    with open(path, "w", encoding="utf-8") as fh:
        for i, (t, p) in enumerate(zip(y_true, y_pred)):
            fh.write(
                json.dumps(
                    {"index": i, "true_label": t, "predicted_label": p},
                    ensure_ascii=False,
                )
                + "\n"
            )


def load_predictions(path: str) -> tuple[list[str], list[str]]:
    """Read a predictions file back into (y_true, y_pred), index order."""
    records: list[tuple[int, str, str]] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            records.append(
                (int(rec["index"]), str(rec["true_label"]), str(rec["predicted_label"]))
            )
    records.sort(key=lambda r: r[0])
    return [r[1] for r in records], [r[2] for r in records]
