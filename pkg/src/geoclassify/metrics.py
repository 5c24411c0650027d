"""Evaluation measures: confusion matrix, accuracy, precision/recall/F1, k-fold CV.

Zero-division conventions match the rendered tables this toolkit emits: a
class never predicted has precision 0, a class absent from the test set
has recall 0, and F1 is 0 whenever precision + recall is 0. Values are
kept at full precision internally; rounding (half-up) happens only when
rendering text tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

import numpy as np

from .dataset import Dataset


def round_half_up(value: float, places: int) -> float:
    """Round with ties away from zero, e.g. 0.125 -> 0.13 at two places."""
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class ConfusionMatrix:
    """counts[i][j] = points of true class labels[i] predicted as labels[j]."""

    labels: tuple[int, ...]
    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (len(self.labels), len(self.labels)):
            raise ValueError(f"counts shape {counts.shape} does not match labels {self.labels}")
        if (counts < 0).any():
            raise ValueError("confusion counts must be nonnegative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "labels", tuple(int(l) for l in self.labels))

    @classmethod
    def from_predictions(cls, labels: Sequence[int], y_true, y_pred) -> "ConfusionMatrix":
        labels = tuple(int(l) for l in labels)
        k = len(labels)
        positions = np.full(max(labels) + 1, -1, dtype=np.int64)
        for i, label in enumerate(labels):
            positions[label] = i
        t_pos = positions[np.asarray(y_true, dtype=np.int64)]
        p_pos = positions[np.asarray(y_pred, dtype=np.int64)]
        if (t_pos < 0).any() or (p_pos < 0).any():
            raise ValueError("predictions or truths contain labels outside the matrix")
        counts = np.zeros((k, k), dtype=np.int64)
        np.add.at(counts, (t_pos, p_pos), 1)
        return cls(labels=labels, counts=counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class ClassReport:
    label: int
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvaluationReport:
    confusion: ConfusionMatrix
    accuracy: float
    per_class: tuple[ClassReport, ...]
    macro_precision: float
    macro_recall: float
    macro_f1: float

    @property
    def min_f1(self) -> float:
        return min(c.f1 for c in self.per_class)

    def to_dict(self) -> dict:
        return {
            "labels": list(self.confusion.labels),
            "confusion": self.confusion.counts.tolist(),
            "accuracy": self.accuracy,
            "per_class": [
                {
                    "label": c.label,
                    "precision": c.precision,
                    "recall": c.recall,
                    "f1": c.f1,
                    "support": c.support,
                }
                for c in self.per_class
            ],
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
        }


def report_from_confusion(confusion: ConfusionMatrix) -> EvaluationReport:
    counts = confusion.counts
    total = counts.sum()
    if total == 0:
        raise ValueError("cannot evaluate an empty test set")
    accuracy = float(np.trace(counts) / total)
    per_class = []
    for i, label in enumerate(confusion.labels):
        tp = float(counts[i, i])
        fp = float(counts[:, i].sum() - counts[i, i])
        fn = float(counts[i, :].sum() - counts[i, i])
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        recall = tp / (tp + fn) if tp + fn > 0 else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        per_class.append(
            ClassReport(
                label=label,
                precision=precision,
                recall=recall,
                f1=f1,
                support=int(counts[i, :].sum()),
            )
        )
    return EvaluationReport(
        confusion=confusion,
        accuracy=accuracy,
        per_class=tuple(per_class),
        macro_precision=float(np.mean([c.precision for c in per_class])),
        macro_recall=float(np.mean([c.recall for c in per_class])),
        macro_f1=float(np.mean([c.f1 for c in per_class])),
    )


def evaluate(model, test: Dataset) -> EvaluationReport:
    """Score a fitted model against a held-out dataset."""
    if len(test) == 0:
        raise ValueError("cannot evaluate an empty test set")
    model_classes = set(model.class_labels)
    test_classes = set(int(v) for v in np.unique(test.labels))
    if not test_classes.issubset(model_classes):
        raise ValueError(
            f"test set contains classes {sorted(test_classes - model_classes)} "
            "the model was not trained on"
        )
    predictions = model.predict_batch(test.coords)
    confusion = ConfusionMatrix.from_predictions(model.class_labels, test.labels, predictions)
    return report_from_confusion(confusion)


# ---- cross validation ----------------------------------------------------


def fold_indices(n: int, folds: int, seed: int) -> list[np.ndarray]:
    """Shuffle 0..n-1 and cut into ``folds`` chunks with sizes differing by at most 1."""
    if folds < 2:
        raise ValueError(f"cross-validation needs at least 2 folds, got {folds}")
    if folds > n:
        raise ValueError(f"cannot make {folds} folds from {n} points")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    return [np.sort(chunk) for chunk in np.array_split(perm, folds)]


@dataclass(frozen=True)
class CrossValidationResult:
    fold_reports: tuple[EvaluationReport, ...]
    mean_accuracy: float
    std_accuracy: float


def cross_validate(
    algorithm: str,
    data: Dataset,
    folds: int,
    seed: int,
    hyperparameters: dict | None = None,
) -> CrossValidationResult:
    """k-fold cross validation: each point is tested exactly once."""
    from .classifiers import train  # deferred: metrics must stay importable alone

    assignments = fold_indices(len(data), folds, seed)
    all_idx = np.arange(len(data))
    reports = []
    for i, test_idx in enumerate(assignments):
        train_idx = np.setdiff1d(all_idx, test_idx, assume_unique=False)
        train_set = data.take(train_idx, id=f"{data.id}/cv{i}-train")
        test_set = data.take(test_idx, id=f"{data.id}/cv{i}-test")
        model = train(algorithm, train_set, hyperparameters=hyperparameters, seed=seed)
        reports.append(evaluate(model, test_set))
    accuracies = np.array([r.accuracy for r in reports])
    return CrossValidationResult(
        fold_reports=tuple(reports),
        mean_accuracy=float(accuracies.mean()),
        std_accuracy=float(accuracies.std()),
    )


# ---- rendering -------------------------------------------------------------


def render_report(report: EvaluationReport, title: str = "") -> str:
    """Aligned text table in the house style: one row per event class."""
    lines = []
    if title:
        lines.append(title)
    header = f"{'Event':>6} | {'Precision':>9} | {'Recall':>6} | {'F1-score':>8} | {'Support':>7}"
    lines.append(header)
    lines.append("-" * len(header))
    for c in report.per_class:
        lines.append(
            f"{c.label:>6} | {round_half_up(c.precision, 2):>9.2f} "
            f"| {round_half_up(c.recall, 2):>6.2f} "
            f"| {round_half_up(c.f1, 2):>8.2f} "
            f"| {c.support:>7}"
        )
    lines.append(f"accuracy: {round_half_up(report.accuracy, 4):.4f}")
    return "\n".join(lines)


def render_cross_validation(result: CrossValidationResult) -> str:
    lines = ["fold accuracies:"]
    for i, rep in enumerate(result.fold_reports):
        lines.append(f"  fold {i}: {round_half_up(rep.accuracy, 4):.4f}")
    lines.append(
        f"mean accuracy: {round_half_up(result.mean_accuracy, 4):.4f} "
        f"(std {round_half_up(result.std_accuracy, 4):.4f})"
    )
    return "\n".join(lines)
