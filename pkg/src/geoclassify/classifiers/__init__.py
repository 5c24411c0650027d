"""Uniform train/predict surface over the four classifier families."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..dataset import Dataset
from ..events import BoundingBox
from .decision_tree import DecisionTreeClassifier, gini_impurity, impurity_decrease
from .knn import KnnClassifier
from .kdtree import KdTree
from .logistic import SoftmaxRegression, loss_and_grad
from .naive_bayes import GaussianNbClassifier

ALGORITHMS = ("knn", "naive_bayes", "decision_tree", "logistic_regression")

ALGORITHM_SHORT = {
    "knn": "knn",
    "naive_bayes": "nb",
    "decision_tree": "dt",
    "logistic_regression": "lr",
}

_FAMILIES = {
    "knn": KnnClassifier,
    "naive_bayes": GaussianNbClassifier,
    "decision_tree": DecisionTreeClassifier,
    "logistic_regression": SoftmaxRegression,
}


def default_hyperparameters(algorithm: str) -> dict:
    import importlib

    module = {
        "knn": ".knn",
        "naive_bayes": ".naive_bayes",
        "decision_tree": ".decision_tree",
        "logistic_regression": ".logistic",
    }[algorithm]
    return dict(importlib.import_module(module, __package__).DEFAULTS)


@dataclass
class ModelMetadata:
    model_id: str
    algorithm: str
    dataset_id: str
    class_labels: tuple[int, ...]
    hyperparameters: dict
    seed: int
    trained_at: Optional[str] = None
    bbox: Optional[tuple[float, float, float, float]] = None
    metrics: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "algorithm": self.algorithm,
            "dataset_id": self.dataset_id,
            "class_labels": list(self.class_labels),
            "hyperparameters": self.hyperparameters,
            "seed": self.seed,
            "trained_at": self.trained_at,
            "bbox": list(self.bbox) if self.bbox else None,
            "metrics": self.metrics,
        }


@dataclass
class TrainedModel:
    """A fitted classifier plus everything needed to reuse it later."""

    impl: object
    metadata: ModelMetadata

    @property
    def algorithm(self) -> str:
        return self.metadata.algorithm

    @property
    def class_labels(self) -> tuple[int, ...]:
        return tuple(self.impl.class_labels)

    def predict_batch(self, points) -> np.ndarray:
        return self.impl.predict_batch(np.asarray(points, dtype=np.float64))

    def predict_proba_batch(self, points) -> np.ndarray:
        return self.impl.predict_proba_batch(np.asarray(points, dtype=np.float64))

    def predict(self, lat: float, lon: float) -> int:
        self._check_point(lat, lon)
        return int(self.predict_batch([[lat, lon]])[0])

    def predict_proba(self, lat: float, lon: float) -> np.ndarray:
        self._check_point(lat, lon)
        return self.predict_proba_batch([[lat, lon]])[0]

    @staticmethod
    def _check_point(lat, lon):
        if not (np.isfinite(lat) and np.isfinite(lon)):
            raise ValueError(f"coordinates must be finite, got ({lat}, {lon})")


def train(
    algorithm: str,
    data: Dataset,
    hyperparameters: dict | None = None,
    seed: int = 42,
    model_id: str | None = None,
    trained_at: str | None = None,
) -> TrainedModel:
    """Fit one of the four classifier families on a labeled dataset.

    Training is deterministic given (data, hyperparameters, seed). The
    returned model is immutable: fit parameters are never touched again.
    """
    if algorithm not in _FAMILIES:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    present = sorted(int(v) for v in np.unique(data.labels))
    if len(present) < 2:
        raise ValueError(f"training needs at least 2 classes, dataset {data.id!r} has {present}")
    if not np.isfinite(data.coords).all():
        raise ValueError("training data contains non-finite coordinates")

    params = default_hyperparameters(algorithm)
    overrides = dict(hyperparameters or {})
    unknown = set(overrides) - set(params)
    if unknown:
        raise ValueError(f"unknown hyperparameters for {algorithm}: {sorted(unknown)}")
    params.update(overrides)

    impl = _FAMILIES[algorithm](**params)
    impl.fit(data.coords, data.labels, present)

    metadata = ModelMetadata(
        model_id=model_id or f"{ALGORITHM_SHORT[algorithm]}-{'-'.join(map(str, present))}",
        algorithm=algorithm,
        dataset_id=data.id,
        class_labels=tuple(present),
        hyperparameters=params,
        seed=seed,
        trained_at=trained_at,
        bbox=data.bbox.as_tuple() if isinstance(data.bbox, BoundingBox) else None,
    )
    return TrainedModel(impl=impl, metadata=metadata)


def rebuild(algorithm: str, params: dict, class_labels, metadata: ModelMetadata) -> TrainedModel:
    impl = _FAMILIES[algorithm].from_params(params, class_labels)
    return TrainedModel(impl=impl, metadata=metadata)


__all__ = [
    "ALGORITHMS",
    "ALGORITHM_SHORT",
    "DecisionTreeClassifier",
    "GaussianNbClassifier",
    "KdTree",
    "KnnClassifier",
    "ModelMetadata",
    "SoftmaxRegression",
    "TrainedModel",
    "default_hyperparameters",
    "gini_impurity",
    "impurity_decrease",
    "loss_and_grad",
    "rebuild",
    "train",
]
