"""k-nearest-neighbor classifier over raw (lat, lon) degrees.

Distance is squared Euclidean on the raw coordinates. Votes tie-break to
the smallest class label; the neighbor set itself is pinned down by
(squared distance, insertion index) ordering inside the spatial index.
"""

from __future__ import annotations

import numpy as np

from .kdtree import KdTree

DEFAULTS = {"k": 5, "leaf_size": 64}


class KnnClassifier:
    algorithm = "knn"

    def __init__(self, k: int = 5, leaf_size: int = 64):
        if k < 1:
            raise ValueError(f"k must be at least 1, got {k}")
        self.k = int(k)
        self.leaf_size = int(leaf_size)
        self.coords: np.ndarray | None = None
        self.labels: np.ndarray | None = None
        self.class_labels: tuple[int, ...] = ()
        self._tree: KdTree | None = None
        self._label_pos: np.ndarray | None = None

    def fit(self, coords: np.ndarray, labels: np.ndarray, class_labels) -> "KnnClassifier":
        if self.k > len(coords):
            raise ValueError(f"k={self.k} exceeds the {len(coords)} training points")
        self.coords = np.asarray(coords, dtype=np.float64)
        self.labels = np.asarray(labels, dtype=np.int64)
        self.class_labels = tuple(int(c) for c in class_labels)
        lookup = {c: i for i, c in enumerate(self.class_labels)}
        self._label_pos = np.array([lookup[int(l)] for l in self.labels], dtype=np.int64)
        self._tree = KdTree(self.coords, leaf_size=self.leaf_size)
        return self

    def _votes(self, points: np.ndarray) -> np.ndarray:
        neighbors = self._tree.query_batch(points, self.k)
        n_classes = len(self.class_labels)
        votes = np.zeros((len(points), n_classes), dtype=np.int64)
        pos = self._label_pos[neighbors]
        for c in range(n_classes):
            votes[:, c] = (pos == c).sum(axis=1)
        return votes

    def predict_batch(self, points: np.ndarray) -> np.ndarray:
        votes = self._votes(np.atleast_2d(points))
        # argmax picks the first maximum, i.e. the smallest label on a tie
        winners = votes.argmax(axis=1)
        classes = np.asarray(self.class_labels, dtype=np.int64)
        return classes[winners]

    def predict_proba_batch(self, points: np.ndarray) -> np.ndarray:
        votes = self._votes(np.atleast_2d(points))
        return votes / float(self.k)

    def to_params(self) -> dict:
        # JSON floats round-trip exactly (repr-based), so raw training data
        # is enough; the index is rebuilt deterministically on load.
        return {
            "k": self.k,
            "leaf_size": self.leaf_size,
            "train_coords": self.coords.tolist(),
            "train_labels": [int(l) for l in self.labels],
        }

    @classmethod
    def from_params(cls, params: dict, class_labels) -> "KnnClassifier":
        model = cls(k=params["k"], leaf_size=params.get("leaf_size", 64))
        coords = np.asarray(params["train_coords"], dtype=np.float64).reshape(-1, 2)
        labels = np.asarray(params["train_labels"], dtype=np.int64)
        return model.fit(coords, labels, class_labels)
