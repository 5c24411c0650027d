"""Gaussian naive Bayes with independent (lat, lon) features.

Per class: a prior from training frequency plus a per-feature normal
fitted by mean and population variance. All variances get a small
additive floor so coincident coordinates cannot produce a zero variance.
"""

from __future__ import annotations

import numpy as np

DEFAULTS = {"var_smoothing": 1e-9}

_LOG_2PI = float(np.log(2.0 * np.pi))


class GaussianNbClassifier:
    algorithm = "naive_bayes"

    def __init__(self, var_smoothing: float = 1e-9):
        self.var_smoothing = float(var_smoothing)
        self.class_labels: tuple[int, ...] = ()
        self.priors: np.ndarray | None = None  # (C,)
        self.means: np.ndarray | None = None  # (C, 2)
        self.variances: np.ndarray | None = None  # (C, 2), floored
        self.epsilon: float = 0.0

    def fit(self, coords: np.ndarray, labels: np.ndarray, class_labels) -> "GaussianNbClassifier":
        coords = np.asarray(coords, dtype=np.float64)
        labels = np.asarray(labels, dtype=np.int64)
        self.class_labels = tuple(int(c) for c in class_labels)
        n = len(coords)
        max_var = float(coords.var(axis=0).max()) if n else 0.0
        # the floor scales with the data; absolute fallback keeps it positive
        # when every point coincides
        self.epsilon = self.var_smoothing * max_var if max_var > 0.0 else 1e-12
        priors, means, variances = [], [], []
        for label in self.class_labels:
            rows = coords[labels == label]
            priors.append(len(rows) / n)
            means.append(rows.mean(axis=0))
            variances.append(rows.var(axis=0) + self.epsilon)
        self.priors = np.array(priors)
        self.means = np.array(means)
        self.variances = np.array(variances)
        return self

    def _log_joint(self, points: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(points)[:, None, :]  # (m, 1, 2)
        log_lik = -0.5 * (
            _LOG_2PI
            + np.log(self.variances)[None, :, :]
            + (x - self.means[None, :, :]) ** 2 / self.variances[None, :, :]
        ).sum(axis=2)
        return log_lik + np.log(self.priors)[None, :]

    def predict_batch(self, points: np.ndarray) -> np.ndarray:
        scores = self._log_joint(points)
        classes = np.asarray(self.class_labels, dtype=np.int64)
        return classes[scores.argmax(axis=1)]

    def predict_proba_batch(self, points: np.ndarray) -> np.ndarray:
        scores = self._log_joint(points)
        shifted = scores - scores.max(axis=1, keepdims=True)
        exp = np.exp(shifted)
        return exp / exp.sum(axis=1, keepdims=True)

    def to_params(self) -> dict:
        return {
            "var_smoothing": self.var_smoothing,
            "epsilon": self.epsilon,
            "priors": self.priors.tolist(),
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
        }

    @classmethod
    def from_params(cls, params: dict, class_labels) -> "GaussianNbClassifier":
        model = cls(var_smoothing=params["var_smoothing"])
        model.class_labels = tuple(int(c) for c in class_labels)
        model.epsilon = float(params["epsilon"])
        model.priors = np.asarray(params["priors"], dtype=np.float64)
        model.means = np.asarray(params["means"], dtype=np.float64)
        model.variances = np.asarray(params["variances"], dtype=np.float64)
        return model
