"""Multiclass logistic regression (softmax) trained by gradient descent.

Features are standardized to zero mean / unit variance with statistics
from the training set. The loss is mean cross-entropy plus an L2 penalty
on the weights (biases are not penalized); ``loss_and_grad`` exposes both
so the analytic gradient can be checked against finite differences.
"""

from __future__ import annotations

import numpy as np

DEFAULTS = {"learning_rate": 0.1, "max_iter": 1000, "tol": 1e-6, "l2": 1.0}


def _softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def _gradients(probs, weights, features, rows, class_index, l2, n):
    """Analytic gradient given softmax outputs; mutates ``probs`` in place."""
    delta = probs
    delta[rows, class_index] -= 1.0
    delta /= n
    d_weights = delta.T @ features + (l2 / n) * weights
    d_biases = delta.sum(axis=0)
    return d_weights, d_biases


def loss_and_grad(weights, biases, features, class_index, l2):
    """Regularized cross-entropy loss with its analytic gradient.

    ``weights`` is (C, F), ``biases`` (C,), ``features`` (n, F) already
    standardized, ``class_index`` (n,) positions into the class order.
    Returns (loss, d_weights, d_biases).
    """
    n = len(features)
    rows = np.arange(n)
    probs = _softmax(features @ weights.T + biases)
    loss = -np.log(probs[rows, class_index]).mean() + (l2 / (2.0 * n)) * float(
        (weights * weights).sum()
    )
    d_weights, d_biases = _gradients(probs, weights, features, rows, class_index, l2, n)
    return loss, d_weights, d_biases


class SoftmaxRegression:
    algorithm = "logistic_regression"

    def __init__(
        self,
        learning_rate: float = 0.1,
        max_iter: int = 1000,
        tol: float = 1e-6,
        l2: float = 1.0,
    ):
        self.learning_rate = float(learning_rate)
        self.max_iter = int(max_iter)
        self.tol = float(tol)
        self.l2 = float(l2)
        self.class_labels: tuple[int, ...] = ()
        self.weights: np.ndarray | None = None  # (C, 2)
        self.biases: np.ndarray | None = None  # (C,)
        self.feature_mean: np.ndarray | None = None  # (2,)
        self.feature_std: np.ndarray | None = None  # (2,)
        self.n_iter: int = 0

    def fit(self, coords, labels, class_labels) -> "SoftmaxRegression":
        X = np.asarray(coords, dtype=np.float64)
        y = np.asarray(labels, dtype=np.int64)
        self.class_labels = tuple(int(c) for c in class_labels)
        lookup = {c: i for i, c in enumerate(self.class_labels)}
        y_pos = np.array([lookup[int(v)] for v in y], dtype=np.int64)

        self.feature_mean = X.mean(axis=0)
        std = X.std(axis=0)
        std[std == 0.0] = 1.0  # constant feature: leave it centered only
        self.feature_std = std
        Xs = (X - self.feature_mean) / self.feature_std

        n_classes = len(self.class_labels)
        n = len(Xs)
        rows = np.arange(n)
        W = np.zeros((n_classes, X.shape[1]))
        b = np.zeros(n_classes)
        self.n_iter = 0
        for _ in range(self.max_iter):
            probs = _softmax(Xs @ W.T + b)
            dW, db = _gradients(probs, W, Xs, rows, y_pos, self.l2, n)
            self.n_iter += 1
            if max(np.abs(dW).max(), np.abs(db).max()) < self.tol:
                break
            W -= self.learning_rate * dW
            b -= self.learning_rate * db
        self.weights = W
        self.biases = b
        return self

    def _standardize(self, points: np.ndarray) -> np.ndarray:
        return (np.atleast_2d(points) - self.feature_mean) / self.feature_std

    def predict_batch(self, points) -> np.ndarray:
        probs = self.predict_proba_batch(points)
        classes = np.asarray(self.class_labels, dtype=np.int64)
        return classes[probs.argmax(axis=1)]

    def predict_proba_batch(self, points) -> np.ndarray:
        Xs = self._standardize(np.asarray(points, dtype=np.float64))
        return _softmax(Xs @ self.weights.T + self.biases)

    def to_params(self) -> dict:
        return {
            "learning_rate": self.learning_rate,
            "max_iter": self.max_iter,
            "tol": self.tol,
            "l2": self.l2,
            "weights": self.weights.tolist(),
            "biases": self.biases.tolist(),
            "feature_mean": self.feature_mean.tolist(),
            "feature_std": self.feature_std.tolist(),
            "n_iter": self.n_iter,
        }

    @classmethod
    def from_params(cls, params: dict, class_labels) -> "SoftmaxRegression":
        model = cls(
            learning_rate=params["learning_rate"],
            max_iter=params["max_iter"],
            tol=params["tol"],
            l2=params["l2"],
        )
        model.class_labels = tuple(int(c) for c in class_labels)
        model.weights = np.asarray(params["weights"], dtype=np.float64)
        model.biases = np.asarray(params["biases"], dtype=np.float64)
        model.feature_mean = np.asarray(params["feature_mean"], dtype=np.float64)
        model.feature_std = np.asarray(params["feature_std"], dtype=np.float64)
        model.n_iter = int(params.get("n_iter", 0))
        return model
