"""CART-style binary decision tree with Gini impurity.

Split candidates are the midpoints between consecutive distinct sorted
feature values. Points with value <= threshold go left. Tie-breaking is
fully pinned down so duplicate-heavy geocoded data trains the same tree
every run: impurity-decrease ties prefer latitude over longitude, then
the smaller threshold; leaf-majority ties prefer the smallest label.
"""

from __future__ import annotations

import numpy as np

DEFAULTS = {"max_depth": None, "min_samples_split": 2}


def gini_impurity(counts) -> float:
    """Gini impurity of a node with the given per-class counts."""
    counts = np.asarray(counts, dtype=np.float64)
    n = counts.sum()
    if n == 0:
        return 0.0
    return float(1.0 - ((counts / n) ** 2).sum())


def impurity_decrease(parent_counts, left_counts, right_counts) -> float:
    """Weighted Gini decrease achieved by splitting a parent into two children."""
    parent = np.asarray(parent_counts, dtype=np.float64)
    left = np.asarray(left_counts, dtype=np.float64)
    right = np.asarray(right_counts, dtype=np.float64)
    n = parent.sum()
    if n == 0:
        return 0.0
    weighted = (left.sum() * gini_impurity(left) + right.sum() * gini_impurity(right)) / n
    return gini_impurity(parent) - weighted


class DecisionTreeClassifier:
    algorithm = "decision_tree"

    def __init__(self, max_depth: int | None = None, min_samples_split: int = 2):
        if min_samples_split < 2:
            raise ValueError("min_samples_split must be at least 2")
        self.max_depth = max_depth
        self.min_samples_split = int(min_samples_split)
        self.class_labels: tuple[int, ...] = ()
        # flat node arrays; feature == -1 marks a leaf
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.counts: list[list[int]] = []
        self._counts_arr: np.ndarray | None = None
        self._majority_arr: np.ndarray | None = None

    # ---- training ------------------------------------------------------

    def _new_node(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.counts.append([])
        return len(self.feature) - 1

    @staticmethod
    def _best_feature_split(values, y_pos, total_counts, n, parent_gini):
        """Best (gain, threshold) along one feature, or None if indivisible."""
        srt = np.argsort(values, kind="stable")
        vs = values[srt]
        change = np.flatnonzero(vs[:-1] != vs[1:])
        if change.size == 0:
            return None
        one_hot = np.zeros((n, len(total_counts)), dtype=np.float64)
        one_hot[np.arange(n), y_pos[srt]] = 1.0
        cum = one_hot.cumsum(axis=0)
        left = cum[change]
        nl = (change + 1).astype(np.float64)
        nr = n - nl
        right = total_counts - left
        gini_left = 1.0 - (left * left).sum(axis=1) / (nl * nl)
        gini_right = 1.0 - (right * right).sum(axis=1) / (nr * nr)
        gains = parent_gini - (nl * gini_left + nr * gini_right) / n
        j = int(gains.argmax())  # first maximum: smallest threshold wins ties
        lo, hi = vs[change[j]], vs[change[j] + 1]
        thr = (lo + hi) / 2.0
        if thr >= hi:  # midpoint rounded up to the right value; keep the cut strict
            thr = lo
        return float(gains[j]), float(thr)

    def fit(self, coords, labels, class_labels) -> "DecisionTreeClassifier":
        X = np.asarray(coords, dtype=np.float64)
        y = np.asarray(labels, dtype=np.int64)
        self.class_labels = tuple(int(c) for c in class_labels)
        n_classes = len(self.class_labels)
        lookup = {c: i for i, c in enumerate(self.class_labels)}
        y_pos = np.array([lookup[int(v)] for v in y], dtype=np.int64)

        root = self._new_node()
        stack = [(root, np.arange(len(X)), 0)]
        while stack:
            node, idx, depth = stack.pop()
            counts = np.bincount(y_pos[idx], minlength=n_classes)
            self.counts[node] = [int(c) for c in counts]
            n = len(idx)
            pure = int((counts > 0).sum()) <= 1
            at_limit = self.max_depth is not None and depth >= self.max_depth
            if pure or n < self.min_samples_split or at_limit:
                continue

            parent_gini = gini_impurity(counts)
            total = counts.astype(np.float64)
            best = None  # (gain, feature, threshold); lat first, lon needs strictly more
            for f in (0, 1):
                found = self._best_feature_split(X[idx, f], y_pos[idx], total, n, parent_gini)
                if found is not None and (best is None or found[0] > best[0]):
                    best = (found[0], f, found[1])
            if best is None:
                # indivisible: every remaining point shares both coordinates
                continue
            # an impure node with any candidate is split even at zero gain;
            # children strictly shrink, and depth-first growth reaches purity
            # (the XOR layout needs exactly this)

            _, f, thr = best
            self.feature[node] = f
            self.threshold[node] = thr
            mask = X[idx, f] <= thr
            left_id = self._new_node()
            right_id = self._new_node()
            self.left[node] = left_id
            self.right[node] = right_id
            stack.append((left_id, idx[mask], depth + 1))
            stack.append((right_id, idx[~mask], depth + 1))
        self._finalize()
        return self

    def _finalize(self):
        self._counts_arr = np.asarray(self.counts, dtype=np.float64)
        # argmax returns the first maximum, so majority ties resolve to the
        # smallest label (class order is ascending)
        self._majority_arr = self._counts_arr.argmax(axis=1)

    # ---- prediction ------------------------------------------------------

    def _leaf_for(self, points: np.ndarray) -> np.ndarray:
        feature = np.asarray(self.feature, dtype=np.int64)
        threshold = np.asarray(self.threshold, dtype=np.float64)
        left = np.asarray(self.left, dtype=np.int64)
        right = np.asarray(self.right, dtype=np.int64)
        node = np.zeros(len(points), dtype=np.int64)
        while True:
            undecided = np.flatnonzero(feature[node] >= 0)
            if undecided.size == 0:
                return node
            current = node[undecided]
            vals = points[undecided, feature[current]]
            goes_left = vals <= threshold[current]
            node[undecided] = np.where(goes_left, left[current], right[current])

    def predict_batch(self, points: np.ndarray) -> np.ndarray:
        leaves = self._leaf_for(np.atleast_2d(np.asarray(points, dtype=np.float64)))
        classes = np.asarray(self.class_labels, dtype=np.int64)
        return classes[self._majority_arr[leaves]]

    def predict_proba_batch(self, points: np.ndarray) -> np.ndarray:
        leaves = self._leaf_for(np.atleast_2d(np.asarray(points, dtype=np.float64)))
        counts = self._counts_arr[leaves]
        return counts / counts.sum(axis=1, keepdims=True)

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    @property
    def max_reached_depth(self) -> int:
        depth = np.zeros(self.n_nodes, dtype=np.int64)
        for node in range(self.n_nodes):
            if self.feature[node] >= 0:
                depth[self.left[node]] = depth[node] + 1
                depth[self.right[node]] = depth[node] + 1
        return int(depth.max()) if self.n_nodes else 0

    # ---- persistence -----------------------------------------------------

    def to_params(self) -> dict:
        return {
            "max_depth": self.max_depth,
            "min_samples_split": self.min_samples_split,
            "feature": list(self.feature),
            "threshold": [float(t) for t in self.threshold],
            "left": list(self.left),
            "right": list(self.right),
            "counts": [list(c) for c in self.counts],
        }

    @classmethod
    def from_params(cls, params: dict, class_labels) -> "DecisionTreeClassifier":
        model = cls(
            max_depth=params.get("max_depth"),
            min_samples_split=params.get("min_samples_split", 2),
        )
        model.class_labels = tuple(int(c) for c in class_labels)
        model.feature = [int(f) for f in params["feature"]]
        model.threshold = [float(t) for t in params["threshold"]]
        model.left = [int(v) for v in params["left"]]
        model.right = [int(v) for v in params["right"]]
        model.counts = [list(map(int, c)) for c in params["counts"]]
        model._finalize()
        return model
