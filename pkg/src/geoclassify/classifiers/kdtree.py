"""Static 2-d tree for exact k-nearest-neighbor queries.

Points are bucketed into leaves and queried with a branch-and-bound
traversal. Results are exact: the k nearest points ordered by
(squared distance, insertion index), which pins down ties between
equidistant points (common with duplicated coordinates). Pruning is
strict, so subtrees at exactly the boundary distance are still explored
and index ties are never lost.
"""

from __future__ import annotations

import heapq

import numpy as np


class KdTree:
    def __init__(self, coords: np.ndarray, leaf_size: int = 64):
        coords = np.ascontiguousarray(coords, dtype=np.float64)
        if coords.ndim != 2 or coords.shape[1] != 2:
            raise ValueError(f"coords must be (n, 2), got {coords.shape}")
        if len(coords) == 0:
            raise ValueError("cannot index zero points")
        self.coords = coords
        self.leaf_size = int(leaf_size)
        n = len(coords)
        self._order = np.arange(n)
        # node arrays; leaves have axis == -1 and cover order[start:end]
        self._axis: list[int] = []
        self._split: list[float] = []
        self._left: list[int] = []
        self._right: list[int] = []
        self._start: list[int] = []
        self._end: list[int] = []
        self._build(0, n)
        self._leaf_coords = [
            self.coords[self._order[s:e]] if a == -1 else None
            for a, s, e in zip(self._axis, self._start, self._end)
        ]

    def _new_node(self) -> int:
        self._axis.append(-1)
        self._split.append(0.0)
        self._left.append(-1)
        self._right.append(-1)
        self._start.append(0)
        self._end.append(0)
        return len(self._axis) - 1

    def _build(self, start: int, end: int) -> int:
        node = self._new_node()
        count = end - start
        if count <= self.leaf_size:
            self._start[node] = start
            self._end[node] = end
            return node
        chunk = self._order[start:end]
        pts = self.coords[chunk]
        spread = pts.max(axis=0) - pts.min(axis=0)
        axis = 0 if spread[0] >= spread[1] else 1
        values = pts[:, axis]
        if spread[axis] == 0.0:
            # all points coincide on both axes: keep as one big leaf
            self._start[node] = start
            self._end[node] = end
            return node
        srt = np.argsort(values, kind="stable")
        self._order[start:end] = chunk[srt]
        mid = start + count // 2
        # split value separates: left values <= split <= right values
        split = float(self.coords[self._order[mid], axis])
        if split == float(self.coords[self._order[start], axis]):
            # degenerate median (duplicate-heavy axis): cut after the run of equal values
            vals_sorted = values[srt]
            above = np.flatnonzero(vals_sorted > split)
            mid = start + int(above[0])
            split = float(vals_sorted[above[0]])
        self._axis[node] = axis
        self._split[node] = split
        self._left[node] = self._build(start, mid)
        self._right[node] = self._build(mid, end)
        return node

    def query(self, point, k: int) -> np.ndarray:
        """Indices of the k nearest points, ordered by (squared distance, index)."""
        n = len(self.coords)
        if not (1 <= k <= n):
            raise ValueError(f"k must be in [1, {n}], got {k}")
        q0, q1 = float(point[0]), float(point[1])
        axis_arr = self._axis
        split_arr = self._split
        left_arr = self._left
        right_arr = self._right
        order = self._order
        leaf_coords = self._leaf_coords

        heap: list[tuple[float, int]] = []  # (-d2, -idx); root is the current worst
        worst = np.inf
        full = False
        stack = [(0, 0.0)]
        push = heapq.heappush
        replace = heapq.heapreplace
        while stack:
            node, bound = stack.pop()
            if full and bound > worst:
                continue
            axis = axis_arr[node]
            while axis != -1:
                delta = (q0 - split_arr[node]) if axis == 0 else (q1 - split_arr[node])
                if delta < 0.0:
                    near, far = left_arr[node], right_arr[node]
                else:
                    far, near = left_arr[node], right_arr[node]
                plane = delta * delta
                if not full or plane <= worst:
                    stack.append((far, plane))
                node = near
                axis = axis_arr[node]
            pts = leaf_coords[node]
            d0 = pts[:, 0] - q0
            d1 = pts[:, 1] - q1
            d2 = d0 * d0 + d1 * d1
            base = self._start[node]
            if not full:
                for j in range(len(d2)):
                    dj = d2[j]
                    idx = order[base + j]
                    if not full:
                        push(heap, (-dj, -idx))
                        full = len(heap) == k
                        if full:
                            worst = -heap[0][0]
                    elif dj < worst or (dj == worst and idx < -heap[0][1]):
                        replace(heap, (-dj, -idx))
                        worst = -heap[0][0]
            else:
                for j in np.flatnonzero(d2 <= worst):
                    dj = d2[j]
                    idx = order[base + j]
                    if dj < worst or (dj == worst and idx < -heap[0][1]):
                        replace(heap, (-dj, -idx))
                        worst = -heap[0][0]
        result = sorted((-d, -i) for d, i in heap)
        return np.array([idx for _, idx in result], dtype=np.int64)

    def query_batch(self, points: np.ndarray, k: int) -> np.ndarray:
        points = np.asarray(points, dtype=np.float64)
        out = np.empty((len(points), k), dtype=np.int64)
        for i, point in enumerate(points):
            out[i] = self.query(point, k)
        return out
