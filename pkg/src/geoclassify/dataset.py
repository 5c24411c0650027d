"""Datasets of labeled coordinates: class-subset combinations and train/test splits.

A ``Dataset`` keeps its points in numpy arrays for speed but exposes them
as ``LabeledPoint`` objects where object-level access is convenient.
Datasets are immutable after construction; every operation here returns a
new one.
"""

from __future__ import annotations

import hashlib
import io
import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .events import IRAQ_BBOX, BoundingBox, LabeledPoint


@dataclass(frozen=True)
class Dataset:
    """A named, immutable collection of labeled coordinate points."""

    id: str
    coords: np.ndarray  # (n, 2) float64, columns (lat, lon)
    labels: np.ndarray  # (n,) int64
    provenance: str = ""
    bbox: BoundingBox = IRAQ_BBOX
    classes: tuple[int, ...] = field(default=())

    def __post_init__(self):
        coords = np.ascontiguousarray(np.asarray(self.coords, dtype=np.float64))
        labels = np.ascontiguousarray(np.asarray(self.labels, dtype=np.int64))
        if coords.ndim != 2 or coords.shape[1] != 2:
            raise ValueError(f"coords must be (n, 2), got {coords.shape}")
        if labels.shape != (coords.shape[0],):
            raise ValueError("labels length must match coords")
        coords.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "labels", labels)
        classes = self.classes or tuple(sorted(int(v) for v in np.unique(labels)))
        object.__setattr__(self, "classes", tuple(int(c) for c in classes))
        present = set(int(v) for v in np.unique(labels))
        if not present.issubset(self.classes):
            raise ValueError(f"labels {sorted(present - set(self.classes))} not in declared classes")

    @classmethod
    def from_columns(cls, id, lats, lons, labels, provenance="", bbox=IRAQ_BBOX, classes=()):
        coords = np.column_stack(
            [np.asarray(lats, dtype=np.float64), np.asarray(lons, dtype=np.float64)]
        ) if len(lats) else np.empty((0, 2))
        return cls(id=id, coords=coords, labels=np.asarray(labels, dtype=np.int64),
                   provenance=provenance, bbox=bbox, classes=classes)

    @classmethod
    def from_points(cls, id, points: Iterable[LabeledPoint], provenance="", bbox=IRAQ_BBOX):
        pts = list(points)
        return cls.from_columns(
            id=id,
            lats=[p.lat for p in pts],
            lons=[p.lon for p in pts],
            labels=[p.label for p in pts],
            provenance=provenance,
            bbox=bbox,
        )

    def __len__(self) -> int:
        return self.coords.shape[0]

    @property
    def points(self) -> Iterator[LabeledPoint]:
        for (lat, lon), label in zip(self.coords, self.labels):
            yield LabeledPoint(float(lat), float(lon), int(label))

    def class_counts(self) -> dict[int, int]:
        values, counts = np.unique(self.labels, return_counts=True)
        out = {int(c): 0 for c in self.classes}
        out.update({int(v): int(c) for v, c in zip(values, counts)})
        return out

    def take(self, indices: np.ndarray, id: str, provenance: str | None = None) -> "Dataset":
        return Dataset(
            id=id,
            coords=self.coords[indices],
            labels=self.labels[indices],
            provenance=provenance if provenance is not None else self.provenance,
            bbox=self.bbox,
            classes=self.classes,
        )

    # ---- serialization -------------------------------------------------

    def to_csv_bytes(self) -> bytes:
        buf = io.StringIO()
        buf.write("lat,lon,label\n")
        for (lat, lon), label in zip(self.coords.tolist(), self.labels.tolist()):
            buf.write(f"{lat!r},{lon!r},{label}\n")
        return buf.getvalue().encode("utf-8")

    def write_csv(self, path) -> None:
        Path(path).write_bytes(self.to_csv_bytes())

    @classmethod
    def from_csv(cls, path, id: str | None = None, bbox: BoundingBox = IRAQ_BBOX) -> "Dataset":
        path = Path(path)
        lats, lons, labels = [], [], []
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
            if header != "lat,lon,label":
                raise ValueError(f"unexpected dataset CSV header: {header!r}")
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                lat, lon, label = line.split(",")
                lats.append(float(lat))
                lons.append(float(lon))
                labels.append(int(label))
        return cls.from_columns(
            id=id or path.stem,
            lats=lats,
            lons=lons,
            labels=labels,
            provenance=str(path),
            bbox=bbox,
        )

    def content_hash(self) -> str:
        return hashlib.sha256(self.to_csv_bytes()).hexdigest()

    def manifest(self) -> dict:
        return {
            "id": self.id,
            "n_points": len(self),
            "classes": list(self.classes),
            "class_counts": {str(k): v for k, v in sorted(self.class_counts().items())},
            "provenance": self.provenance,
            "content_hash": self.content_hash(),
        }


@dataclass(frozen=True)
class CombinationSpec:
    """All class subsets of the requested sizes, in canonical order."""

    n: int
    sizes: tuple[int, ...]
    subsets: tuple[tuple[int, ...], ...]

    def count_for_size(self, r: int) -> int:
        return sum(1 for s in self.subsets if len(s) == r)


def enumerate_combinations(classes: Sequence[int], sizes: Iterable[int]) -> CombinationSpec:
    """Enumerate class subsets of each requested size.

    Order is canonical and deterministic: sizes ascending, subsets
    lexicographic by label within each size. Each size must be between 2
    and the number of classes.
    """
    labels = tuple(sorted(int(c) for c in classes))
    n = len(labels)
    sizes = tuple(sorted(set(int(s) for s in sizes)))
    for r in sizes:
        if r < 2:
            raise ValueError(f"subset size must be at least 2, got {r}")
        if r > n:
            raise ValueError(f"subset size {r} exceeds the {n} available classes")
    subsets = tuple(
        subset for r in sizes for subset in itertools.combinations(labels, r)
    )
    for r in sizes:
        expected = math.comb(n, r)
        actual = sum(1 for s in subsets if len(s) == r)
        assert actual == expected, f"combination count mismatch for r={r}"
    return CombinationSpec(n=n, sizes=sizes, subsets=subsets)


def subset_id(subset: Iterable[int]) -> str:
    return "-".join(str(int(label)) for label in sorted(subset))


def materialize_combination(full: Dataset, subset: Iterable[int]) -> Dataset:
    """Restrict a dataset to the points whose label is in ``subset``."""
    wanted = tuple(sorted(int(label) for label in set(subset)))
    if not wanted:
        raise ValueError("empty class subset")
    missing = [label for label in wanted if label not in full.classes]
    if missing:
        raise ValueError(f"classes {missing} not present in dataset {full.id!r}")
    mask = np.isin(full.labels, wanted)
    return Dataset(
        id=subset_id(wanted),
        coords=full.coords[mask],
        labels=full.labels[mask],
        provenance=f"{full.provenance} | subset={wanted}",
        bbox=full.bbox,
        classes=wanted,
    )


@dataclass(frozen=True)
class SplitPair:
    """A train/test partition of a parent dataset."""

    train: Dataset
    test: Dataset
    ratio: float
    seed: int
    stratified: bool


def _stratified_order(labels: np.ndarray, rng: np.random.Generator) -> dict[int, np.ndarray]:
    order = {}
    for label in sorted(int(v) for v in np.unique(labels)):
        idx = np.flatnonzero(labels == label)
        order[label] = idx[rng.permutation(len(idx))]
    return order


def split_train_test(
    data: Dataset, ratio: float, seed: int, stratified: bool = False
) -> SplitPair:
    """Split a dataset into train and test partitions.

    The train side gets ``floor(ratio * n)`` points. Unstratified splits
    draw a uniform random permutation and cut a prefix; stratified splits
    allocate each class its proportional share (largest remainder, ties
    to the smaller label) so every class lands within one point of its
    parent proportion.
    """
    n = len(data)
    if not (0.0 < ratio < 1.0):
        raise ValueError(f"ratio must be in (0, 1), got {ratio}")
    n_train = math.floor(ratio * n)
    n_test = n - n_train
    if n_train == 0 or n_test == 0:
        raise ValueError(f"degenerate split: {n} points at ratio {ratio} leaves an empty side")

    rng = np.random.default_rng(seed)
    if not stratified:
        perm = rng.permutation(n)
        train_idx, test_idx = perm[:n_train], perm[n_train:]
    else:
        counts = data.class_counts()
        if any(c < 2 for c in counts.values()):
            raise ValueError("stratified split requires at least 2 points per class")
        per_class = _stratified_order(data.labels, rng)
        base = {label: math.floor(ratio * len(idx)) for label, idx in per_class.items()}
        remainder = n_train - sum(base.values())
        # hand out leftover slots by largest fractional share, smaller label first
        fractions = sorted(
            per_class,
            key=lambda label: (-(ratio * len(per_class[label]) - base[label]), label),
        )
        for label in fractions[:remainder]:
            base[label] += 1
        train_parts, test_parts = [], []
        for label, idx in per_class.items():
            k = base[label]
            train_parts.append(idx[:k])
            test_parts.append(idx[k:])
        train_idx = np.concatenate(train_parts)
        test_idx = np.concatenate(test_parts)

    return SplitPair(
        train=data.take(train_idx, id=f"{data.id}/train", provenance=f"{data.provenance} | train"),
        test=data.take(test_idx, id=f"{data.id}/test", provenance=f"{data.provenance} | test"),
        ratio=ratio,
        seed=seed,
        stratified=stratified,
    )
