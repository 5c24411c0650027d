import math
from collections import Counter

import numpy as np
import pytest

from geoclassify.dataset import (
    Dataset,
    enumerate_combinations,
    materialize_combination,
    split_train_test,
)

from conftest import random_dataset

FIVE = [0, 73, 145, 194, 202]

# the ten two-class subsets of the five studied events
PAIRS = [
    (0, 73), (0, 145), (0, 194), (0, 202),
    (73, 145), (73, 194), (73, 202),
    (145, 194), (145, 202), (194, 202),
]


class TestCombinations:
    def test_counts_match_binomials(self):
        for sizes, expected in [({2}, 10), ({3}, 10), ({4}, 5), ({5}, 1)]:
            spec = enumerate_combinations(FIVE, sizes)
            assert len(spec.subsets) == expected
            (r,) = sizes
            assert expected == math.comb(5, r)

    def test_two_through_four_gives_twenty_five(self):
        spec = enumerate_combinations(FIVE, {2, 3, 4})
        assert len(spec.subsets) == 25
        assert {s for s in spec.subsets if len(s) == 2} == set(PAIRS)

    def test_two_through_five_gives_twenty_six(self):
        spec = enumerate_combinations(FIVE, {2, 3, 4, 5})
        assert len(spec.subsets) == 26
        assert spec.subsets[-1] == tuple(FIVE)

    def test_canonical_order(self):
        spec = enumerate_combinations(FIVE, {2, 3})
        sizes = [len(s) for s in spec.subsets]
        assert sizes == sorted(sizes)
        twos = [s for s in spec.subsets if len(s) == 2]
        assert twos == sorted(twos)
        assert twos == PAIRS
        for subset in spec.subsets:
            assert list(subset) == sorted(subset)

    @pytest.mark.parametrize("sizes", [{6}, {1}, {0}, {2, 7}])
    def test_invalid_sizes_rejected(self, sizes):
        with pytest.raises(ValueError):
            enumerate_combinations(FIVE, sizes)

    def test_unsorted_input_classes_are_canonicalized(self):
        spec = enumerate_combinations([202, 0, 145, 73, 194], {2})
        assert spec.subsets[0] == (0, 73)


class TestMaterialize:
    def test_restriction_preserves_per_class_counts(self):
        full = random_dataset(500, seed=7, labels=FIVE, id="full")
        parent_counts = Counter(int(l) for l in full.labels)
        combo = materialize_combination(full, {73, 194})
        assert combo.id == "73-194"
        assert combo.classes == (73, 194)
        counts = combo.class_counts()
        assert counts[73] == parent_counts[73]
        assert counts[194] == parent_counts[194]
        assert len(combo) == parent_counts[73] + parent_counts[194]

    def test_order_of_parent_points_preserved(self):
        full = random_dataset(200, seed=3, labels=[0, 1, 2], id="full")
        combo = materialize_combination(full, {0, 2})
        mask = np.isin(full.labels, [0, 2])
        assert np.array_equal(combo.coords, full.coords[mask])

    def test_empty_subset_is_an_error(self):
        full = random_dataset(10, seed=1)
        with pytest.raises(ValueError):
            materialize_combination(full, set())

    def test_unknown_class_is_an_error(self):
        full = random_dataset(10, seed=1, labels=[0, 1])
        with pytest.raises(ValueError, match="99"):
            materialize_combination(full, {0, 99})


class TestSplit:
    def test_ten_points_at_seventy_percent(self):
        data = random_dataset(10, seed=5)
        pair = split_train_test(data, 0.7, seed=123)
        assert len(pair.train) == 7
        assert len(pair.test) == 3

    def test_floor_rule_matches_the_large_two_class_case(self):
        # 26,723 points at 0.7 must leave 8,017 on the test side
        assert 26723 - math.floor(0.7 * 26723) == 8017

    def test_same_seed_same_partition(self):
        data = random_dataset(101, seed=9)
        a = split_train_test(data, 0.7, seed=42)
        b = split_train_test(data, 0.7, seed=42)
        assert np.array_equal(a.train.coords, b.train.coords)
        assert np.array_equal(a.test.labels, b.test.labels)

    def test_different_seed_differs(self):
        data = random_dataset(101, seed=9)
        a = split_train_test(data, 0.7, seed=1)
        b = split_train_test(data, 0.7, seed=2)
        assert not np.array_equal(a.train.coords, b.train.coords)

    def test_partition_is_disjoint_and_complete(self):
        data = random_dataset(137, seed=11, labels=[0, 1, 2])
        pair = split_train_test(data, 0.37, seed=8)
        combined = sorted(
            map(tuple, np.vstack([
                np.column_stack([pair.train.coords, pair.train.labels]),
                np.column_stack([pair.test.coords, pair.test.labels]),
            ]).tolist())
        )
        original = sorted(map(tuple, np.column_stack([data.coords, data.labels]).tolist()))
        assert combined == original

    def test_stratified_keeps_proportions_within_one_point(self):
        data = random_dataset(1000, seed=13, labels=[0, 1, 2], weights=[0.6, 0.3, 0.1])
        pair = split_train_test(data, 0.7, seed=21, stratified=True)
        assert len(pair.train) == 700
        parent = data.class_counts()
        got = pair.train.class_counts()
        for label, count in parent.items():
            assert abs(got[label] - 0.7 * count) <= 1

    def test_stratified_needs_two_per_class(self):
        data = Dataset.from_columns(
            id="tiny", lats=[30, 31, 32], lons=[40, 41, 42], labels=[0, 0, 1]
        )
        with pytest.raises(ValueError, match="2 points per class"):
            split_train_test(data, 0.7, seed=1, stratified=True)

    @pytest.mark.parametrize("ratio", [0.0, 1.0, -0.2, 1.5])
    def test_ratio_out_of_range(self, ratio):
        with pytest.raises(ValueError):
            split_train_test(random_dataset(10, seed=1), ratio, seed=1)

    def test_degenerate_split_is_an_error(self):
        data = random_dataset(3, seed=1)
        with pytest.raises(ValueError, match="degenerate"):
            split_train_test(data, 0.1, seed=1)  # floor(0.3) == 0


class TestSerialization:
    def test_csv_round_trip_and_stable_hash(self, tmp_path):
        data = random_dataset(50, seed=17, labels=[0, 73])
        path = tmp_path / "ds.csv"
        data.write_csv(path)
        loaded = Dataset.from_csv(path)
        assert np.array_equal(loaded.coords, data.coords)
        assert np.array_equal(loaded.labels, data.labels)
        assert loaded.content_hash() == data.content_hash()

    def test_manifest_fields(self):
        data = random_dataset(25, seed=19, labels=[0, 73], id="mine")
        manifest = data.manifest()
        assert manifest["id"] == "mine"
        assert manifest["n_points"] == 25
        assert manifest["classes"] == [0, 73]
        assert sum(manifest["class_counts"].values()) == 25
        assert len(manifest["content_hash"]) == 64

    def test_labels_must_be_in_declared_classes(self):
        with pytest.raises(ValueError):
            Dataset.from_columns(
                id="bad", lats=[30.0], lons=[40.0], labels=[5], classes=(0, 1)
            )
