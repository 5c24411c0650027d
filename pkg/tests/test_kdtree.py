import numpy as np
import pytest

from geoclassify.classifiers.kdtree import KdTree


def brute_force_knn(coords: np.ndarray, point, k: int) -> np.ndarray:
    """Independent oracle: linear scan ordered by (squared distance, index)."""
    diff = coords - np.asarray(point, dtype=np.float64)
    d2 = (diff * diff).sum(axis=1)
    order = np.argsort(d2, kind="stable")  # stable: equal distances keep index order
    return order[:k]


def random_points(n, seed, quantum=None):
    rng = np.random.default_rng(seed)
    pts = rng.uniform((29.2, 39.3), (37.2, 48.4), size=(n, 2))
    if quantum:
        pts = np.round(pts / quantum) * quantum
    return pts


class TestExactness:
    @pytest.mark.parametrize("k", [1, 2, 7])
    @pytest.mark.parametrize("seed", [0, 1])
    def test_matches_brute_force_on_continuous_points(self, k, seed):
        coords = random_points(300, seed)
        tree = KdTree(coords, leaf_size=16)
        queries = random_points(50, seed + 100)
        for q in queries:
            assert np.array_equal(tree.query(q, k), brute_force_knn(coords, q, k))

    @pytest.mark.parametrize("k", [1, 5, 17])
    def test_matches_brute_force_on_duplicate_heavy_points(self, k):
        # quantized coordinates produce exact ties; the (distance, index)
        # order must still match the oracle exactly
        coords = random_points(500, seed=3, quantum=0.5)
        tree = KdTree(coords, leaf_size=8)
        queries = np.vstack([random_points(30, seed=4, quantum=0.5), random_points(20, seed=5)])
        for q in queries:
            assert np.array_equal(tree.query(q, k), brute_force_knn(coords, q, k))

    def test_query_point_coincides_with_training_points(self):
        coords = np.array([[33.0, 44.0]] * 10 + [[34.0, 44.0]] * 3)
        tree = KdTree(coords, leaf_size=4)
        assert np.array_equal(tree.query([33.0, 44.0], 5), np.arange(5))

    def test_k_equals_n(self):
        coords = random_points(40, seed=6)
        tree = KdTree(coords, leaf_size=4)
        q = [33.0, 44.0]
        assert np.array_equal(tree.query(q, 40), brute_force_knn(coords, q, 40))

    def test_all_points_identical(self):
        coords = np.tile([[31.5, 45.5]], (20, 1))
        tree = KdTree(coords, leaf_size=4)
        assert np.array_equal(tree.query([30.0, 44.0], 6), np.arange(6))


class TestValidation:
    def test_k_out_of_range(self):
        tree = KdTree(random_points(10, seed=7))
        with pytest.raises(ValueError):
            tree.query([33.0, 44.0], 0)
        with pytest.raises(ValueError):
            tree.query([33.0, 44.0], 11)

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            KdTree(np.empty((0, 2)))

    def test_batch_shape(self):
        coords = random_points(50, seed=8)
        tree = KdTree(coords, leaf_size=8)
        out = tree.query_batch(random_points(7, seed=9), 3)
        assert out.shape == (7, 3)
