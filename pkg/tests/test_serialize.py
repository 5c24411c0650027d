import json

import numpy as np
import pytest

from geoclassify.classifiers import ALGORITHMS, train
from geoclassify.classifiers.serialize import (
    FORMAT_VERSION,
    load_model,
    load_model_bytes,
    save_model,
    save_model_bytes,
)
from geoclassify.errors import CorruptModelError, UnsupportedVersionError

from conftest import random_dataset


@pytest.fixture(scope="module")
def fitted_models():
    data = random_dataset(300, seed=401, labels=[0, 145, 202], weights=[0.5, 0.3, 0.2])
    return {algorithm: train(algorithm, data, seed=5) for algorithm in ALGORITHMS}


@pytest.mark.parametrize("algorithm", ALGORITHMS)
class TestRoundTrip:
    def test_round_trip_preserves_predictions(self, algorithm, fitted_models):
        model = fitted_models[algorithm]
        restored = load_model_bytes(save_model_bytes(model))
        rng = np.random.default_rng(77)
        queries = rng.uniform((29.2, 39.3), (37.2, 48.4), size=(300, 2))
        assert np.array_equal(model.predict_batch(queries), restored.predict_batch(queries))
        np.testing.assert_array_equal(
            model.predict_proba_batch(queries), restored.predict_proba_batch(queries)
        )

    def test_round_trip_preserves_metadata(self, algorithm, fitted_models):
        model = fitted_models[algorithm]
        restored = load_model_bytes(save_model_bytes(model))
        assert restored.metadata.algorithm == model.metadata.algorithm
        assert restored.metadata.model_id == model.metadata.model_id
        assert restored.class_labels == model.class_labels
        assert restored.metadata.hyperparameters == model.metadata.hyperparameters
        assert restored.metadata.seed == model.metadata.seed
        assert restored.metadata.bbox == model.metadata.bbox

    def test_serialization_is_stable(self, algorithm, fitted_models):
        model = fitted_models[algorithm]
        blob = save_model_bytes(model)
        assert save_model_bytes(load_model_bytes(blob)) == blob

    def test_file_round_trip(self, algorithm, fitted_models, tmp_path):
        model = fitted_models[algorithm]
        path = tmp_path / f"{algorithm}.model.json"
        save_model(model, path)
        restored = load_model(path)
        assert restored.predict(33.0, 44.0) == model.predict(33.0, 44.0)


class TestFailureModes:
    def blob(self, fitted_models) -> bytes:
        return save_model_bytes(fitted_models["decision_tree"])

    def test_truncated_payload(self, fitted_models):
        with pytest.raises(CorruptModelError):
            load_model_bytes(self.blob(fitted_models)[:100])

    def test_tampered_payload_fails_checksum(self, fitted_models):
        payload = json.loads(self.blob(fitted_models))
        payload["params"]["threshold"][0] = 12.34
        with pytest.raises(CorruptModelError, match="checksum"):
            load_model_bytes(json.dumps(payload).encode())

    def test_future_version_is_a_version_error_not_a_crash(self, fitted_models):
        payload = json.loads(self.blob(fitted_models))
        payload["format_version"] = FORMAT_VERSION + 1
        with pytest.raises(UnsupportedVersionError, match=str(FORMAT_VERSION + 1)):
            load_model_bytes(json.dumps(payload).encode())

    def test_not_a_model_file(self):
        with pytest.raises(CorruptModelError, match="format"):
            load_model_bytes(b'{"hello": "world"}')

    def test_not_json(self):
        with pytest.raises(CorruptModelError, match="JSON"):
            load_model_bytes(b"\x00\x01\x02binary garbage")
