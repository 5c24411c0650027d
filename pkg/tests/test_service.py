import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from geoclassify.classifiers import train
from geoclassify.dataset import split_train_test
from geoclassify.metrics import evaluate
from geoclassify.service import create_app
from geoclassify.stores import DatasetStore, ModelStore

from conftest import random_dataset


@pytest.fixture()
def stores(tmp_path):
    model_dir = tmp_path / "models"
    data_dir = tmp_path / "data"
    model_dir.mkdir()
    data_dir.mkdir()
    return ModelStore(model_dir), DatasetStore(data_dir)


@pytest.fixture()
def client(stores):
    model_store, data_store = stores
    app = create_app(
        model_dir=str(model_store.directory), data_dir=str(data_store.directory), workers=2
    )
    with TestClient(app) as client:
        yield client


def seed_model(model_store, data_store, labels=(0, 194), n=300, model_id=None):
    data = random_dataset(n, seed=77, labels=list(labels), id="demo")
    data_store.save(data, "demo")
    pair = split_train_test(data, 0.7, seed=42)
    model = train("decision_tree", pair.train, seed=42, model_id=model_id)
    report = evaluate(model, pair.test)
    model.metadata.metrics = {"accuracy": report.accuracy, "min_f1": report.min_f1}
    return model_store.save(model), model, data


def wait_for_job(client, job_id, timeout=30.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        body = client.get(f"/api/jobs/{job_id}").json()
        if body["status"] in ("done", "failed"):
            return body
        time.sleep(0.02)
    raise TimeoutError(f"job {job_id} did not finish")


class TestHealth:
    def test_healthz(self, client):
        response = client.get("/healthz")
        assert response.status_code == 200
        assert response.text == "OK"


class TestModels:
    def test_empty_store_lists_nothing(self, client):
        response = client.get("/api/models")
        assert response.status_code == 200
        assert response.json() == []

    def test_models_sorted_by_id(self, client, stores):
        model_store, data_store = stores
        seed_model(model_store, data_store, model_id="zz-demo")
        seed_model(model_store, data_store, model_id="aa-demo")
        ids = [m["id"] for m in client.get("/api/models").json()]
        assert ids == ["aa-demo", "zz-demo"]

    def test_listing_includes_metadata_and_metrics(self, client, stores):
        model_store, data_store = stores
        model_id, model, _ = seed_model(model_store, data_store)
        (entry,) = client.get("/api/models").json()
        assert entry["id"] == model_id
        assert entry["algorithm"] == "decision_tree"
        assert entry["class_labels"] == [0, 194]
        assert entry["class_names"][0] == "Refugees"
        assert entry["metrics"]["accuracy"] == pytest.approx(
            model.metadata.metrics["accuracy"]
        )

    def test_unreadable_store_is_a_service_error(self, tmp_path):
        bogus = tmp_path / "not-a-dir"
        bogus.write_text("file, not directory")
        app = create_app(model_dir=str(bogus), data_dir=str(tmp_path / "d"), workers=1)
        with TestClient(app) as client:
            response = client.get("/api/models")
            assert response.status_code == 500
            assert "unreadable" in response.json()["detail"]


class TestClassify:
    def test_matches_direct_prediction(self, client, stores):
        model_store, data_store = stores
        model_id, model, _ = seed_model(model_store, data_store)
        body = {"model_id": model_id, "lat": 33.3, "lon": 44.4}
        response = client.post("/api/classify", json=body)
        assert response.status_code == 200
        payload = response.json()
        assert payload["label"] == model.predict(33.3, 44.4)
        assert payload["classes"] == [0, 194]
        assert payload["probabilities"] == pytest.approx(
            list(model.predict_proba(33.3, 44.4))
        )
        assert abs(sum(payload["probabilities"]) - 1.0) < 1e-9
        assert payload["in_bbox"] is True

    def test_idempotent(self, client, stores):
        model_store, data_store = stores
        model_id, _, _ = seed_model(model_store, data_store)
        body = {"model_id": model_id, "lat": 36.19, "lon": 44.01}
        first = client.post("/api/classify", json=body).json()
        second = client.post("/api/classify", json=body).json()
        assert first == second

    def test_outside_box_is_flagged_not_rejected(self, client, stores):
        model_store, data_store = stores
        model_id, _, _ = seed_model(model_store, data_store)
        response = client.post(
            "/api/classify", json={"model_id": model_id, "lat": 0.0, "lon": 0.0}
        )
        assert response.status_code == 200
        payload = response.json()
        assert payload["in_bbox"] is False
        assert payload["label"] in (0, 194)

    def test_unknown_model_is_404(self, client):
        response = client.post(
            "/api/classify", json={"model_id": "missing", "lat": 33.0, "lon": 44.0}
        )
        assert response.status_code == 404

    @pytest.mark.parametrize("value", ["NaN", "Infinity"])
    def test_non_finite_coordinates_rejected(self, client, stores, value):
        model_store, data_store = stores
        model_id, _, _ = seed_model(model_store, data_store)
        raw = '{"model_id": "%s", "lat": %s, "lon": 44.0}' % (model_id, value)
        response = client.post(
            "/api/classify", content=raw, headers={"content-type": "application/json"}
        )
        assert response.status_code == 422


class TestPoints:
    def test_limit_larger_than_dataset_returns_everything(self, client, stores):
        model_store, data_store = stores
        _, _, data = seed_model(model_store, data_store, n=120)
        payload = client.get("/api/points", params={"dataset": "demo", "limit": 500}).json()
        assert payload["total"] == 120
        assert payload["returned"] == 120

    def test_downsample_is_seeded_and_stable(self, client, stores):
        model_store, data_store = stores
        seed_model(model_store, data_store, n=300)
        first = client.get("/api/points", params={"dataset": "demo", "limit": 50}).json()
        second = client.get("/api/points", params={"dataset": "demo", "limit": 50}).json()
        assert first == second
        assert first["returned"] == 50

    def test_limit_zero_is_empty(self, client, stores):
        model_store, data_store = stores
        seed_model(model_store, data_store)
        payload = client.get("/api/points", params={"dataset": "demo", "limit": 0}).json()
        assert payload["points"] == [] and payload["returned"] == 0

    def test_unknown_dataset_is_404(self, client):
        assert client.get("/api/points", params={"dataset": "nope"}).status_code == 404

    def test_datasets_listing(self, client, stores):
        model_store, data_store = stores
        seed_model(model_store, data_store)
        (entry,) = client.get("/api/datasets").json()
        assert entry["id"] == "demo"
        assert entry["n_points"] == 300


class TestTrainJobs:
    def seed_data(self, data_store, n=400):
        data = random_dataset(n, seed=88, labels=[0, 73, 194], id="grid-data")
        data_store.save(data, "grid-data")
        return data

    def test_full_job_lifecycle(self, client, stores):
        model_store, data_store = stores
        self.seed_data(data_store)
        submit = client.post(
            "/api/train",
            json={"dataset": "grid-data", "classes": [0, 194], "algorithm": "decision_tree"},
        )
        assert submit.status_code == 202
        job_id = submit.json()["id"]
        assert submit.json()["status"] in ("queued", "running")

        final = wait_for_job(client, job_id)
        assert final["status"] == "done"
        assert final["report"]["accuracy"] >= 0.0
        model_id = final["model_id"]
        assert model_id == "dt-0-194"

        listed = [m["id"] for m in client.get("/api/models").json()]
        assert model_id in listed
        classified = client.post(
            "/api/classify", json={"model_id": model_id, "lat": 33.0, "lon": 44.0}
        )
        assert classified.status_code == 200

    def test_polling_unknown_job_is_404(self, client):
        assert client.get("/api/jobs/deadbeef").status_code == 404

    def test_single_class_rejected_at_submission(self, client, stores):
        _, data_store = stores
        self.seed_data(data_store)
        response = client.post(
            "/api/train",
            json={"dataset": "grid-data", "classes": [0], "algorithm": "decision_tree"},
        )
        assert response.status_code == 422

    def test_unknown_algorithm_rejected_at_submission(self, client, stores):
        _, data_store = stores
        self.seed_data(data_store)
        response = client.post(
            "/api/train",
            json={"dataset": "grid-data", "classes": [0, 194], "algorithm": "forest"},
        )
        assert response.status_code == 422

    def test_unknown_dataset_rejected(self, client):
        response = client.post(
            "/api/train",
            json={"dataset": "ghost", "classes": [0, 194], "algorithm": "knn"},
        )
        assert response.status_code == 404

    def test_classes_missing_from_dataset_rejected(self, client, stores):
        _, data_store = stores
        self.seed_data(data_store)
        response = client.post(
            "/api/train",
            json={"dataset": "grid-data", "classes": [0, 202], "algorithm": "knn"},
        )
        assert response.status_code == 422

    def test_failing_job_reports_failed_status(self, client, stores):
        _, data_store = stores
        data = random_dataset(8, seed=5, labels=[0, 73], id="mini")
        data_store.save(data, "mini")
        # k exceeds the 5-point train side: training must fail inside the job
        submit = client.post(
            "/api/train",
            json={
                "dataset": "mini",
                "classes": [0, 73],
                "algorithm": "knn",
                "hyperparameters": {"k": 50},
            },
        )
        assert submit.status_code == 202
        final = wait_for_job(client, submit.json()["id"])
        assert final["status"] == "failed"
        assert "exceeds" in final["error"]
        assert final["model_id"] is None


class TestConcurrentReads:
    def test_interleaved_classifications_match_serial(self, client, stores):
        from concurrent.futures import ThreadPoolExecutor

        model_store, data_store = stores
        model_id, model, _ = seed_model(model_store, data_store)
        rng = np.random.default_rng(11)
        queries = rng.uniform((29.2, 39.3), (37.2, 48.4), size=(40, 2))

        def call(q):
            return client.post(
                "/api/classify", json={"model_id": model_id, "lat": q[0], "lon": q[1]}
            ).json()["label"]

        serial = [call(q) for q in queries]
        with ThreadPoolExecutor(max_workers=8) as pool:
            concurrent = list(pool.map(call, queries))
        assert concurrent == serial
