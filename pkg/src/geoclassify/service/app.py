"""HTTP surface: model listing, interactive classification, map overlays, training jobs."""

from __future__ import annotations

import hashlib
import math
import os
from contextlib import asynccontextmanager
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import __version__
from ..classifiers import train
from ..classifiers.serialize import save_model_bytes
from ..dataset import materialize_combination, split_train_test
from ..errors import ModelFormatError
from ..events import IRAQ_BBOX, BoundingBox, class_name
from ..metrics import evaluate
from ..stores import DatasetStore, ModelStore, atomic_write
from .jobs import JobManager
from .schemas import (
    ClassifyRequest,
    ClassifyResponse,
    DatasetInfo,
    JobInfo,
    ModelInfo,
    PointOut,
    PointsResponse,
    TrainRequest,
)

DEFAULT_MODEL_DIR = "models"
DEFAULT_DATA_DIR = "data"


def _downsample_seed(dataset_id: str, limit: int) -> int:
    # stable across calls and restarts: the sample depends only on (dataset, limit)
    digest = hashlib.sha256(f"{dataset_id}|{limit}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def create_app(
    model_dir: str | None = None,
    data_dir: str | None = None,
    workers: int | None = None,
) -> FastAPI:
    model_dir = model_dir or os.environ.get("GEOCLASSIFY_MODEL_DIR", DEFAULT_MODEL_DIR)
    data_dir = data_dir or os.environ.get("GEOCLASSIFY_DATA_DIR", DEFAULT_DATA_DIR)
    if workers is None:
        workers = int(os.environ.get("GEOCLASSIFY_WORKERS", "2"))

    models = ModelStore(model_dir)
    datasets = DatasetStore(data_dir)
    jobs = JobManager(workers=workers)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        jobs.shutdown()

    app = FastAPI(title="geoclassify", version=__version__, lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def invalid_request(request: Request, exc: RequestValidationError):
        # the default handler echoes the offending input, which breaks JSON
        # rendering when that input is NaN or Infinity
        detail = [
            {"loc": list(err.get("loc", ())), "msg": err.get("msg", ""), "type": err.get("type", "")}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=422, content={"detail": detail})

    def load_model_or_404(model_id: str):
        try:
            return models.load(model_id)
        except FileNotFoundError:
            raise HTTPException(status_code=404, detail=f"model {model_id!r} not found")
        except ModelFormatError as exc:
            raise HTTPException(status_code=500, detail=f"stored model unusable: {exc}")

    @app.get("/healthz", response_class=PlainTextResponse)
    def healthz() -> str:
        return "OK"

    @app.get("/api/models", response_model=list[ModelInfo])
    def list_models():
        try:
            ids = models.list_ids()
        except OSError as exc:
            raise HTTPException(status_code=500, detail=f"model store unreadable: {exc}")
        out = []
        for model_id in ids:
            try:
                model = models.load(model_id)
            except ModelFormatError as exc:
                raise HTTPException(
                    status_code=500, detail=f"model store corrupt at {model_id!r}: {exc}"
                )
            meta = model.metadata
            out.append(
                ModelInfo(
                    id=model_id,
                    algorithm=meta.algorithm,
                    class_labels=list(model.class_labels),
                    class_names=[class_name(l) for l in model.class_labels],
                    dataset_id=meta.dataset_id,
                    hyperparameters=meta.hyperparameters,
                    seed=meta.seed,
                    trained_at=meta.trained_at,
                    bbox=list(meta.bbox) if meta.bbox else None,
                    metrics=meta.metrics,
                )
            )
        return out

    @app.post("/api/classify", response_model=ClassifyResponse)
    def classify(request: ClassifyRequest):
        model = load_model_or_404(request.model_id)
        label = model.predict(request.lat, request.lon)
        probabilities = model.predict_proba(request.lat, request.lon)
        meta_bbox = model.metadata.bbox
        bbox = BoundingBox(*meta_bbox) if meta_bbox else IRAQ_BBOX
        return ClassifyResponse(
            model_id=request.model_id,
            label=label,
            class_name=class_name(label),
            classes=list(model.class_labels),
            class_names=[class_name(l) for l in model.class_labels],
            probabilities=[float(p) for p in probabilities],
            in_bbox=bbox.contains(request.lat, request.lon),
        )

    @app.get("/api/datasets", response_model=list[DatasetInfo])
    def list_datasets():
        try:
            ids = datasets.list_ids()
        except OSError as exc:
            raise HTTPException(status_code=500, detail=f"dataset store unreadable: {exc}")
        out = []
        for dataset_id in ids:
            ds = datasets.load(dataset_id)
            out.append(
                DatasetInfo(
                    id=dataset_id,
                    n_points=len(ds),
                    classes=list(ds.classes),
                    class_counts={str(k): v for k, v in ds.class_counts().items()},
                )
            )
        return out

    @app.get("/api/points", response_model=PointsResponse)
    def points(dataset: str, limit: int = Query(default=1000, ge=0)):
        if not datasets.exists(dataset):
            raise HTTPException(status_code=404, detail=f"dataset {dataset!r} not found")
        ds = datasets.load(dataset)
        n = len(ds)
        if limit >= n:
            chosen = np.arange(n)
        else:
            rng = np.random.default_rng(_downsample_seed(dataset, limit))
            chosen = np.sort(rng.choice(n, size=limit, replace=False))
        return PointsResponse(
            dataset=dataset,
            total=n,
            returned=len(chosen),
            classes=list(ds.classes),
            points=[
                PointOut(lat=float(ds.coords[i, 0]), lon=float(ds.coords[i, 1]),
                         label=int(ds.labels[i]))
                for i in chosen
            ],
        )

    @app.post("/api/train", response_model=JobInfo, status_code=202)
    def submit_training(request: TrainRequest):
        if not datasets.exists(request.dataset):
            raise HTTPException(status_code=404, detail=f"dataset {request.dataset!r} not found")
        full = datasets.load(request.dataset)
        missing = [c for c in request.classes if c not in full.classes]
        if missing:
            raise HTTPException(
                status_code=422,
                detail=f"classes {missing} not present in dataset {request.dataset!r}",
            )

        state: dict = {}

        def work():
            subset = materialize_combination(full, request.classes)
            pair = split_train_test(
                subset, ratio=request.train_ratio, seed=request.seed,
                stratified=request.stratified,
            )
            model = train(
                request.algorithm,
                pair.train,
                hyperparameters=request.hyperparameters or None,
                seed=request.seed,
                model_id=request.model_id,
            )
            report = evaluate(model, pair.test)
            model.metadata.metrics = {
                "accuracy": report.accuracy,
                "min_f1": report.min_f1,
                "macro_f1": report.macro_f1,
                "test_points": report.confusion.total,
            }
            state["model"] = model
            state["bytes"] = save_model_bytes(model)
            return model.metadata.model_id, report.to_dict()

        def persist() -> str:
            # runs under the job lock: the model file and the done status
            # appear together
            model = state["model"]
            atomic_write(models.path(model.metadata.model_id), state["bytes"])
            return model.metadata.model_id

        job = jobs.submit(request.model_dump(), work, persist)
        return JobInfo(**jobs.snapshot(job.id))

    @app.get("/api/jobs/{job_id}", response_model=JobInfo)
    def job_status(job_id: str):
        snapshot = jobs.snapshot(job_id)
        if snapshot is None:
            raise HTTPException(status_code=404, detail=f"job {job_id!r} not found")
        return JobInfo(**snapshot)

    return app
