"""Pydantic request/response bodies for the HTTP API."""

from __future__ import annotations

import math
from typing import Optional

from pydantic import BaseModel, Field, field_validator

from ..classifiers import ALGORITHMS


class ModelInfo(BaseModel):
    id: str
    algorithm: str
    class_labels: list[int]
    class_names: list[str]
    dataset_id: str = ""
    hyperparameters: dict = {}
    seed: int = 0
    trained_at: Optional[str] = None
    bbox: Optional[list[float]] = None
    metrics: Optional[dict] = None


class ClassifyRequest(BaseModel):
    model_id: str
    lat: float
    lon: float

    @field_validator("lat", "lon")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("coordinate must be finite")
        return value


class ClassifyResponse(BaseModel):
    model_id: str
    label: int
    class_name: str
    classes: list[int]
    class_names: list[str]
    probabilities: list[float]
    in_bbox: bool


class PointOut(BaseModel):
    lat: float
    lon: float
    label: int


class PointsResponse(BaseModel):
    dataset: str
    total: int
    returned: int
    classes: list[int]
    points: list[PointOut]


class DatasetInfo(BaseModel):
    id: str
    n_points: int
    classes: list[int]
    class_counts: dict[str, int]


class TrainRequest(BaseModel):
    dataset: str
    classes: list[int] = Field(min_length=2)
    algorithm: str
    hyperparameters: dict = {}
    seed: int = 42
    train_ratio: float = 0.7
    stratified: bool = False
    model_id: Optional[str] = None

    @field_validator("classes")
    @classmethod
    def _distinct(cls, value: list[int]) -> list[int]:
        if len(set(value)) < 2:
            raise ValueError("need at least 2 distinct classes")
        return value

    @field_validator("algorithm")
    @classmethod
    def _known(cls, value: str) -> str:
        if value not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {value!r}; expected one of {list(ALGORITHMS)}")
        return value

    @field_validator("train_ratio")
    @classmethod
    def _ratio(cls, value: float) -> float:
        if not (0.0 < value < 1.0):
            raise ValueError("train_ratio must be in (0, 1)")
        return value


class JobInfo(BaseModel):
    id: str
    status: str
    request: dict
    model_id: Optional[str] = None
    report: Optional[dict] = None
    error: Optional[str] = None
    submitted_at: str
    finished_at: Optional[str] = None
