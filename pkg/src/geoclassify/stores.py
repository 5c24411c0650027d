"""Filesystem-backed stores for persisted models and datasets.

Writes go through a temp file plus atomic rename, so a reader can never
observe a half-written model and a crashed writer leaves no partial
output. Model ids double as file names and are restricted accordingly.
"""

from __future__ import annotations

import os
import re
import tempfile
import threading
from pathlib import Path

from .classifiers import TrainedModel
from .classifiers.serialize import load_model_bytes, save_model_bytes
from .dataset import Dataset

_ID_PATTERN = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")

MODEL_SUFFIX = ".model.json"
DATASET_SUFFIX = ".csv"


def _check_id(value: str, what: str) -> str:
    if not _ID_PATTERN.match(value):
        raise ValueError(f"invalid {what} id {value!r}: use letters, digits, '.', '_', '-'")
    return value


def atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


class ModelStore:
    """Directory of serialized models, one file per model id."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self._write_lock = threading.Lock()

    def path(self, model_id: str) -> Path:
        return self.directory / f"{_check_id(model_id, 'model')}{MODEL_SUFFIX}"

    def list_ids(self) -> list[str]:
        if not self.directory.exists():
            return []
        names = os.listdir(self.directory)  # raises if unreadable; callers surface it
        return sorted(
            name[: -len(MODEL_SUFFIX)] for name in names if name.endswith(MODEL_SUFFIX)
        )

    def exists(self, model_id: str) -> bool:
        return self.path(model_id).exists()

    def save(self, model: TrainedModel, model_id: str | None = None) -> str:
        model_id = _check_id(model_id or model.metadata.model_id, "model")
        with self._write_lock:
            atomic_write(self.path(model_id), save_model_bytes(model))
        return model_id

    def load(self, model_id: str) -> TrainedModel:
        path = self.path(model_id)
        if not path.exists():
            raise FileNotFoundError(f"no model {model_id!r} in {self.directory}")
        return load_model_bytes(path.read_bytes())

    def delete(self, model_id: str) -> None:
        self.path(model_id).unlink(missing_ok=True)


class DatasetStore:
    """Directory of dataset CSVs (lat,lon,label) addressed by id."""

    def __init__(self, directory):
        self.directory = Path(directory)

    def path(self, dataset_id: str) -> Path:
        return self.directory / f"{_check_id(dataset_id, 'dataset')}{DATASET_SUFFIX}"

    def list_ids(self) -> list[str]:
        if not self.directory.exists():
            return []
        return sorted(
            name[: -len(DATASET_SUFFIX)]
            for name in os.listdir(self.directory)
            if name.endswith(DATASET_SUFFIX)
        )

    def exists(self, dataset_id: str) -> bool:
        return self.path(dataset_id).exists()

    def save(self, dataset: Dataset, dataset_id: str | None = None) -> str:
        dataset_id = _check_id(dataset_id or dataset.id, "dataset")
        atomic_write(self.path(dataset_id), dataset.to_csv_bytes())
        return dataset_id

    def load(self, dataset_id: str) -> Dataset:
        path = self.path(dataset_id)
        if not path.exists():
            raise FileNotFoundError(f"no dataset {dataset_id!r} in {self.directory}")
        return Dataset.from_csv(path, id=dataset_id)
