"""Versioned, self-describing model persistence.

Models are stored as canonical JSON (sorted keys, fixed separators) so an
identical model always serializes to identical bytes. A sha256 checksum
over the payload sits in the ``checksum`` field; loading verifies it and
rejects unknown format versions instead of guessing.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from ..errors import CorruptModelError, UnsupportedVersionError
from . import ModelMetadata, TrainedModel, rebuild, _FAMILIES

FORMAT_NAME = "geoclassify-model"
FORMAT_VERSION = 1


def _canonical(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False).encode(
        "utf-8"
    )


def save_model_bytes(model: TrainedModel) -> bytes:
    meta = model.metadata
    payload = {
        "format": FORMAT_NAME,
        "format_version": FORMAT_VERSION,
        "algorithm": meta.algorithm,
        "class_labels": list(model.class_labels),
        "hyperparameters": meta.hyperparameters,
        "seed": meta.seed,
        "metadata": {
            "model_id": meta.model_id,
            "dataset_id": meta.dataset_id,
            "trained_at": meta.trained_at,
            "bbox": list(meta.bbox) if meta.bbox else None,
            "metrics": meta.metrics,
        },
        "params": model.impl.to_params(),
    }
    payload["checksum"] = hashlib.sha256(_canonical(payload)).hexdigest()
    return _canonical(payload)


def load_model_bytes(data: bytes) -> TrainedModel:
    try:
        payload = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptModelError(f"model payload is not valid JSON: {exc}") from None
    if not isinstance(payload, dict) or payload.get("format") != FORMAT_NAME:
        raise CorruptModelError("payload is not a model file (missing format marker)")
    version = payload.get("format_version")
    if not isinstance(version, int):
        raise CorruptModelError("model file has no integer format_version")
    if version > FORMAT_VERSION:
        raise UnsupportedVersionError(
            f"model format version {version} is newer than supported version {FORMAT_VERSION}"
        )

    claimed = payload.pop("checksum", None)
    actual = hashlib.sha256(_canonical(payload)).hexdigest()
    if claimed != actual:
        raise CorruptModelError("model checksum mismatch: payload corrupted or edited")

    algorithm = payload.get("algorithm")
    if algorithm not in _FAMILIES:
        raise CorruptModelError(f"model declares unknown algorithm {algorithm!r}")
    meta_raw = payload.get("metadata", {})
    metadata = ModelMetadata(
        model_id=meta_raw.get("model_id", ""),
        algorithm=algorithm,
        dataset_id=meta_raw.get("dataset_id", ""),
        class_labels=tuple(int(c) for c in payload["class_labels"]),
        hyperparameters=payload.get("hyperparameters", {}),
        seed=payload.get("seed", 0),
        trained_at=meta_raw.get("trained_at"),
        bbox=tuple(meta_raw["bbox"]) if meta_raw.get("bbox") else None,
        metrics=meta_raw.get("metrics"),
    )
    try:
        return rebuild(algorithm, payload["params"], metadata.class_labels, metadata)
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModelError(f"model parameter payload is unusable: {exc}") from None


def save_model(model: TrainedModel, path) -> None:
    Path(path).write_bytes(save_model_bytes(model))


def load_model(path) -> TrainedModel:
    return load_model_bytes(Path(path).read_bytes())
