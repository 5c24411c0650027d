"""Run the full experiment grid: every class-subset dataset crossed with every algorithm.

Each experiment gets its own sub-seed derived by hashing (grid seed,
dataset id, algorithm), so results do not depend on execution order and a
persisted manifest can reproduce every metric bit for bit. Individual
experiment failures are recorded in the result, never fatal.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .classifiers import ALGORITHMS, ALGORITHM_SHORT, train
from .dataset import Dataset, enumerate_combinations, materialize_combination, split_train_test
from .metrics import EvaluationReport, evaluate, render_report

DEFAULT_SIZES = (2, 3, 4, 5)
GRID_FORMAT_VERSION = 1


def derive_seed(seed: int, dataset_id: str, algorithm: str) -> int:
    """Stable per-experiment seed; hashlib keeps it independent of the process."""
    digest = hashlib.sha256(f"{seed}|{dataset_id}|{algorithm}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass(frozen=True)
class ExperimentSpec:
    dataset_id: str
    class_labels: tuple[int, ...]
    algorithm: str
    ratio: float
    seed: int  # derived sub-seed
    hyperparameters: Optional[dict] = None

    @property
    def model_id(self) -> str:
        return f"{ALGORITHM_SHORT[self.algorithm]}-{self.dataset_id}"

    def to_dict(self) -> dict:
        return {
            "dataset_id": self.dataset_id,
            "class_labels": list(self.class_labels),
            "algorithm": self.algorithm,
            "ratio": self.ratio,
            "seed": self.seed,
            "hyperparameters": self.hyperparameters,
        }


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    report: Optional[EvaluationReport] = None
    error: Optional[str] = None
    duration: float = 0.0

    @property
    def ok(self) -> bool:
        return self.report is not None

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "report": self.report.to_dict() if self.report else None,
            "error": self.error,
            "duration": self.duration,
        }


@dataclass
class GridResult:
    manifest: dict
    results: list[ExperimentResult] = field(default_factory=list)

    def metrics_digest(self) -> str:
        """Hash of everything that must reproduce bit-for-bit (durations excluded)."""
        payload = {
            "manifest": self.manifest,
            "results": [
                {
                    "spec": r.spec.to_dict(),
                    "report": r.report.to_dict() if r.report else None,
                    "error": r.error,
                }
                for r in self.results
            ],
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def to_dict(self) -> dict:
        return {"manifest": self.manifest, "results": [r.to_dict() for r in self.results]}

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)


def _run_one(args) -> tuple[Optional[dict], Optional[str], float]:
    """Train-and-evaluate one experiment; runs in the parent or a worker process."""
    coords, labels, classes, bbox, spec_dict = args
    spec = ExperimentSpec(
        dataset_id=spec_dict["dataset_id"],
        class_labels=tuple(spec_dict["class_labels"]),
        algorithm=spec_dict["algorithm"],
        ratio=spec_dict["ratio"],
        seed=spec_dict["seed"],
        hyperparameters=spec_dict["hyperparameters"],
    )
    started = time.perf_counter()
    try:
        data = Dataset(
            id=spec.dataset_id,
            coords=coords,
            labels=labels,
            classes=classes,
            bbox=bbox,
        )
        pair = split_train_test(data, ratio=spec.ratio, seed=spec.seed, stratified=False)
        model = train(
            spec.algorithm,
            pair.train,
            hyperparameters=spec.hyperparameters,
            seed=spec.seed,
            model_id=spec.model_id,
        )
        report = evaluate(model, pair.test)
        return report.to_dict(), None, time.perf_counter() - started
    except Exception as exc:  # deliberate: a failed experiment must not kill the grid
        return None, f"{type(exc).__name__}: {exc}", time.perf_counter() - started


def _report_from_dict(data: dict) -> EvaluationReport:
    from .metrics import ClassReport, ConfusionMatrix

    import numpy as np

    confusion = ConfusionMatrix(
        labels=tuple(data["labels"]), counts=np.asarray(data["confusion"], dtype=np.int64)
    )
    per_class = tuple(
        ClassReport(
            label=c["label"],
            precision=c["precision"],
            recall=c["recall"],
            f1=c["f1"],
            support=c["support"],
        )
        for c in data["per_class"]
    )
    return EvaluationReport(
        confusion=confusion,
        accuracy=data["accuracy"],
        per_class=per_class,
        macro_precision=data["macro_precision"],
        macro_recall=data["macro_recall"],
        macro_f1=data["macro_f1"],
    )


def build_specs(
    full: Dataset,
    sizes: Sequence[int] = DEFAULT_SIZES,
    algorithms: Sequence[str] = ALGORITHMS,
    ratio: float = 0.7,
    seed: int = 42,
    hyperparameters: Optional[dict] = None,
) -> list[ExperimentSpec]:
    """Experiment specs in canonical order: subsets by (size, lexicographic),
    then algorithms in the given order."""
    for algorithm in algorithms:
        if algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {algorithm!r}")
    combos = enumerate_combinations(full.classes, sizes)
    specs = []
    for subset in combos.subsets:
        dataset_id = "-".join(str(l) for l in subset)
        for algorithm in algorithms:
            specs.append(
                ExperimentSpec(
                    dataset_id=dataset_id,
                    class_labels=subset,
                    algorithm=algorithm,
                    ratio=ratio,
                    seed=derive_seed(seed, dataset_id, algorithm),
                    hyperparameters=(hyperparameters or {}).get(algorithm),
                )
            )
    return specs


def run_grid(
    full: Dataset,
    sizes: Sequence[int] = DEFAULT_SIZES,
    algorithms: Sequence[str] = ALGORITHMS,
    ratio: float = 0.7,
    seed: int = 42,
    hyperparameters: Optional[dict] = None,
    workers: int = 1,
) -> GridResult:
    """Materialize every class combination, split, train, and evaluate."""
    if len(full) == 0:
        raise ValueError("cannot run a grid on an empty dataset")
    specs = build_specs(full, sizes, algorithms, ratio, seed, hyperparameters)

    datasets: dict[str, Dataset] = {}
    for spec in specs:
        if spec.dataset_id not in datasets:
            datasets[spec.dataset_id] = materialize_combination(full, spec.class_labels)

    manifest = {
        "format_version": GRID_FORMAT_VERSION,
        "seed": seed,
        "ratio": ratio,
        "sizes": sorted(set(int(s) for s in sizes)),
        "algorithms": list(algorithms),
        "hyperparameters": hyperparameters,
        "source_dataset": {"id": full.id, "content_hash": full.content_hash(), "n": len(full)},
        "datasets": [datasets[d].manifest() for d in sorted(datasets)],
    }

    payloads = [
        (
            datasets[s.dataset_id].coords,
            datasets[s.dataset_id].labels,
            datasets[s.dataset_id].classes,
            datasets[s.dataset_id].bbox,
            s.to_dict(),
        )
        for s in specs
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(_run_one, payloads))
    else:
        raw = [_run_one(p) for p in payloads]

    results = []
    for spec, (report_dict, error, duration) in zip(specs, raw):
        results.append(
            ExperimentResult(
                spec=spec,
                report=_report_from_dict(report_dict) if report_dict else None,
                error=error,
                duration=duration,
            )
        )
    return GridResult(manifest=manifest, results=results)


def rerun_from_manifest(manifest: dict, full: Dataset) -> GridResult:
    """Re-execute a grid exactly as recorded in its manifest."""
    source = manifest.get("source_dataset", {})
    if source.get("content_hash") and source["content_hash"] != full.content_hash():
        raise ValueError(
            "dataset content hash does not match the manifest; results would not reproduce"
        )
    return run_grid(
        full,
        sizes=manifest["sizes"],
        algorithms=manifest["algorithms"],
        ratio=manifest["ratio"],
        seed=manifest["seed"],
        hyperparameters=manifest.get("hyperparameters"),
    )


def select_best(result: GridResult) -> ExperimentResult:
    """Deployment choice: maximize the minimum per-class F1, then accuracy,
    then earliest canonical position.

    Accuracy alone rewards degenerate majority-only models; requiring the
    weakest class to score keeps those out.
    """
    best = None
    for candidate in result.results:
        if not candidate.ok:
            continue
        key = (candidate.report.min_f1, candidate.report.accuracy)
        if best is None or key > (best.report.min_f1, best.report.accuracy):
            best = candidate
    if best is None:
        raise ValueError("no successful experiments to select from")
    return best


def render_grid_report(result: GridResult) -> str:
    """All experiment tables plus a ranked summary."""
    lines = []
    lines.append(
        f"experiment grid: {len(result.results)} experiments, "
        f"seed {result.manifest['seed']}, train ratio {result.manifest['ratio']}"
    )
    lines.append("")
    for r in result.results:
        title = f"[{r.spec.dataset_id}] {r.spec.algorithm}"
        if r.ok:
            lines.append(render_report(r.report, title=title))
        else:
            lines.append(f"{title}\n  FAILED: {r.error}")
        lines.append("")

    ranked = sorted(
        (r for r in result.results if r.ok),
        key=lambda r: (-r.report.min_f1, -r.report.accuracy),
    )
    lines.append("ranking (min per-class F1, then accuracy):")
    for i, r in enumerate(ranked[:20], 1):
        lines.append(
            f"  {i:>2}. {r.spec.algorithm:<19} {r.spec.dataset_id:<18} "
            f"min-F1 {r.report.min_f1:.4f}  accuracy {r.report.accuracy:.4f}"
        )
    failed = [r for r in result.results if not r.ok]
    if failed:
        lines.append(f"failed experiments: {len(failed)}")
    return "\n".join(lines)
