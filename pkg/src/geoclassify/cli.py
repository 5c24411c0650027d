"""Command-line entry point: thin wiring over the library.

Every subcommand exits nonzero with a one-line diagnostic on failure and
never leaves partial output files behind (writes go through a temp file
and an atomic rename).
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .classifiers import ALGORITHMS, train
from .classifiers.serialize import load_model, save_model_bytes
from .dataset import Dataset, enumerate_combinations, materialize_combination, split_train_test
from .errors import GeoClassifyError
from .events import DEFAULT_COUNTRY_CODE, DEFAULT_YEAR_RANGE, IRAQ_BBOX, BoundingBox, EventClass
from .grid import render_grid_report, run_grid, select_best
from .ingest import generate_query, ingest_csv
from .metrics import cross_validate, evaluate, render_cross_validation, render_report
from .stores import ModelStore, atomic_write
from .synthetic import generate_synthetic_csv

DATASET_HEADER = b"lat,lon,label"


def _parse_classes(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ValueError(f"cannot parse class list {text!r}; expected e.g. 0,194")


def _parse_sizes(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ValueError(f"cannot parse sizes {text!r}; expected e.g. 2,3,4,5")


def _parse_bbox(text: str) -> BoundingBox:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError("bbox needs 4 numbers: lat_min,lat_max,lon_min,lon_max")
    return BoundingBox(*parts)


def _parse_hyper(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ValueError(f"hyperparameter {pair!r} must look like name=value")
        key, raw = pair.split("=", 1)
        lowered = raw.lower()
        if lowered in ("none", "null"):
            value = None
        elif lowered in ("true", "false"):
            value = lowered == "true"
        else:
            try:
                value = int(raw)
            except ValueError:
                try:
                    value = float(raw)
                except ValueError:
                    value = raw
        out[key] = value
    return out


def _parse_event(text: str) -> EventClass:
    for ec in EventClass:
        if text in (str(ec.label), ec.code, ec.name, ec.name.lower(), ec.display_name):
            return ec
    raise ValueError(f"unknown event {text!r}; use a label (0, 73, ...) or code (REF, 073, ...)")


def _load_input_dataset(path: str, bbox: BoundingBox, args) -> Dataset:
    """Accept either an already-ingested dataset CSV or a raw GDELT export."""
    with Path(path).open("rb") as fh:
        head = fh.read(len(DATASET_HEADER))
    if head == DATASET_HEADER:
        return Dataset.from_csv(path, bbox=bbox)
    dataset, report = ingest_csv(
        path,
        bbox=bbox,
        year_min=getattr(args, "year_min", DEFAULT_YEAR_RANGE[0]),
        year_max=getattr(args, "year_max", DEFAULT_YEAR_RANGE[1]),
        country_code=getattr(args, "country", DEFAULT_COUNTRY_CODE),
    )
    print(report.render_text(), file=sys.stderr)
    return dataset


def _timestamp(args) -> str | None:
    if getattr(args, "deterministic", False):
        return None
    return datetime.now(timezone.utc).isoformat()


# ---- subcommand implementations -------------------------------------------


def cmd_ingest(args) -> int:
    dataset, report = ingest_csv(
        args.input,
        bbox=args.bbox,
        year_min=args.year_min,
        year_max=args.year_max,
        country_code=args.country,
    )
    atomic_write(Path(args.output), dataset.to_csv_bytes())
    print(report.render_text())
    if args.report_json:
        atomic_write(
            Path(args.report_json),
            json.dumps(report.to_dict(), indent=2, sort_keys=True).encode("utf-8"),
        )
    print(f"wrote {len(dataset)} points to {args.output}")
    return 0


def cmd_gen_query(args) -> int:
    print(generate_query(_parse_event(args.event), args.year_min, args.year_max, args.bbox))
    return 0


def cmd_combos(args) -> int:
    full = _load_input_dataset(args.input, args.bbox, args)
    spec = enumerate_combinations(full.classes, args.sizes)
    out_dir = Path(args.out_dir)
    manifest = []
    for subset in spec.subsets:
        combo = materialize_combination(full, subset)
        atomic_write(out_dir / f"{combo.id}.csv", combo.to_csv_bytes())
        manifest.append(combo.manifest())
        print(f"{combo.id:<20} {len(combo):>8} instances")
    atomic_write(
        out_dir / "manifest.json",
        json.dumps(manifest, indent=2, sort_keys=True).encode("utf-8"),
    )
    print(f"wrote {len(manifest)} combination datasets to {out_dir}")
    return 0


def cmd_train(args) -> int:
    full = _load_input_dataset(args.input, args.bbox, args)
    subset = materialize_combination(full, args.classes) if args.classes else full
    pair = split_train_test(subset, ratio=args.train_ratio, seed=args.seed,
                            stratified=args.stratified)
    model = train(
        args.algorithm,
        pair.train,
        hyperparameters=_parse_hyper(args.hyper) or None,
        seed=args.seed,
        model_id=args.model_id,
        trained_at=_timestamp(args),
    )
    report = evaluate(model, pair.test)
    model.metadata.metrics = {
        "accuracy": report.accuracy,
        "min_f1": report.min_f1,
        "macro_f1": report.macro_f1,
        "test_points": report.confusion.total,
    }
    output = Path(args.output) if args.output else Path(f"{model.metadata.model_id}.model.json")
    atomic_write(output, save_model_bytes(model))
    print(render_report(report, title=f"{args.algorithm} on {subset.id} "
                                      f"(train {len(pair.train)}, test {len(pair.test)})"))
    print(f"wrote model {model.metadata.model_id} to {output}")
    return 0


def cmd_eval(args) -> int:
    model = load_model(args.model)
    data = _load_input_dataset(args.input, args.bbox, args)
    if args.classes:
        data = materialize_combination(data, args.classes)
    report = evaluate(model, data)
    print(render_report(report, title=f"{model.metadata.model_id} on {data.id}"))
    if args.json:
        atomic_write(
            Path(args.json),
            json.dumps(report.to_dict(), indent=2, sort_keys=True).encode("utf-8"),
        )
    return 0


def cmd_cv(args) -> int:
    full = _load_input_dataset(args.input, args.bbox, args)
    subset = materialize_combination(full, args.classes) if args.classes else full
    result = cross_validate(
        args.algorithm,
        subset,
        folds=args.folds,
        seed=args.seed,
        hyperparameters=_parse_hyper(args.hyper) or None,
    )
    print(f"{args.folds}-fold cross validation: {args.algorithm} on {subset.id}")
    print(render_cross_validation(result))
    return 0


def cmd_grid(args) -> int:
    full = _load_input_dataset(args.input, args.bbox, args)
    algorithms = ALGORITHMS if args.algorithms == "all" else tuple(args.algorithms.split(","))
    result = run_grid(
        full,
        sizes=args.sizes,
        algorithms=algorithms,
        ratio=args.train_ratio,
        seed=args.seed,
        workers=args.workers,
    )
    text = render_grid_report(result)
    if args.deterministic:
        for r in result.results:
            r.duration = 0.0
    if args.out_dir:
        out_dir = Path(args.out_dir)
        atomic_write(out_dir / "report.txt", text.encode("utf-8"))
        atomic_write(out_dir / "results.json", result.to_json().encode("utf-8"))
        print(f"wrote grid outputs to {out_dir}", file=sys.stderr)
    print(text)
    best = select_best(result)
    print(
        f"selected: {best.spec.algorithm} on {best.spec.dataset_id} "
        f"(min per-class F1 {best.report.min_f1:.4f}, accuracy {best.report.accuracy:.4f})"
    )
    return 0


def cmd_classify(args) -> int:
    path = Path(args.model)
    if path.exists():
        model = load_model(path)
    else:
        model = ModelStore(args.model_dir).load(args.model)
    label = model.predict(args.lat, args.lon)
    print(f"{label} {EventClass.from_label(label).display_name}")
    if args.probabilities:
        probs = model.predict_proba(args.lat, args.lon)
        for cls, p in zip(model.class_labels, probs):
            print(f"  {cls}: {p:.6f}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(model_dir=args.model_dir, data_dir=args.data_dir, workers=args.workers)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def cmd_synth(args) -> int:
    stats = generate_synthetic_csv(
        args.output, n=args.n, seed=args.seed, noise=args.noise, invalid_rows=args.invalid_rows
    )
    print(f"wrote {stats['n']} rows to {args.output} "
          f"(noise flipped {stats['flipped']}, classes {stats['class_counts']})")
    return 0


# ---- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geoclassify",
        description="Geospatial event classification: ingest, train, evaluate, serve.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    common.add_argument("--train-ratio", type=float, default=0.7,
                        help="training fraction (default 0.7)")
    common.add_argument("--stratified", action="store_true",
                        help="stratify the train/test split by class")
    common.add_argument("--deterministic", action="store_true",
                        help="omit timestamps so outputs are byte-reproducible")
    common.add_argument("--bbox", type=_parse_bbox, default=IRAQ_BBOX,
                        help="lat_min,lat_max,lon_min,lon_max (default: Iraq study box)")
    common.add_argument("--year-min", type=int, default=DEFAULT_YEAR_RANGE[0])
    common.add_argument("--year-max", type=int, default=DEFAULT_YEAR_RANGE[1])
    common.add_argument("--country", default=DEFAULT_COUNTRY_CODE)

    p = sub.add_parser("ingest", parents=[common],
                       help="parse a raw export into a dataset CSV plus report")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--report-json", default=None)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("gen-query", parents=[common],
                       help="print the source-table SQL for one event class")
    p.add_argument("--event", required=True, help="class label or code, e.g. 0 or REF or 194")
    p.set_defaults(func=cmd_gen_query)

    p = sub.add_parser("combos", parents=[common],
                       help="materialize every class-subset dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--sizes", type=_parse_sizes, default=[2, 3, 4, 5])
    p.set_defaults(func=cmd_combos)

    p = sub.add_parser("train", parents=[common], help="train one model and report on the split")
    p.add_argument("--input", required=True)
    p.add_argument("--classes", type=_parse_classes, default=None, help="e.g. 0,194")
    p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    p.add_argument("--hyper", action="append", default=[], help="name=value, repeatable")
    p.add_argument("--model-id", default=None)
    p.add_argument("--output", default=None, help="model file path")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", parents=[common], help="evaluate a saved model on a dataset")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--classes", type=_parse_classes, default=None)
    p.add_argument("--json", default=None, help="also write the report as JSON")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("cv", parents=[common], help="k-fold cross validation")
    p.add_argument("--input", required=True)
    p.add_argument("--classes", type=_parse_classes, default=None)
    p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--hyper", action="append", default=[])
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("grid", parents=[common],
                       help="run every class combination against every algorithm")
    p.add_argument("--input", required=True)
    p.add_argument("--sizes", type=_parse_sizes, default=[2, 3, 4, 5])
    p.add_argument("--algorithms", default="all", help="'all' or comma list")
    p.add_argument("--out-dir", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("classify", parents=[common], help="classify one coordinate")
    p.add_argument("--model", required=True, help="model file path or id in --model-dir")
    p.add_argument("--model-dir", default="models")
    p.add_argument("--lat", type=float, required=True)
    p.add_argument("--lon", type=float, required=True)
    p.add_argument("--probabilities", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--model-dir", default="models")
    p.add_argument("--data-dir", default="data")
    p.add_argument("--workers", type=int, default=2)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("synth", parents=[common],
                       help="generate the synthetic fixture export")
    p.add_argument("--output", required=True)
    p.add_argument("--n", type=int, default=40_000)
    p.add_argument("--noise", type=float, default=0.25)
    p.add_argument("--invalid-rows", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GeoClassifyError, ValueError, FileNotFoundError, NotADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
