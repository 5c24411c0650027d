"""Geospatial event-class classification toolkit.

Turns GDELT-style CSV exports into labeled coordinate datasets, trains
from-scratch classifiers (k-NN, Gaussian naive Bayes, CART decision tree,
softmax logistic regression) on every class-subset combination, evaluates
them, and serves the chosen model over HTTP for interactive map queries.
"""

from .dataset import (
    CombinationSpec,
    Dataset,
    SplitPair,
    enumerate_combinations,
    materialize_combination,
    split_train_test,
)
from .errors import (
    CorruptModelError,
    GeoClassifyError,
    LabelEncodingError,
    ModelFormatError,
    SchemaError,
    UnsupportedVersionError,
)
from .events import (
    ALL_LABELS,
    DEFAULT_COUNTRY_CODE,
    DEFAULT_YEAR_RANGE,
    IRAQ_BBOX,
    BoundingBox,
    EventClass,
    LabeledPoint,
    class_name,
)
from .classifiers import ALGORITHMS, TrainedModel, train
from .classifiers.serialize import load_model, load_model_bytes, save_model, save_model_bytes
from .ingest import (
    IngestReport,
    RawEventRecord,
    RejectedRow,
    encode_label,
    filter_records,
    generate_query,
    ingest_csv,
    parse_gdelt_csv,
)
from .metrics import EvaluationReport, cross_validate, evaluate, render_report
from .grid import GridResult, render_grid_report, rerun_from_manifest, run_grid, select_best

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "ALL_LABELS",
    "BoundingBox",
    "CombinationSpec",
    "CorruptModelError",
    "Dataset",
    "DEFAULT_COUNTRY_CODE",
    "DEFAULT_YEAR_RANGE",
    "EvaluationReport",
    "EventClass",
    "GeoClassifyError",
    "GridResult",
    "IngestReport",
    "IRAQ_BBOX",
    "LabelEncodingError",
    "LabeledPoint",
    "ModelFormatError",
    "RawEventRecord",
    "RejectedRow",
    "SchemaError",
    "SplitPair",
    "TrainedModel",
    "UnsupportedVersionError",
    "class_name",
    "cross_validate",
    "encode_label",
    "enumerate_combinations",
    "evaluate",
    "filter_records",
    "generate_query",
    "ingest_csv",
    "load_model",
    "load_model_bytes",
    "materialize_combination",
    "parse_gdelt_csv",
    "render_grid_report",
    "render_report",
    "rerun_from_manifest",
    "run_grid",
    "save_model",
    "save_model_bytes",
    "select_best",
    "split_train_test",
    "train",
]
