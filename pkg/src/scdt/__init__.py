"""Signed cumulative distribution transforms for 1-D signal analysis.

The package turns signed time series into transport-map tuples against a
fixed positive reference density, measures them with a generalized
Wasserstein-2 metric that is a plain Euclidean norm in embedding
coordinates, constructs interpolation paths with geodesy diagnostics, and
classifies signals by nearest (local) subspace in the embedding space.
"""

__version__ = "0.1.0"

from .classify import (
    Prediction,
    ProjectionResult,
    RankPolicy,
    SubspaceModel,
    fit,
    predict,
    predict_by_path_length,
    project,
    projection_path_report,
)
from .datagen import (
    DatasetSpec,
    ExperimentData,
    counterexample_pair,
    figure_signals,
    make_experiment1,
    template,
)
from .errors import (
    PersistenceError,
    ReferenceMismatchError,
    ScdtError,
    ValidationError,
)
from .geodesy import (
    DEFAULT_ALPHAS,
    ConstantSpeedReport,
    PathPointSet,
    constant_speed_check,
    ds_distance,
    geodesic_midpoint_diagnostic,
    geodesic_path,
    path_point,
    path_point_from_scdt,
    scdt_distance,
    w2,
)
from .io_persist import (
    LabeledDataset,
    emit_path_figure,
    load_dataset_spec,
    load_model,
    load_scdt,
    read_signal_csv,
    read_ucr,
    save_dataset_spec,
    save_model,
    save_scdt,
    write_signal_csv,
)
from .signals import (
    Signal,
    SignalPart,
    Warp,
    apply_warp,
    jordan_decompose,
    l1_norm,
    make_signal,
    resample,
)
from .transform import (
    Cdf,
    EmbeddingVector,
    Reference,
    Scdt,
    TransportMap,
    ValidityReport,
    cdf,
    cdt_forward,
    compose_warp,
    flatten,
    pushforward,
    quantile,
    relaxed_inverse,
    scdt_forward,
    scdt_inverse,
    unflatten,
    validate_scdt,
)

__all__ = [
    "__version__",
    # signals
    "Signal", "SignalPart", "Warp", "make_signal", "l1_norm",
    "jordan_decompose", "apply_warp", "resample",
    # transform
    "Cdf", "Reference", "TransportMap", "Scdt", "EmbeddingVector",
    "ValidityReport", "cdf", "quantile", "cdt_forward", "pushforward",
    "scdt_forward", "scdt_inverse", "relaxed_inverse", "compose_warp",
    "validate_scdt", "flatten", "unflatten",
    # geodesy
    "DEFAULT_ALPHAS", "PathPointSet", "ConstantSpeedReport", "w2",
    "ds_distance", "scdt_distance", "path_point", "path_point_from_scdt",
    "geodesic_path", "constant_speed_check", "geodesic_midpoint_diagnostic",
    # classify
    "RankPolicy", "SubspaceModel", "Prediction", "ProjectionResult", "fit",
    "predict", "project", "projection_path_report", "predict_by_path_length",
    # datagen
    "DatasetSpec", "ExperimentData", "template", "make_experiment1",
    "counterexample_pair", "figure_signals",
    # io
    "LabeledDataset", "read_signal_csv", "write_signal_csv", "read_ucr",
    "save_model", "load_model", "save_scdt", "load_scdt",
    "save_dataset_spec", "load_dataset_spec", "emit_path_figure",
    # errors
    "ScdtError", "ValidationError", "ReferenceMismatchError", "PersistenceError",
]
