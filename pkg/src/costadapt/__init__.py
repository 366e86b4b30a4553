"""Online cost-sensitive adaptation of a fixed base classifier.

The adapted classifier is ``f(x) = f0(x) + w.x``; the weights ``w`` are
updated one sample at a time by a closed-form cost-weighted proximal step.
"""

from .baselines import BatchSvmConfig, batch_objective, make_pa_baseline, train_batch_cost_svm
from .core import (
    AdaptedClassifier,
    BaseScorer,
    CostSchedule,
    FeatureVector,
    Hyperparams,
    LinearAdaptation,
    LinearScorer,
    PrecomputedScorer,
    Sample,
    StepOutcome,
    UpdateCase,
    ZeroScorer,
    augment_bias,
    cost_for,
    dot,
    predict,
    score,
)
from .data import Dataset, SynthSpec, generate_synthetic, read_csv, read_libsvm, shuffled_stream, write_libsvm
from .errors import (
    CostAdaptError,
    DataError,
    DimensionMismatchError,
    FormatError,
    NumericError,
    ZeroVectorError,
)
from .evaluation import FoldPlan, Metrics, ProtocolResult, evaluate, run_protocol, split_folds
from .learner import OcscaLearner, StreamSummary, clamp_tau
from .model_io import load_model, parse_model, save_model, serialize_model
from .oracle import objective_value, solve_step_primal

__version__ = "0.1.0"

__all__ = [
    "AdaptedClassifier",
    "BaseScorer",
    "BatchSvmConfig",
    "CostAdaptError",
    "CostSchedule",
    "DataError",
    "Dataset",
    "DimensionMismatchError",
    "FeatureVector",
    "FoldPlan",
    "FormatError",
    "Hyperparams",
    "LinearAdaptation",
    "LinearScorer",
    "Metrics",
    "NumericError",
    "OcscaLearner",
    "PrecomputedScorer",
    "ProtocolResult",
    "Sample",
    "StepOutcome",
    "StreamSummary",
    "SynthSpec",
    "UpdateCase",
    "ZeroScorer",
    "ZeroVectorError",
    "augment_bias",
    "batch_objective",
    "clamp_tau",
    "cost_for",
    "dot",
    "evaluate",
    "generate_synthetic",
    "load_model",
    "make_pa_baseline",
    "objective_value",
    "parse_model",
    "predict",
    "read_csv",
    "read_libsvm",
    "run_protocol",
    "save_model",
    "score",
    "serialize_model",
    "shuffled_stream",
    "solve_step_primal",
    "split_folds",
    "train_batch_cost_svm",
    "write_libsvm",
]
