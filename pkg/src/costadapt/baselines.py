"""Reference learners the adaptation method is compared against.

Two families: from-scratch online learners (the adaptive update with a zero
base scorer, cost-sensitive or not) and an offline cost-weighted linear SVM
trained by epoch-wise subgradient descent. The published offline methods in
this problem family are boosting ensembles and neural nets with unspecified
hyperparameters; the linear SVM keeps the comparison inside one hypothesis
class and is honest about that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    CostSchedule,
    Hyperparams,
    LinearScorer,
    UNIT_SCHEDULE,
    ZeroScorer,
)
from .errors import DataError
from .learner import OcscaLearner


@dataclass(frozen=True)
class BatchSvmConfig:
    epochs: int
    step_size: float
    regularization: float = 0.0
    shuffle_seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise DataError(f"epochs must be >= 1, got {self.epochs}")
        if not (math.isfinite(self.step_size) and self.step_size > 0):
            raise DataError(f"step_size must be finite and > 0, got {self.step_size}")
        if not (math.isfinite(self.regularization) and self.regularization >= 0):
            raise DataError(
                f"regularization must be finite and >= 0, got {self.regularization}"
            )


def batch_objective(weights, samples, schedule: CostSchedule, regularization: float = 0.0) -> float:
    """Mean cost-weighted hinge loss plus the L2 penalty."""
    w = np.asarray(weights, dtype=np.float64)
    if not samples:
        raise DataError("objective needs at least one sample")
    total = 0.0
    for s in samples:
        margin = s.label * s.features.dot(w)
        if margin < 1.0:
            total += schedule.cost_for(s.label) * (1.0 - margin)
    return total / len(samples) + 0.5 * regularization * float(w @ w)


def stable_step_size(samples, schedule: CostSchedule, safety: float = 0.5) -> float:
    """Step below 1 / (max_i C_i * ||x_i||^2), scaled by a safety factor."""
    worst = max(
        schedule.cost_for(s.label) * s.features.norm_sq for s in samples
    )
    if worst <= 0.0:
        raise DataError("all feature vectors are zero")
    return safety / worst


def train_batch_cost_svm(samples, schedule: CostSchedule, cfg: BatchSvmConfig) -> LinearScorer:
    """Cost-weighted hinge SVM via per-sample subgradient steps.

    Deterministic for a fixed ``shuffle_seed``: one RNG drives every epoch's
    shuffle in sequence.
    """
    samples = list(samples)
    if not samples:
        raise DataError("cannot train on an empty dataset")
    dim = samples[0].features.dimension
    for i, s in enumerate(samples):
        if s.features.dimension != dim:
            raise DataError(
                f"sample {i} has dimension {s.features.dimension}, expected {dim}"
            )
    rng = np.random.default_rng(cfg.shuffle_seed)
    w = np.zeros(dim)
    shrink = 1.0 - cfg.step_size * cfg.regularization
    for _ in range(cfg.epochs):
        for i in rng.permutation(len(samples)):
            s = samples[i]
            margin = s.label * s.features.dot(w)
            if shrink != 1.0:
                w *= shrink
            if margin < 1.0:
                coef = cfg.step_size * schedule.cost_for(s.label) * s.label
                s.features.add_into(w, coef)
    return LinearScorer(w)


def make_pa_baseline(
    dimension: int,
    alpha: float,
    schedule: CostSchedule = UNIT_SCHEDULE,
) -> OcscaLearner:
    """From-scratch online learner: zero base scorer, zero initial weights.

    With the default unit schedule this is the cost-insensitive variant,
    equivalent to a bound-constrained passive-aggressive learner whose
    aggressiveness parameter is ``alpha``.
    """
    return OcscaLearner(ZeroScorer(), dimension, schedule, Hyperparams(alpha=alpha))
