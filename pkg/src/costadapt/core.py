"""Domain types for cost-sensitive linear classifier adaptation.

A classifier here is a fixed base scorer plus a linear correction term:
``f(x) = f0(x) + w.x``. Everything downstream (the online learner, the
baselines, the evaluation protocol) is written against these types.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DataError, DimensionMismatchError

POSITIVE = 1
NEGATIVE = -1

Label = int  # +1 or -1


def validate_label(value) -> int:
    if value == POSITIVE:
        return POSITIVE
    if value == NEGATIVE:
        return NEGATIVE
    raise DataError(f"label must be +1 or -1, got {value!r}")


class FeatureVector:
    """Immutable sparse feature vector with a declared dimension.

    Stored canonically: strictly increasing indices, zero entries dropped.
    Dense and sparse constructions of the same mathematical vector compare
    equal.
    """

    __slots__ = ("dimension", "indices", "values", "norm_sq")

    def __init__(self, dimension: int, indices, values):
        if dimension <= 0:
            raise DataError(f"dimension must be positive, got {dimension}")
        idx = np.asarray(indices, dtype=np.intp)
        val = np.asarray(values, dtype=np.float64)
        if idx.shape != val.shape or idx.ndim != 1:
            raise DataError("indices and values must be 1-d and equal length")
        if not np.all(np.isfinite(val)):
            raise DataError("feature values must be finite")
        if idx.size:
            if idx[0] < 0 or idx[-1] >= dimension or np.any(np.diff(idx) <= 0):
                raise DataError(
                    "indices must be strictly increasing and in [0, dimension)"
                )
        keep = val != 0.0
        if not np.all(keep):
            idx = idx[keep]
            val = val[keep]
        idx.setflags(write=False)
        val.setflags(write=False)
        self.dimension = int(dimension)
        self.indices = idx
        self.values = val
        self.norm_sq = float(val @ val)

    @classmethod
    def dense(cls, values) -> "FeatureVector":
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise DataError("dense vector must be 1-d and non-empty")
        return cls(arr.size, np.arange(arr.size), arr)

    @classmethod
    def sparse(cls, dimension: int, entries) -> "FeatureVector":
        """Build from (index, value) pairs; pairs may arrive unsorted."""
        pairs = sorted(entries)
        seen = [i for i, _ in pairs]
        if len(set(seen)) != len(seen):
            raise DataError("duplicate feature index")
        idx = [i for i, _ in pairs]
        val = [v for _, v in pairs]
        return cls(dimension, idx, val)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dimension)
        out[self.indices] = self.values
        return out

    def dot(self, weights: np.ndarray) -> float:
        if len(weights) != self.dimension:
            raise DimensionMismatchError(
                f"vector dimension {self.dimension} != weights length {len(weights)}"
            )
        if self.values.size == self.dimension:
            return float(np.dot(weights, self.values))
        return float(np.dot(weights[self.indices], self.values))

    def add_into(self, weights: np.ndarray, coef: float) -> None:
        """In-place ``weights += coef * self``."""
        if self.values.size == self.dimension:
            weights += coef * self.values
        else:
            weights[self.indices] += coef * self.values

    def with_bias(self) -> "FeatureVector":
        """Append a constant-1 coordinate (dimension grows by one)."""
        return FeatureVector(
            self.dimension + 1,
            np.concatenate([self.indices, [self.dimension]]),
            np.concatenate([self.values, [1.0]]),
        )

    def __eq__(self, other):
        if not isinstance(other, FeatureVector):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def __repr__(self):
        return f"FeatureVector(d={self.dimension}, nnz={self.values.size})"


def dot(a: FeatureVector, b: np.ndarray) -> float:
    """Sparse-aware dot product of a feature vector with a dense weight vector."""
    return a.dot(np.asarray(b, dtype=np.float64))


def augment_bias(x: FeatureVector) -> FeatureVector:
    return x.with_bias()


@dataclass(frozen=True)
class Sample:
    """One labelled example, optionally carrying a precomputed base score."""

    features: FeatureVector
    label: Label
    base_score: float | None = None

    def __post_init__(self):
        validate_label(self.label)
        if self.base_score is not None and not math.isfinite(self.base_score):
            raise DataError("base_score must be finite when present")


@dataclass(frozen=True)
class CostSchedule:
    """Misclassification costs for the two classes."""

    cost_positive: float
    cost_negative: float

    def __post_init__(self):
        for name, c in (("cost_positive", self.cost_positive),
                        ("cost_negative", self.cost_negative)):
            if not (math.isfinite(c) and c > 0):
                raise DataError(f"{name} must be finite and > 0, got {c}")

    def cost_for(self, label: Label) -> float:
        return self.cost_positive if validate_label(label) == POSITIVE else self.cost_negative


UNIT_SCHEDULE = CostSchedule(1.0, 1.0)


def cost_for(label: Label, schedule: CostSchedule) -> float:
    """Cost charged for misclassifying a sample with this label."""
    return schedule.cost_for(label)


@dataclass(frozen=True)
class Hyperparams:
    """Learner settings.

    ``alpha`` scales how strongly the cost-weighted loss overrides proximity
    to the previous weights. ``augment_bias`` records intent only; feature
    augmentation is applied at the data boundary, not inside the learner.
    """

    alpha: float
    skip_zero_vectors: bool = True
    augment_bias: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise DataError(f"alpha must be finite and > 0, got {self.alpha}")


class LinearAdaptation:
    """The linear correction weights and the count of processed samples."""

    __slots__ = ("weights", "updates_applied")

    def __init__(self, weights: np.ndarray, updates_applied: int = 0):
        w = np.asarray(weights, dtype=np.float64).copy()
        if w.ndim != 1 or w.size == 0:
            raise DataError("weights must be a non-empty 1-d vector")
        if not np.all(np.isfinite(w)):
            raise DataError("weights must be finite")
        if updates_applied < 0:
            raise DataError("updates_applied must be non-negative")
        self.weights = w
        self.updates_applied = int(updates_applied)

    @classmethod
    def zeros(cls, dimension: int) -> "LinearAdaptation":
        if dimension <= 0:
            raise DataError(f"dimension must be positive, got {dimension}")
        return cls(np.zeros(dimension))

    @property
    def dimension(self) -> int:
        return self.weights.size


class BaseScorer:
    """Fixed scoring function the adaptation layer corrects.

    ``score`` works on bare feature vectors; ``score_sample`` additionally
    sees the sample and is what learners and evaluation use, so scorers that
    need per-sample information (precomputed scores) can override it.
    """

    kind = "abstract"

    def score(self, x: FeatureVector) -> float:
        raise NotImplementedError

    def score_sample(self, sample: Sample) -> float:
        return self.score(sample.features)


class ZeroScorer(BaseScorer):
    """Always returns 0; used by from-scratch learners."""

    kind = "zero"

    def score(self, x: FeatureVector) -> float:
        return 0.0


class LinearScorer(BaseScorer):
    kind = "linear"

    def __init__(self, weights: np.ndarray, intercept: float = 0.0):
        w = np.asarray(weights, dtype=np.float64).copy()
        if w.ndim != 1 or w.size == 0 or not np.all(np.isfinite(w)):
            raise DataError("scorer weights must be a finite 1-d vector")
        if not math.isfinite(intercept):
            raise DataError("intercept must be finite")
        self.weights = w
        self.intercept = float(intercept)

    def score(self, x: FeatureVector) -> float:
        return x.dot(self.weights) + self.intercept


class PrecomputedScorer(BaseScorer):
    """Reads the base score stored on each sample."""

    kind = "precomputed"

    def score(self, x: FeatureVector) -> float:
        raise DataError("precomputed scorer needs a Sample carrying base_score")

    def score_sample(self, sample: Sample) -> float:
        if sample.base_score is None:
            raise DataError("sample has no base_score for precomputed scorer")
        return float(sample.base_score)


class AdaptedClassifier:
    """Base scorer composed with the linear adaptation: f(x) = f0(x) + w.x."""

    __slots__ = ("base", "adaptation")

    def __init__(self, base: BaseScorer, adaptation: LinearAdaptation):
        self.base = base
        self.adaptation = adaptation

    @property
    def dimension(self) -> int:
        return self.adaptation.dimension

    def score(self, x: FeatureVector) -> float:
        return self.base.score(x) + x.dot(self.adaptation.weights)

    def score_sample(self, sample: Sample) -> float:
        return self.base.score_sample(sample) + sample.features.dot(self.adaptation.weights)

    def predict(self, x: FeatureVector) -> Label:
        return POSITIVE if self.score(x) >= 0.0 else NEGATIVE

    def predict_sample(self, sample: Sample) -> Label:
        return POSITIVE if self.score_sample(sample) >= 0.0 else NEGATIVE


def score(classifier: AdaptedClassifier, x: FeatureVector) -> float:
    return classifier.score(x)


def predict(classifier: AdaptedClassifier, x: FeatureVector) -> Label:
    """Threshold the adapted score at 0; an exact tie predicts +1."""
    return classifier.predict(x)


class UpdateCase(Enum):
    PASSIVE = "passive"
    INTERIOR = "interior"
    CLAMPED = "clamped"
    SKIPPED_ZERO_VECTOR = "skipped_zero_vector"


@dataclass(frozen=True)
class StepOutcome:
    """Diagnostics for one online step.

    ``raw_tau`` is the unconstrained multiplier (NaN for skipped zero
    vectors), ``tau`` the value actually applied. Losses are hinge losses on
    the triggering sample before and after the update.
    """

    margin_term: float
    raw_tau: float
    tau: float
    case: UpdateCase
    loss_before: float
    loss_after: float
    cost: float
