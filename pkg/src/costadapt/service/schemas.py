"""Request/response models for the HTTP service, plus domain conversions.

Payloads carry datasets inline and models as their text documents, so the
service never touches the filesystem; clients own all file I/O.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from ..core import CostSchedule, FeatureVector, Sample
from ..data import Dataset
from ..evaluation import Metrics


class FeaturePayload(BaseModel):
    dimension: int
    entries: list[tuple[int, float]]

    @classmethod
    def from_domain(cls, x: FeatureVector) -> "FeaturePayload":
        return cls(
            dimension=x.dimension,
            entries=[(int(i), float(v)) for i, v in zip(x.indices, x.values)],
        )

    def to_domain(self) -> FeatureVector:
        return FeatureVector.sparse(self.dimension, self.entries)


class SamplePayload(BaseModel):
    features: FeaturePayload
    label: Literal[1, -1]
    base_score: float | None = None

    @classmethod
    def from_domain(cls, s: Sample) -> "SamplePayload":
        return cls(
            features=FeaturePayload.from_domain(s.features),
            label=s.label,
            base_score=s.base_score,
        )

    def to_domain(self) -> Sample:
        return Sample(self.features.to_domain(), self.label, self.base_score)


class DatasetPayload(BaseModel):
    name: str = ""
    dimension: int
    samples: list[SamplePayload]

    @classmethod
    def from_domain(cls, ds: Dataset) -> "DatasetPayload":
        return cls(
            name=ds.name,
            dimension=ds.dimension,
            samples=[SamplePayload.from_domain(s) for s in ds.samples],
        )

    def to_domain(self) -> Dataset:
        return Dataset(
            tuple(s.to_domain() for s in self.samples), self.dimension, self.name
        )


class SchedulePayload(BaseModel):
    cost_positive: float = Field(gt=0)
    cost_negative: float = Field(gt=0)

    def to_domain(self) -> CostSchedule:
        return CostSchedule(self.cost_positive, self.cost_negative)


class StreamSummaryPayload(BaseModel):
    steps: int
    n_passive: int
    n_interior: int
    n_clamped: int
    n_skipped: int


class MetricsPayload(BaseModel):
    accuracy: float
    avg_cost: float
    n_test: int
    tp: int
    fp: int
    tn: int
    fn: int

    @classmethod
    def from_domain(cls, m: Metrics) -> "MetricsPayload":
        return cls(
            accuracy=m.accuracy, avg_cost=m.avg_cost, n_test=m.n_test,
            tp=m.tp, fp=m.fp, tn=m.tn, fn=m.fn,
        )


class TrainBaseRequest(BaseModel):
    dataset: DatasetPayload
    schedule: SchedulePayload
    alpha: float = Field(gt=0)
    shuffle_seed: int | None = None


class TrainBaseResponse(BaseModel):
    model_text: str
    summary: StreamSummaryPayload


class AdaptRequest(BaseModel):
    model_text: str
    dataset: DatasetPayload
    schedule: SchedulePayload
    alpha: float = Field(gt=0)
    shuffle_seed: int | None = None


class AdaptResponse(BaseModel):
    model_text: str
    summary: StreamSummaryPayload


class EvalRequest(BaseModel):
    model_text: str
    dataset: DatasetPayload
    schedule: SchedulePayload


class EvalResponse(BaseModel):
    metrics: MetricsPayload


class BenchRequest(BaseModel):
    dataset: DatasetPayload
    old_schedule: SchedulePayload
    new_schedule: SchedulePayload
    alpha_grid: list[float]
    seed: int = 0
    base_alpha: float = 1.0
    svm_epochs: int = 50
    svm_step_size: float | None = None
    svm_regularization: float = 0.0
    threads: int = 1


class BenchResponse(BaseModel):
    csv_text: str
    summary_text: str


class SessionCreateRequest(BaseModel):
    """Start an online adaptation session.

    Either hand in an existing model document (it becomes the base scorer)
    or ask for a fresh zero/precomputed base at the given dimension.
    """

    model_text: str | None = None
    base_kind: Literal["zero", "precomputed"] = "zero"
    dimension: int | None = None
    schedule: SchedulePayload
    alpha: float = Field(gt=0)
    skip_zero_vectors: bool = True
    trace: bool | None = None


class SessionCreateResponse(BaseModel):
    session_id: str
    dimension: int


class StepResponse(BaseModel):
    margin_term: float
    raw_tau: float | None
    tau: float
    case: str
    loss_before: float
    loss_after: float
    cost: float
    updates_applied: int


class PredictRequest(BaseModel):
    features: FeaturePayload
    base_score: float | None = None


class PredictResponse(BaseModel):
    score: float
    label: Literal[1, -1]


class SessionModelResponse(BaseModel):
    model_text: str
    updates_applied: int


class ErrorDetail(BaseModel):
    kind: Literal["data", "numeric", "usage"]
    message: str
