"""Online cost-sensitive adaptation of a fixed base scorer.

Each incoming sample triggers a closed-form proximal step: the multiplier
``tau = clamp((1 - y f(x)) / ||x||^2, 0, alpha * C)`` scales a rank-one
update ``w += tau * y * x``. A satisfied margin leaves the weights untouched
(passive); an interior step closes the hinge gap exactly; a clamped step
moves as far as the cost bound allows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    AdaptedClassifier,
    BaseScorer,
    CostSchedule,
    Hyperparams,
    LinearAdaptation,
    Sample,
    StepOutcome,
    UpdateCase,
)
from .errors import CostAdaptError, NumericError, ZeroVectorError


def clamp_tau(raw: float, cost: float, alpha: float) -> tuple[float, UpdateCase]:
    """Project the unconstrained multiplier onto [0, alpha * cost]."""
    bound = alpha * cost
    if raw <= 0.0:
        return 0.0, UpdateCase.PASSIVE
    if raw <= bound:
        return raw, UpdateCase.INTERIOR
    return bound, UpdateCase.CLAMPED


@dataclass(frozen=True)
class StreamSummary:
    steps: int
    n_passive: int
    n_interior: int
    n_clamped: int
    n_skipped: int
    final_weights: np.ndarray


class OcscaLearner:
    """Single-writer online learner over an adaptation layer.

    The adaptation weights start at zero; the base scorer carries whatever
    prior knowledge exists. ``trace=None`` enables per-step diagnostics
    automatically for dimensions up to 1000 (full traces at very high
    dimension would dominate memory).
    """

    def __init__(
        self,
        base: BaseScorer,
        dimension: int,
        schedule: CostSchedule,
        params: Hyperparams,
        trace: bool | None = None,
    ):
        self.classifier = AdaptedClassifier(base, LinearAdaptation.zeros(dimension))
        self.schedule = schedule
        self.params = params
        keep_trace = trace if trace is not None else dimension <= 1000
        self.trace: list[StepOutcome] | None = [] if keep_trace else None

    @property
    def dimension(self) -> int:
        return self.classifier.dimension

    @property
    def weights(self) -> np.ndarray:
        return self.classifier.adaptation.weights

    @property
    def updates_applied(self) -> int:
        return self.classifier.adaptation.updates_applied

    def margin_term(self, sample: Sample) -> float:
        """1 - y * f(x) under the current (pre-update) weights."""
        return 1.0 - sample.label * self.classifier.score_sample(sample)

    def raw_tau(self, sample: Sample) -> float:
        norm_sq = sample.features.norm_sq
        if norm_sq == 0.0:
            raise ZeroVectorError("zero feature vector: tau is undefined")
        return self.margin_term(sample) / norm_sq

    def apply_update(self, sample: Sample, tau: float) -> None:
        """w += tau * y * x and count the step."""
        if not math.isfinite(tau):
            raise NumericError(f"tau must be finite, got {tau}")
        adaptation = self.classifier.adaptation
        if tau != 0.0:
            sample.features.add_into(adaptation.weights, tau * sample.label)
        adaptation.updates_applied += 1

    def process_sample(self, sample: Sample) -> StepOutcome:
        cost = self.schedule.cost_for(sample.label)
        if sample.features.norm_sq == 0.0:
            if not self.params.skip_zero_vectors:
                raise ZeroVectorError(
                    "zero feature vector and skip_zero_vectors is off"
                )
            # No linear update can move this sample's score; record and skip.
            margin = self.margin_term(sample)
            loss = max(0.0, margin)
            self.classifier.adaptation.updates_applied += 1
            outcome = StepOutcome(
                margin_term=margin,
                raw_tau=math.nan,
                tau=0.0,
                case=UpdateCase.SKIPPED_ZERO_VECTOR,
                loss_before=loss,
                loss_after=loss,
                cost=cost,
            )
        else:
            margin = self.margin_term(sample)
            raw = margin / sample.features.norm_sq
            tau, case = clamp_tau(raw, cost, self.params.alpha)
            self.apply_update(sample, tau)
            outcome = StepOutcome(
                margin_term=margin,
                raw_tau=raw,
                tau=tau,
                case=case,
                loss_before=max(0.0, margin),
                loss_after=max(0.0, 1.0 - sample.label * self.classifier.score_sample(sample)),
                cost=cost,
            )
        if self.trace is not None:
            self.trace.append(outcome)
        return outcome

    def run_stream(self, stream) -> StreamSummary:
        """Process samples strictly in order; re-raise errors with the index."""
        counts = {case: 0 for case in UpdateCase}
        steps = 0
        for i, sample in enumerate(stream):
            try:
                outcome = self.process_sample(sample)
            except CostAdaptError as exc:
                raise type(exc)(f"sample {i}: {exc}") from exc
            counts[outcome.case] += 1
            steps += 1
        return StreamSummary(
            steps=steps,
            n_passive=counts[UpdateCase.PASSIVE],
            n_interior=counts[UpdateCase.INTERIOR],
            n_clamped=counts[UpdateCase.CLAMPED],
            n_skipped=counts[UpdateCase.SKIPPED_ZERO_VECTOR],
            final_weights=self.weights.copy(),
        )
