"""Stateless service operations: pure request model in, response model out.

The CLI calls these directly in-process; the FastAPI app exposes them over
HTTP. Keeping them transport-free is what makes the CLI a thin client.
"""

from __future__ import annotations

import math

from ..benchconfig import BenchConfig
from ..core import Hyperparams, ZeroScorer
from ..baselines import BatchSvmConfig
from ..data import Dataset, shuffled_stream
from ..evaluation import FoldPlan, evaluate, render_csv, render_summary, run_protocol
from ..learner import OcscaLearner, StreamSummary
from ..model_io import flatten_to_scorer, parse_model, serialize_model
from . import schemas


def _stream_for(dataset: Dataset, seed: int | None):
    if seed is None:
        return list(dataset.samples)
    return shuffled_stream(dataset, seed)


def _summary_payload(summary: StreamSummary) -> schemas.StreamSummaryPayload:
    return schemas.StreamSummaryPayload(
        steps=summary.steps,
        n_passive=summary.n_passive,
        n_interior=summary.n_interior,
        n_clamped=summary.n_clamped,
        n_skipped=summary.n_skipped,
    )


def train_base(req: schemas.TrainBaseRequest) -> schemas.TrainBaseResponse:
    """From-scratch cost-sensitive online training with a zero base."""
    dataset = req.dataset.to_domain()
    schedule = req.schedule.to_domain()
    learner = OcscaLearner(
        ZeroScorer(), dataset.dimension, schedule, Hyperparams(alpha=req.alpha)
    )
    summary = learner.run_stream(_stream_for(dataset, req.shuffle_seed))
    text = serialize_model(learner.classifier, schedule, req.alpha)
    return schemas.TrainBaseResponse(model_text=text, summary=_summary_payload(summary))


def adapt(req: schemas.AdaptRequest) -> schemas.AdaptResponse:
    """Adapt an existing model to a new cost setting over a sample stream."""
    classifier, _, _ = parse_model(req.model_text)
    base = flatten_to_scorer(classifier)
    dataset = req.dataset.to_domain()
    schedule = req.schedule.to_domain()
    learner = OcscaLearner(
        base, dataset.dimension, schedule, Hyperparams(alpha=req.alpha)
    )
    summary = learner.run_stream(_stream_for(dataset, req.shuffle_seed))
    text = serialize_model(learner.classifier, schedule, req.alpha)
    return schemas.AdaptResponse(model_text=text, summary=_summary_payload(summary))


def evaluate_model(req: schemas.EvalRequest) -> schemas.EvalResponse:
    classifier, _, _ = parse_model(req.model_text)
    metrics = evaluate(classifier, req.dataset.to_domain(), req.schedule.to_domain())
    return schemas.EvalResponse(metrics=schemas.MetricsPayload.from_domain(metrics))


def run_bench(req: schemas.BenchRequest) -> schemas.BenchResponse:
    dataset = req.dataset.to_domain()
    svm_config = None
    if req.svm_step_size is not None:
        svm_config = BatchSvmConfig(
            epochs=req.svm_epochs,
            step_size=req.svm_step_size,
            regularization=req.svm_regularization,
            shuffle_seed=0,
        )
    result = run_protocol(
        dataset,
        req.old_schedule.to_domain(),
        req.new_schedule.to_domain(),
        req.alpha_grid,
        FoldPlan(seed=req.seed),
        base_alpha=req.base_alpha,
        svm_config=svm_config,
        threads=req.threads,
    )
    return schemas.BenchResponse(
        csv_text=render_csv(result), summary_text=render_summary(result)
    )


def bench_request_from_config(config: BenchConfig, threads: int = 1) -> schemas.BenchRequest:
    """Resolve a parsed config file (dataset included) into a request."""
    dataset = config.load_dataset()
    return schemas.BenchRequest(
        dataset=schemas.DatasetPayload.from_domain(dataset),
        old_schedule=schemas.SchedulePayload(
            cost_positive=config.old_schedule.cost_positive,
            cost_negative=config.old_schedule.cost_negative,
        ),
        new_schedule=schemas.SchedulePayload(
            cost_positive=config.new_schedule.cost_positive,
            cost_negative=config.new_schedule.cost_negative,
        ),
        alpha_grid=list(config.alpha_grid),
        seed=config.seed,
        base_alpha=config.base_alpha,
        svm_epochs=config.svm_epochs,
        svm_step_size=config.svm_step_size,
        svm_regularization=config.svm_regularization,
        threads=threads,
    )


def step_response(outcome, updates_applied: int) -> schemas.StepResponse:
    raw = outcome.raw_tau
    return schemas.StepResponse(
        margin_term=outcome.margin_term,
        raw_tau=None if math.isnan(raw) else raw,
        tau=outcome.tau,
        case=outcome.case.value,
        loss_before=outcome.loss_before,
        loss_after=outcome.loss_after,
        cost=outcome.cost,
        updates_applied=updates_applied,
    )
