"""Metrics, the 10-fold evaluation protocol, and report rendering.

Each of the 10 repetitions holds one fold out for testing, trains the base
scorer on 2 folds under the old cost setting, and streams the remaining 7
folds to the online learners under the new cost setting. Comparison methods
never see the base folds or the base scorer. The tradeoff parameter is
picked per method from a grid by holding out the last stream fold and
minimizing average misclassification cost under the new setting.
"""

from __future__ import annotations

import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .baselines import BatchSvmConfig, make_pa_baseline, stable_step_size, train_batch_cost_svm
from .core import (
    AdaptedClassifier,
    CostSchedule,
    Hyperparams,
    LinearAdaptation,
    LinearScorer,
    UNIT_SCHEDULE,
    ZeroScorer,
    NEGATIVE,
    POSITIVE,
)
from .data import Dataset, shuffled_stream
from .errors import DataError
from .learner import OcscaLearner

METHOD_BASE = "base"
METHOD_OCSCA = "ocsca"
METHOD_PA_COST = "pa_cost_sensitive"
METHOD_PA_PLAIN = "pa_cost_insensitive"
METHOD_BATCH_SVM = "batch_svm"

METHOD_ORDER = [METHOD_BASE, METHOD_OCSCA, METHOD_PA_COST, METHOD_PA_PLAIN, METHOD_BATCH_SVM]


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    avg_cost: float
    n_test: int
    tp: int
    fp: int
    tn: int
    fn: int


def evaluate(classifier: AdaptedClassifier, test: Dataset, schedule: CostSchedule) -> Metrics:
    """Exact counting metrics; avg_cost is charged under the given schedule."""
    if len(test) == 0:
        raise DataError("cannot evaluate on an empty test set")
    tp = fp = tn = fn = 0
    for s in test.samples:
        predicted = classifier.predict_sample(s)
        if s.label == POSITIVE:
            if predicted == POSITIVE:
                tp += 1
            else:
                fn += 1
        else:
            if predicted == NEGATIVE:
                tn += 1
            else:
                fp += 1
    n = len(test)
    cost = (schedule.cost_positive * fn + schedule.cost_negative * fp) / n
    return Metrics((tp + tn) / n, cost, n, tp, fp, tn, fn)


@dataclass(frozen=True)
class FoldPlan:
    n_folds: int = 10
    base_folds: int = 2
    stream_folds: int = 7
    test_folds: int = 1
    seed: int = 0

    def __post_init__(self):
        if min(self.n_folds, self.base_folds, self.stream_folds, self.test_folds) < 1:
            raise DataError("all fold counts must be positive")
        if self.base_folds + self.stream_folds + self.test_folds != self.n_folds:
            raise DataError("base + stream + test folds must equal n_folds")


@dataclass(frozen=True)
class Repetition:
    """Index sets for one repetition; stream folds stay separate so the
    last one can serve as the inner validation split."""

    index: int
    test_indices: np.ndarray
    base_indices: np.ndarray
    stream_fold_indices: tuple[np.ndarray, ...]


def split_folds(dataset: Dataset, plan: FoldPlan) -> list[Repetition]:
    """Stratified seeded partition into folds, then one repetition per test fold.

    Class proportions per fold are preserved within one sample. Every sample
    lands in the test set of exactly one repetition.
    """
    n = len(dataset)
    if n < plan.n_folds:
        raise DataError(f"dataset of {n} samples cannot fill {plan.n_folds} folds")
    rng = np.random.default_rng(plan.seed)
    pos = np.array([i for i, s in enumerate(dataset.samples) if s.label == POSITIVE])
    neg = np.array([i for i, s in enumerate(dataset.samples) if s.label == NEGATIVE])
    folds: list[list[int]] = [[] for _ in range(plan.n_folds)]
    for group in (pos, neg):
        if group.size:
            shuffled = group[rng.permutation(group.size)]
            for j, idx in enumerate(shuffled):
                folds[j % plan.n_folds].append(int(idx))
    fold_arrays = [np.array(sorted(f), dtype=np.intp) for f in folds]

    reps = []
    for r in range(plan.n_folds):
        others = [(r + k) % plan.n_folds for k in range(1, plan.n_folds)]
        base = others[: plan.base_folds]
        stream = others[plan.base_folds : plan.base_folds + plan.stream_folds]
        reps.append(
            Repetition(
                index=r,
                test_indices=fold_arrays[r],
                base_indices=np.concatenate([fold_arrays[b] for b in base]),
                stream_fold_indices=tuple(fold_arrays[s] for s in stream),
            )
        )
    return reps


@dataclass(frozen=True)
class MethodResult:
    metrics: Metrics
    learn_seconds: float
    alpha: float | None
    trained_on: str  # "base" or "stream"


@dataclass
class ProtocolResult:
    per_fold: list[dict[str, MethodResult]]
    methods: list[str] = field(default_factory=lambda: list(METHOD_ORDER))
    config: dict = field(default_factory=dict)


def _select_alpha(base, dimension, schedule, alpha_grid, train_stream, val_set, eval_schedule):
    """Pick the grid alpha minimizing validation avg_cost; first wins ties."""
    best_alpha = None
    best_cost = None
    for alpha in alpha_grid:
        learner = OcscaLearner(base, dimension, schedule, Hyperparams(alpha=alpha))
        learner.run_stream(train_stream)
        cost = evaluate(learner.classifier, val_set, eval_schedule).avg_cost
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best_alpha = alpha
    return best_alpha


def _run_repetition(
    dataset: Dataset,
    rep: Repetition,
    rep_seed: int,
    old_schedule: CostSchedule,
    new_schedule: CostSchedule,
    alpha_grid: list[float],
    base_alpha: float,
    svm_config: BatchSvmConfig | None,
) -> dict[str, MethodResult]:
    test_set = dataset.subset(rep.test_indices)
    base_set = dataset.subset(rep.base_indices)
    stream_all = dataset.subset(np.concatenate(rep.stream_fold_indices))
    inner_train = dataset.subset(np.concatenate(rep.stream_fold_indices[:-1]))
    inner_val = dataset.subset(rep.stream_fold_indices[-1])
    d = dataset.dimension

    # Base scorer: from-scratch cost-sensitive online pass under the old costs.
    base_stream = shuffled_stream(base_set, rep_seed)
    t0 = time.perf_counter()
    base_learner = OcscaLearner(ZeroScorer(), d, old_schedule, Hyperparams(alpha=base_alpha))
    base_learner.run_stream(base_stream)
    base_seconds = time.perf_counter() - t0
    f0 = LinearScorer(base_learner.weights.copy())

    inner_train_stream = shuffled_stream(inner_train, rep_seed)
    full_stream = shuffled_stream(stream_all, rep_seed)

    results: dict[str, MethodResult] = {}
    results[METHOD_BASE] = MethodResult(
        metrics=evaluate(AdaptedClassifier(f0, LinearAdaptation.zeros(d)), test_set, new_schedule),
        learn_seconds=base_seconds,
        alpha=base_alpha,
        trained_on="base",
    )

    online_methods = [
        (METHOD_OCSCA, f0, new_schedule),
        (METHOD_PA_COST, ZeroScorer(), new_schedule),
        (METHOD_PA_PLAIN, ZeroScorer(), UNIT_SCHEDULE),
    ]
    for name, base, schedule in online_methods:
        alpha = _select_alpha(
            base, d, schedule, alpha_grid, inner_train_stream, inner_val, new_schedule
        )
        learner = OcscaLearner(base, d, schedule, Hyperparams(alpha=alpha))
        t0 = time.perf_counter()
        learner.run_stream(full_stream)
        seconds = time.perf_counter() - t0
        results[name] = MethodResult(
            metrics=evaluate(learner.classifier, test_set, new_schedule),
            learn_seconds=seconds,
            alpha=alpha,
            trained_on="stream",
        )

    if svm_config is None:
        cfg = BatchSvmConfig(
            epochs=50,
            step_size=stable_step_size(stream_all.samples, new_schedule),
            regularization=0.0,
            shuffle_seed=rep_seed,
        )
    else:
        cfg = replace(svm_config, shuffle_seed=svm_config.shuffle_seed + rep_seed)
    t0 = time.perf_counter()
    svm = train_batch_cost_svm(stream_all.samples, new_schedule, cfg)
    seconds = time.perf_counter() - t0
    results[METHOD_BATCH_SVM] = MethodResult(
        metrics=evaluate(AdaptedClassifier(svm, LinearAdaptation.zeros(d)), test_set, new_schedule),
        learn_seconds=seconds,
        alpha=None,
        trained_on="stream",
    )
    return results


def run_protocol(
    dataset: Dataset,
    old_schedule: CostSchedule,
    new_schedule: CostSchedule,
    alpha_grid,
    plan: FoldPlan,
    base_alpha: float = 1.0,
    svm_config: BatchSvmConfig | None = None,
    threads: int = 1,
) -> ProtocolResult:
    """Full cross-validated comparison; repetitions are independent.

    Per-repetition randomness (stream shuffles, SVM shuffles) is seeded with
    ``plan.seed + repetition index``, so results do not depend on ``threads``.
    """
    alpha_grid = [float(a) for a in alpha_grid]
    if not alpha_grid:
        raise DataError("alpha_grid must be non-empty")
    reps = split_folds(dataset, plan)

    def job(rep):
        return _run_repetition(
            dataset,
            rep,
            plan.seed + rep.index,
            old_schedule,
            new_schedule,
            alpha_grid,
            base_alpha,
            svm_config,
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_fold = list(pool.map(job, reps))
    else:
        per_fold = [job(rep) for rep in reps]

    config = {
        "dataset": dataset.name,
        "n_samples": len(dataset),
        "dimension": dataset.dimension,
        "old_schedule": (old_schedule.cost_positive, old_schedule.cost_negative),
        "new_schedule": (new_schedule.cost_positive, new_schedule.cost_negative),
        "alpha_grid": alpha_grid,
        "base_alpha": base_alpha,
        "seed": plan.seed,
        "n_folds": plan.n_folds,
        "stratified": True,
        "alpha_selection": "last stream fold held out, min avg_cost under new schedule",
    }
    return ProtocolResult(per_fold=per_fold, config=config)


def _fmt(value: float) -> str:
    return repr(float(value))


def render_csv(result: ProtocolResult) -> str:
    """Deterministic long-format report: fold,method,metric,value.

    Wall-clock timings are deliberately left out (they vary run to run);
    they appear in the summary table instead.
    """
    lines = ["fold,method,metric,value"]
    for fold, row in enumerate(result.per_fold):
        for method in result.methods:
            mr = row[method]
            m = mr.metrics
            lines.append(f"{fold},{method},accuracy,{_fmt(m.accuracy)}")
            lines.append(f"{fold},{method},avg_cost,{_fmt(m.avg_cost)}")
            lines.append(f"{fold},{method},tp,{m.tp}")
            lines.append(f"{fold},{method},fp,{m.fp}")
            lines.append(f"{fold},{method},tn,{m.tn}")
            lines.append(f"{fold},{method},fn,{m.fn}")
            if mr.alpha is not None:
                lines.append(f"{fold},{method},alpha,{_fmt(mr.alpha)}")
    return "\n".join(lines) + "\n"


def render_summary(result: ProtocolResult) -> str:
    """Per-method mean and standard deviation of the headline numbers."""

    def agg(values):
        mean = statistics.fmean(values)
        std = statistics.stdev(values) if len(values) > 1 else 0.0
        return mean, std

    lines = []
    for key, value in sorted(result.config.items()):
        lines.append(f"# {key} = {value}")
    header = f"{'method':<20} {'accuracy':>18} {'avg_cost':>18} {'learn_seconds':>18}"
    lines.append(header)
    for method in result.methods:
        rows = [fold[method] for fold in result.per_fold]
        acc = agg([r.metrics.accuracy for r in rows])
        cost = agg([r.metrics.avg_cost for r in rows])
        secs = agg([r.learn_seconds for r in rows])
        lines.append(
            f"{method:<20} {acc[0]:>9.4f}±{acc[1]:<8.4f} "
            f"{cost[0]:>9.4f}±{cost[1]:<8.4f} {secs[0]:>9.4f}±{secs[1]:<8.4f}"
        )
    return "\n".join(lines) + "\n"
