import numpy as np
import pytest

from costadapt.core import (
    AdaptedClassifier,
    CostSchedule,
    FeatureVector,
    LinearAdaptation,
    PrecomputedScorer,
    Sample,
)
from costadapt.data import Dataset, SynthSpec, generate_synthetic
from costadapt.errors import DataError
from costadapt.evaluation import (
    FoldPlan,
    METHOD_OCSCA,
    METHOD_ORDER,
    evaluate,
    render_csv,
    run_protocol,
    split_folds,
)


def precomputed_testset(scores_and_labels):
    """Samples whose base scores are dictated directly; features are dummies."""
    samples = tuple(
        Sample(FeatureVector.dense([1.0]), label, base_score=score)
        for score, label in scores_and_labels
    )
    return Dataset(samples, 1, "handmade")


def precomputed_classifier():
    return AdaptedClassifier(PrecomputedScorer(), LinearAdaptation.zeros(1))


class TestEvaluate:
    def test_perfect_classifier(self):
        test = precomputed_testset([(2.0, 1), (-2.0, -1), (0.5, 1)])
        m = evaluate(precomputed_classifier(), test, CostSchedule(5, 1))
        assert m.accuracy == 1.0
        assert m.avg_cost == 0.0

    def test_hand_counted_four_samples(self):
        # one positive misclassified under (5, 1): accuracy 3/4, cost 5/4
        test = precomputed_testset([(1.0, 1), (-1.0, 1), (-1.0, -1), (-2.0, -1)])
        m = evaluate(precomputed_classifier(), test, CostSchedule(5, 1))
        assert m.accuracy == 0.75
        assert m.avg_cost == 1.25
        assert (m.tp, m.fp, m.tn, m.fn) == (1, 0, 2, 1)

    def test_all_wrong(self):
        test = precomputed_testset([(-1.0, 1), (-1.0, 1), (1.0, -1), (1.0, -1)])
        m = evaluate(precomputed_classifier(), test, CostSchedule(5, 1))
        assert m.accuracy == 0.0
        assert m.avg_cost == 3.0

    def test_empty_test_set_rejected(self):
        with pytest.raises(DataError):
            evaluate(precomputed_classifier(), Dataset((), 1), CostSchedule(1, 1))

    def test_cost_uses_evaluation_schedule(self):
        test = precomputed_testset([(-1.0, 1), (1.0, -1)])
        cheap = evaluate(precomputed_classifier(), test, CostSchedule(1, 1))
        dear = evaluate(precomputed_classifier(), test, CostSchedule(9, 1))
        assert cheap.avg_cost == 1.0
        assert dear.avg_cost == 5.0

    def test_error_subset_implies_cost_order(self):
        # b's errors are a strict superset of a's, so a cannot cost more
        test = precomputed_testset([(1.0, 1), (-1.0, 1), (-1.0, -1), (1.0, -1)])
        a_scores = [1.0, 1.0, -1.0, -1.0]  # perfect
        b_scores = [1.0, -1.0, -1.0, 1.0]  # misses two
        a_set = precomputed_testset(
            [(s, t.label) for s, t in zip(a_scores, test.samples)]
        )
        b_set = precomputed_testset(
            [(s, t.label) for s, t in zip(b_scores, test.samples)]
        )
        for schedule in (CostSchedule(5, 1), CostSchedule(1, 3)):
            ma = evaluate(precomputed_classifier(), a_set, schedule)
            mb = evaluate(precomputed_classifier(), b_set, schedule)
            assert ma.accuracy > mb.accuracy
            assert ma.avg_cost <= mb.avg_cost


class TestSplitFolds:
    def test_plan_arithmetic(self):
        ds = generate_synthetic(SynthSpec(50, 50, 2, 2.0, 1.0, 1))
        reps = split_folds(ds, FoldPlan(seed=3))
        assert len(reps) == 10
        for rep in reps:
            assert len(rep.test_indices) == 10
            assert len(rep.base_indices) == 20
            assert sum(len(f) for f in rep.stream_fold_indices) == 70

    def test_test_folds_partition_dataset(self):
        ds = generate_synthetic(SynthSpec(37, 63, 2, 2.0, 1.0, 2))
        reps = split_folds(ds, FoldPlan(seed=4))
        seen = np.concatenate([rep.test_indices for rep in reps])
        assert sorted(seen.tolist()) == list(range(100))

    def test_stratification_within_one_sample(self):
        ds = generate_synthetic(SynthSpec(80, 20, 2, 2.0, 1.0, 5))
        reps = split_folds(ds, FoldPlan(seed=6))
        for rep in reps:
            positives = sum(1 for i in rep.test_indices if ds.samples[i].label == 1)
            assert 7 <= positives <= 9

    def test_no_overlap_within_repetition(self):
        ds = generate_synthetic(SynthSpec(30, 70, 2, 2.0, 1.0, 7))
        for rep in split_folds(ds, FoldPlan(seed=8)):
            combined = np.concatenate(
                [rep.test_indices, rep.base_indices, *rep.stream_fold_indices]
            )
            assert len(set(combined.tolist())) == 100

    def test_small_dataset_rejected(self):
        ds = generate_synthetic(SynthSpec(3, 3, 2, 2.0, 1.0, 9))
        with pytest.raises(DataError):
            split_folds(ds, FoldPlan())


@pytest.fixture(scope="module")
def small_result():
    ds = generate_synthetic(SynthSpec(60, 140, 2, 2.5, 1.0, 17))
    return run_protocol(
        ds, CostSchedule(2, 1), CostSchedule(5, 1), [0.1, 1.0], FoldPlan(seed=5)
    )


class TestRunProtocol:
    def test_one_entry_per_fold_per_method(self, small_result):
        assert len(small_result.per_fold) == 10
        for row in small_result.per_fold:
            assert set(row) == set(METHOD_ORDER)

    def test_metric_ranges(self, small_result):
        for row in small_result.per_fold:
            for mr in row.values():
                assert 0.0 <= mr.metrics.accuracy <= 1.0
                assert 0.0 <= mr.metrics.avg_cost <= 5.0

    def test_baselines_never_see_base_folds(self, small_result):
        for row in small_result.per_fold:
            for method, mr in row.items():
                expected = "base" if method == "base" else "stream"
                assert mr.trained_on == expected

    def test_deterministic(self):
        ds = generate_synthetic(SynthSpec(40, 60, 2, 2.5, 1.0, 19))
        kwargs = dict(
            old_schedule=CostSchedule(2, 1),
            new_schedule=CostSchedule(5, 1),
            alpha_grid=[0.1, 1.0],
            plan=FoldPlan(seed=11),
        )
        a = run_protocol(ds, **kwargs)
        b = run_protocol(ds, **kwargs)
        assert render_csv(a) == render_csv(b)

    def test_threads_do_not_change_results(self):
        ds = generate_synthetic(SynthSpec(40, 60, 2, 2.5, 1.0, 23))
        kwargs = dict(
            old_schedule=CostSchedule(2, 1),
            new_schedule=CostSchedule(5, 1),
            alpha_grid=[0.1, 1.0],
            plan=FoldPlan(seed=13),
        )
        serial = run_protocol(ds, **kwargs, threads=1)
        parallel = run_protocol(ds, **kwargs, threads=4)
        assert render_csv(serial) == render_csv(parallel)

    def test_separable_same_schedule_reaches_zero_cost(self):
        ds = generate_synthetic(SynthSpec(50, 150, 2, 12.0, 0.2, 29))
        schedule = CostSchedule(2, 1)
        result = run_protocol(ds, schedule, schedule, [1.0], FoldPlan(seed=7))
        for row in result.per_fold:
            assert row[METHOD_OCSCA].metrics.avg_cost == 0.0

    def test_csv_shape(self, small_result):
        lines = render_csv(small_result).strip().splitlines()
        assert lines[0] == "fold,method,metric,value"
        # 10 folds x (5 methods x 6 metrics + 4 alpha rows)
        assert len(lines) == 1 + 10 * (5 * 6 + 4)
