import numpy as np
import pytest

from costadapt.baselines import (
    BatchSvmConfig,
    batch_objective,
    make_pa_baseline,
    stable_step_size,
    train_batch_cost_svm,
)
from costadapt.core import CostSchedule, FeatureVector, Hyperparams, Sample, ZeroScorer
from costadapt.errors import DataError
from costadapt.learner import OcscaLearner


def sample(values, label):
    return Sample(FeatureVector.dense(values), label)


def pa1_reference(stream, aggressiveness):
    """Independent PA-I: dense numpy, no shared code with the learner."""
    w = np.zeros(stream[0].features.dimension)
    trajectory = []
    for s in stream:
        x = s.features.to_dense()
        loss = max(0.0, 1.0 - s.label * float(np.dot(w, x)))
        if loss > 0.0:
            tau = min(aggressiveness, loss / float(np.dot(x, x)))
            w = w + (tau * s.label) * x
        trajectory.append(w.copy())
    return trajectory


class TestBatchSvm:
    def test_separable_two_points_reach_zero_loss(self):
        data = [sample([1.0, 1.0], 1), sample([-1.0, -1.0], -1)]
        cfg = BatchSvmConfig(epochs=50, step_size=0.25, shuffle_seed=0)
        scorer = train_batch_cost_svm(data, CostSchedule(1, 1), cfg)
        assert batch_objective(scorer.weights, data, CostSchedule(1, 1)) == pytest.approx(
            0.0, abs=1e-9
        )

    def test_all_one_label_predicted_everywhere(self):
        rng = np.random.default_rng(0)
        data = [sample(rng.normal(loc=2.0, size=3), 1) for _ in range(20)]
        cfg = BatchSvmConfig(epochs=30, step_size=0.05, shuffle_seed=1)
        scorer = train_batch_cost_svm(data, CostSchedule(2, 1), cfg)
        assert all(scorer.score(s.features) >= 0 for s in data)

    def test_same_seed_bitwise_identical(self):
        rng = np.random.default_rng(2)
        data = [
            sample(rng.normal(size=4), int(rng.choice([1, -1]))) for _ in range(30)
        ]
        cfg = BatchSvmConfig(epochs=10, step_size=0.05, regularization=1e-3, shuffle_seed=9)
        a = train_batch_cost_svm(data, CostSchedule(5, 1), cfg)
        b = train_batch_cost_svm(data, CostSchedule(5, 1), cfg)
        assert np.array_equal(a.weights, b.weights)

    def test_loss_non_increasing_with_safe_step(self):
        rng = np.random.default_rng(3)
        data = [
            sample(rng.normal(loc=y, scale=1.0, size=3), y)
            for y in rng.choice([1, -1], size=60)
        ]
        schedule = CostSchedule(4, 1)
        step = stable_step_size(data, schedule)
        losses = []
        for epochs in range(1, 12):
            cfg = BatchSvmConfig(epochs=epochs, step_size=step, shuffle_seed=5)
            scorer = train_batch_cost_svm(data, schedule, cfg)
            losses.append(batch_objective(scorer.weights, data, schedule))
        for earlier, later in zip(losses, losses[1:]):
            assert later <= earlier + 1e-12

    def test_empty_data_rejected(self):
        cfg = BatchSvmConfig(epochs=1, step_size=0.1)
        with pytest.raises(DataError):
            train_batch_cost_svm([], CostSchedule(1, 1), cfg)

    def test_config_validation(self):
        with pytest.raises(DataError):
            BatchSvmConfig(epochs=0, step_size=0.1)
        with pytest.raises(DataError):
            BatchSvmConfig(epochs=1, step_size=0.0)
        with pytest.raises(DataError):
            BatchSvmConfig(epochs=1, step_size=0.1, regularization=-1.0)


class TestPaBaseline:
    def test_fresh_baseline_scores_zero(self):
        learner = make_pa_baseline(3, alpha=1.0)
        x = FeatureVector.dense([4.0, -1.0, 0.5])
        assert learner.classifier.score(x) == 0.0

    def test_unit_costs_match_independent_pa1(self):
        rng = np.random.default_rng(7)
        stream = [
            sample(rng.normal(size=4), int(rng.choice([1, -1]))) for _ in range(300)
        ]
        alpha = 0.5
        learner = make_pa_baseline(4, alpha=alpha)
        ours = []
        for s in stream:
            learner.process_sample(s)
            ours.append(learner.weights.copy())
        reference = pa1_reference(stream, aggressiveness=alpha)
        for got, want in zip(ours, reference):
            np.testing.assert_allclose(got, want, atol=1e-12)

    def test_cost_sensitive_baseline_equals_zero_base_learner(self):
        rng = np.random.default_rng(8)
        stream = [
            sample(rng.normal(size=3), int(rng.choice([1, -1]))) for _ in range(100)
        ]
        schedule = CostSchedule(5, 1)
        a = make_pa_baseline(3, alpha=1.0, schedule=schedule)
        b = OcscaLearner(ZeroScorer(), 3, schedule, Hyperparams(alpha=1.0))
        a.run_stream(stream)
        b.run_stream(stream)
        assert np.array_equal(a.weights, b.weights)
