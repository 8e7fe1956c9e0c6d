"""
Unit tests for classical probabilistic AdaBoost.
Tests for branch sampling, conventional equivalence and the Hoeffding experiment.
"""

import itertools
import math

import numpy as np
import pytest

from src.app.errors import DomainError, InvalidModelError
from src.domain.models import BranchTable
from src.ml.classifiers import DecisionStump
from src.ml.core import (
    branch_weights,
    clamp_error,
    error_matrix,
    exact_weighted_errors,
    hoeffding_bound,
    sample_size_for,
    support_max_weight,
)
from src.ml.training import (
    HoeffdingTrialSpec,
    branch_uniforms,
    conventional_adaboost,
    estimate_rhat,
    hoeffding_violation_rate,
    sample_branch_bit,
    train,
)
from tests.factories import (
    ConstantErrorClassifierFactory,
    NoisyClassifierFactory,
    lookup_classifier,
    sample_from_labels,
)


def random_stump_instance(seed):
    """Random labels on [0, N) with T stumps whose plain error lies strictly inside (0, 1)."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(8, 257))
    t = int(rng.integers(1, 6))
    labels = rng.choice([-1, 1], size=n)
    labels[0], labels[1] = 1, -1
    sample = sample_from_labels(labels)
    stumps = []
    while len(stumps) < t:
        stump = DecisionStump(0, float(rng.uniform(0, n - 1)), int(rng.choice([-1, 1])))
        error = stump.error_probs(sample).mean()
        if 0.0 < error < 1.0:
            stumps.append(stump)
    return sample, stumps


class TestBranchSampling:
    """Unit tests for counter-based draws and the R̂ estimate."""

    def test_uniforms_reproducible(self):
        """Test that the same (seed, iteration, stream) gives the same draws."""
        assert np.array_equal(branch_uniforms(7, 3, 10), branch_uniforms(7, 3, 10))

    def test_uniforms_prefix_stable(self):
        """Test that the draw for point i does not depend on N."""
        assert np.array_equal(branch_uniforms(7, 3, 20)[:10], branch_uniforms(7, 3, 10))

    def test_uniforms_differ_between_iterations_and_streams(self):
        """Test that iterations and streams get distinct draws."""
        base = branch_uniforms(7, 1, 10)
        assert not np.array_equal(base, branch_uniforms(7, 2, 10))
        assert not np.array_equal(base, branch_uniforms(7, 1, 10, stream=1))

    def test_estimate_rhat_accepts_mapping(self, four_point_sample):
        """Test that bits keyed by point index give the same estimate."""
        table = BranchTable.initial(4)
        as_list = estimate_rhat(table, [1, 0, 0, 1], four_point_sample)
        as_map = estimate_rhat(table, {3: 1, 2: 0, 1: 0, 0: 1}, four_point_sample)
        assert as_list == as_map == 0.5

    @pytest.mark.parametrize("q,expected", [(0.0, 0), (1.0, 1)])
    def test_deterministic_bit_ignores_draw(self, four_point_sample, q, expected):
        """Test that q in {0, 1} fixes the bit whatever the uniform draw."""
        classifier = ConstantErrorClassifierFactory(q=q)
        for u in (0.0, 0.3, 0.999999):
            assert sample_branch_bit(classifier, four_point_sample[0], u) == expected

    def test_bit_frequency_matches_error_prob(self, four_point_sample):
        """Test that q = 0.3 over 1e5 counter draws gives a mean of 0.3 +- 0.01."""
        classifier = ConstantErrorClassifierFactory(q=0.3)
        uniforms = branch_uniforms(11, 1, 100_000)
        bits = [sample_branch_bit(classifier, four_point_sample[0], u) for u in uniforms]
        assert np.mean(bits) == pytest.approx(0.3, abs=0.01)

    def test_estimate_rhat_missing_bits(self, four_point_sample):
        """Test that a missing point raises DomainError."""
        with pytest.raises(DomainError):
            estimate_rhat(BranchTable.initial(4), {0: 1}, four_point_sample)


class TestTrain:
    """Unit tests for the classical trainer."""

    def test_empty_classifier_list(self, four_point_sample):
        """Test that training needs at least one classifier."""
        with pytest.raises(InvalidModelError):
            train([], four_point_sample, seed=0)

    def test_query_count_is_n_times_t(self):
        """Test that every iteration queries each point exactly once."""
        sample, stumps = random_stump_instance(5)
        _, trace = train(stumps, sample, seed=0)
        assert trace.query_count == sample.size * len(stumps)
        assert [r.query_count for r in trace.records] == [
            sample.size * t for t in range(1, len(stumps) + 1)
        ]

    def test_reproducible_given_seed(self):
        """Test that identical seeds give identical coefficients."""
        sample = sample_from_labels([1, -1] * 8)
        classifiers = [NoisyClassifierFactory(flip_prob=0.2) for _ in range(3)]
        first, _ = train(classifiers, sample, seed=42)
        second, _ = train(classifiers, sample, seed=42)
        assert first.alphas == second.alphas

    def test_perfect_classifier_is_clamped(self, four_point_sample, dyadic_classifiers):
        """Test that R̂ = 0 is clamped and flagged."""
        model, trace = train(dyadic_classifiers, four_point_sample, seed=0)
        assert trace.records[0].r_hat_raw == 0.0
        assert trace.records[0].clamped
        assert model.r_hats[0] == pytest.approx(1e-6)

    def test_c_hat_is_running_max(self, four_point_sample, dyadic_classifiers):
        """Test that c_hat never decreases across iterations."""
        model, _ = train(dyadic_classifiers, four_point_sample, seed=0)
        assert model.c_hats[0] == 1.0
        assert list(model.c_hats) == sorted(model.c_hats)

    @pytest.mark.parametrize("seed", range(5))
    def test_mean_weight_is_one_after_each_update(self, seed):
        """Test that (1/N) sum_x W^x = 1 after every unclamped iteration."""
        sample = sample_from_labels([1, -1] * 32)
        classifiers = [
            NoisyClassifierFactory(base=DecisionStump(0, threshold, 1), flip_prob=0.2)
            for threshold in (10.5, 30.5, 50.5)
        ]
        model, trace = train(classifiers, sample, seed=seed)
        assert not any(r.clamped for r in trace.records)

        q = error_matrix(classifiers, sample)
        bits = np.column_stack([
            branch_uniforms(seed, t, sample.size) < q[:, t - 1] for t in range(1, len(classifiers) + 1)
        ]).astype(np.int8)
        for t in range(1, len(classifiers) + 1):
            weights = branch_weights(model.r_hats[:t], bits[:, :t])
            assert weights.mean() == pytest.approx(1.0, abs=1e-9)

    def test_guessing_classifier_gets_small_alpha(self):
        """Test that q = 0.5 gives |alpha| <= 3 eps over 100 runs at the Hoeffding sample size."""
        epsilon = 0.1
        n = sample_size_for(1.0, epsilon, 0.05)
        sample = sample_from_labels([1, -1] * (n // 2) + [1] * (n % 2))
        classifier = ConstantErrorClassifierFactory(q=0.5)
        for seed in range(100):
            model, _ = train([classifier], sample, seed=seed)
            assert abs(model.alphas[0]) <= 3.0 * epsilon

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_conventional_adaboost(self, seed):
        """Test that deterministic stumps reproduce textbook AdaBoost to 1e-12."""
        sample, stumps = random_stump_instance(seed)
        model, _ = train(stumps, sample, seed=seed)
        reference = conventional_adaboost(stumps, sample)
        assert np.allclose(model.r_hats, reference.errors, atol=1e-12, rtol=0.0)
        assert np.allclose(model.alphas, reference.alphas, atol=1e-12, rtol=0.0)

    def test_conventional_rejects_probabilistic(self, four_point_sample):
        """Test that the reference trainer refuses probabilistic classifiers."""
        with pytest.raises(DomainError):
            conventional_adaboost([ConstantErrorClassifierFactory(q=0.3)], four_point_sample)


class TestUnbiasedEstimate:
    """Brute-force check that the fixed-weight estimate averages to R~_t."""

    def test_expectation_over_all_realizations(self):
        """Test E[R̂_2] = R~_2 by summing over every joint bit realization."""
        sample = sample_from_labels([1, -1])
        first = lookup_classifier(sample, [0.3, 0.6])
        second = lookup_classifier(sample, [0.2, 0.7])
        q = np.array([[0.3, 0.2], [0.6, 0.7]])
        r_tildes = exact_weighted_errors([first, second], sample)
        clamped = [clamp_error(r_tildes[0])]

        expectation = 0.0
        for flat in itertools.product([0, 1], repeat=4):
            bits = np.array(flat).reshape(2, 2)
            prob = np.prod(np.where(bits == 1, q, 1.0 - q))
            weights = branch_weights(clamped, bits[:, :1])
            expectation += prob * float(np.dot(weights, bits[:, 1]) / 2)
        assert expectation == pytest.approx(r_tildes[1], abs=1e-12)


class TestHoeffding:
    """Unit tests for the Hoeffding violation experiment."""

    def test_deterministic_classifiers_never_violate(self):
        """Test that deterministic classifiers give rate 0 for eps > 0."""
        sample, stumps = random_stump_instance(1)
        spec = HoeffdingTrialSpec(tuple(stumps), sample, iteration=1, epsilon=0.01, trials=1000)
        assert hoeffding_violation_rate(spec) == 0.0

    @pytest.mark.parametrize("n,epsilon", [(16, 0.2), (16, 0.3), (64, 0.1), (64, 0.2)])
    def test_rate_within_bound(self, n, epsilon):
        """Test that the observed rate stays under the bound plus binomial slack."""
        sample = sample_from_labels([1, -1] * (n // 2))
        classifiers = (
            ConstantErrorClassifierFactory(q=0.4),
            NoisyClassifierFactory(flip_prob=0.3),
        )
        spec = HoeffdingTrialSpec(classifiers, sample, iteration=2, epsilon=epsilon, trials=1000, seed=3)
        rate = hoeffding_violation_rate(spec)

        r_tildes = exact_weighted_errors(classifiers, sample)
        q = np.column_stack([c.error_probs(sample) for c in classifiers])
        c_hat = support_max_weight(q, [clamp_error(r_tildes[0])])
        bound = hoeffding_bound(n, epsilon, c_hat)
        assert rate <= bound + 3.0 * math.sqrt(bound / 1000)

    def test_single_point_always_violates(self):
        """Test that N = 1, q = 0.5 and eps = 0.4 violate on every trial."""
        spec = HoeffdingTrialSpec(
            (ConstantErrorClassifierFactory(q=0.5),), sample_from_labels([1]), iteration=1, epsilon=0.4,
        )
        assert hoeffding_violation_rate(spec) == 1.0

    def test_rate_at_hoeffding_sample_size(self):
        """Test that N = sample_size_for(1, eps, 0.05) keeps the rate at or below 0.05."""
        n = sample_size_for(1.0, 0.1, 0.05)
        sample = sample_from_labels([1, -1] * (n // 2) + [1] * (n % 2))
        spec = HoeffdingTrialSpec(
            (ConstantErrorClassifierFactory(q=0.3),), sample, iteration=1, epsilon=0.1, seed=9,
        )
        assert hoeffding_violation_rate(spec) <= 0.05

    def test_too_few_trials_rejected(self, four_point_sample, dyadic_classifiers):
        """Test that fewer than 1000 trials are rejected."""
        spec = HoeffdingTrialSpec(
            tuple(dyadic_classifiers), four_point_sample, iteration=1, epsilon=0.1, trials=999,
        )
        with pytest.raises(DomainError):
            hoeffding_violation_rate(spec)

    def test_iteration_range(self, four_point_sample, dyadic_classifiers):
        """Test that the iteration must name a classifier."""
        spec = HoeffdingTrialSpec(tuple(dyadic_classifiers), four_point_sample, iteration=3, epsilon=0.1)
        with pytest.raises(DomainError):
            hoeffding_violation_rate(spec)
