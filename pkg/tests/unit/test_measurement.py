"""
Unit tests for quantum-data classifiers.
Tests for density matrices, two-outcome POVMs and their use in both trainers.
"""

import itertools

import numpy as np
import pytest

from src.app.errors import InvariantViolationError, PreconditionError
from src.ml.core import clamp_error, training_accuracy, update_weight
from src.ml.training import train
from src.quantum.estimation import IterationOperator, quantum_train
from src.quantum.measurement import (
    DensityMatrix,
    POVMClassifier,
    TwoOutcomePOVM,
    noisy_projector_povm,
    povm_classifier,
    povm_error_prob,
    quantum_sample,
    random_pure_state,
    z_sign_labeler,
)
from src.quantum.simulation import (
    QuantumQueryOracle,
    RegisterLayout,
    WeightFunctionTable,
    ancilla_one_probability,
    prepare_initial,
)


class TestDensityMatrix:
    """Unit tests for DensityMatrix validation."""

    def test_pure_state(self):
        """Test that Haar-random pure states have purity one."""
        rho = random_pure_state(3, seed=4)
        assert rho.purity() == pytest.approx(1.0)
        assert rho.dimension == 3

    def test_fixed_seed_is_deterministic(self):
        """Test that the same seed gives the same state."""
        assert np.array_equal(random_pure_state(3, seed=42).entries, random_pure_state(3, seed=42).entries)
        assert not np.array_equal(random_pure_state(3, seed=42).entries, random_pure_state(3, seed=43).entries)

    def test_haar_first_moment(self):
        """Test that 1e4 Haar-random qubit states average to I/2 within 0.02."""
        mean = sum(random_pure_state(2, seed).entries for seed in range(10_000)) / 10_000
        assert np.allclose(mean, np.eye(2) / 2, atol=0.02)

    @pytest.mark.parametrize("entries", [
        [[0.5, 0.0], [0.0, 0.4]],
        [[1.5, 0.0], [0.0, -0.5]],
        [[0.5, 0.3], [0.1, 0.5]],
    ])
    def test_invalid_matrices(self, entries):
        """Test that non-unit-trace, non-PSD or non-Hermitian matrices are rejected."""
        with pytest.raises(InvariantViolationError):
            DensityMatrix(np.array(entries))

    def test_mixture(self):
        """Test that mixing two pure states lowers the purity."""
        zero = DensityMatrix.from_ket([1, 0])
        one = DensityMatrix.from_ket([0, 1])
        assert zero.mix(one, 0.5).purity() == pytest.approx(0.5)


class TestPOVM:
    """Unit tests for TwoOutcomePOVM and its error probability."""

    def test_completeness(self):
        """Test that M_-1 + M_+1 = I."""
        povm = noisy_projector_povm([1, 1j], 0.2)
        assert np.allclose(povm.m_plus + povm.m_minus, np.eye(2))

    def test_invalid_element(self):
        """Test that eigenvalues outside [0, 1] are rejected."""
        with pytest.raises(InvariantViolationError):
            TwoOutcomePOVM(np.diag([1.2, 0.0]))

    def test_error_probability_of_projector(self):
        """Test that projecting onto |0> never errs on |0><0| labelled +1."""
        povm = noisy_projector_povm([1, 0], 0.0)
        zero = DensityMatrix.from_ket([1, 0])
        assert povm_error_prob(povm, zero, 1) == pytest.approx(0.0)
        assert povm_error_prob(povm, zero, -1) == pytest.approx(1.0)

    @pytest.mark.parametrize("seed", range(10))
    def test_error_is_linear_in_mixtures(self, seed):
        """Test that the error on a mixture is the mixture of errors."""
        rng = np.random.default_rng(seed)
        povm = noisy_projector_povm(rng.normal(size=2) + 1j * rng.normal(size=2), 0.3)
        first, second = random_pure_state(2, seed), random_pure_state(2, seed + 100)
        weight = float(rng.uniform())
        mixed = povm_error_prob(povm, first.mix(second, weight), 1)
        expected = weight * povm_error_prob(povm, first, 1) + (1 - weight) * povm_error_prob(povm, second, 1)
        assert mixed == pytest.approx(expected, abs=1e-10)

    def test_dimension_mismatch(self):
        """Test that a qubit POVM cannot measure a qutrit."""
        povm = noisy_projector_povm([1, 0], 0.1)
        with pytest.raises(PreconditionError):
            povm.outcome_prob(random_pure_state(3, seed=0), 1)


class TestPOVMClassifier:
    """Unit tests for POVM classifiers inside both trainers."""

    @pytest.fixture
    def qubit_task(self):
        """Eight Haar-random qubit states and two noisy z-axis POVMs."""
        states = [random_pure_state(2, seed) for seed in range(8)]
        sample = quantum_sample(states, z_sign_labeler)
        classifiers = [
            povm_classifier(noisy_projector_povm([1, 0], 0.1), z_sign_labeler),
            POVMClassifier(noisy_projector_povm([1, 0.3], 0.2), z_sign_labeler, name="tilted"),
        ]
        return sample, classifiers

    def test_error_probabilities_in_range(self, qubit_task):
        """Test that POVM error probabilities lie in [0, 1]."""
        sample, classifiers = qubit_task
        for classifier in classifiers:
            probs = classifier.error_probs(sample)
            assert np.all((probs >= 0.0) & (probs <= 1.0))

    def test_point_without_state(self, four_point_sample):
        """Test that classical points cannot be measured."""
        classifier = povm_classifier(noisy_projector_povm([1, 0], 0.1), z_sign_labeler)
        with pytest.raises(PreconditionError):
            classifier.error_prob(four_point_sample[0])

    def test_both_trainers_run(self, qubit_task):
        """Test that classical and quantum training accept POVM classifiers."""
        sample, classifiers = qubit_task
        classical, _ = train(classifiers, sample, seed=1)
        quantum, _ = quantum_train(classifiers, sample, 0.1)
        assert classical.size == quantum.size == 2
        assert 0.0 <= training_accuracy(quantum, sample, seed=1) <= 1.0

    def test_ancilla_probability_matches_branch_sum(self):
        """Test P(ancilla = 1) after G_2 against a hand enumeration over two POVM classifiers."""
        states = [random_pure_state(2, seed) for seed in range(4)]
        sample = quantum_sample(states, z_sign_labeler)
        povms = [noisy_projector_povm([1, 0], 0.1), noisy_projector_povm([1, 0.3], 0.2)]
        classifiers = [povm_classifier(povm, z_sign_labeler) for povm in povms]
        q = np.array([
            [povm_error_prob(povm, rho, z_sign_labeler(rho)) for povm in povms] for rho in states
        ])

        r_1 = clamp_error(float(q[:, 0].mean()))
        c_hat = max(update_weight(1.0, 0, r_1), update_weight(1.0, 1, r_1))
        expected = 0.0
        for i in range(4):
            for s_1, s_2 in itertools.product([0, 1], repeat=2):
                prob = (q[i, 0] if s_1 else 1.0 - q[i, 0]) * (q[i, 1] if s_2 else 1.0 - q[i, 1])
                expected += prob * s_2 * update_weight(1.0, s_1, r_1) / (4 * c_hat)

        oracles = [QuantumQueryOracle.from_classifier(c, sample) for c in classifiers]
        table = WeightFunctionTable.build([r_1], q)
        assert table.c_hat == pytest.approx(c_hat)
        init = prepare_initial(sample, RegisterLayout(4, 2))
        prepared = IterationOperator(oracles, table, table.c_hat).prepare(init)
        assert ancilla_one_probability(prepared) == pytest.approx(expected, abs=1e-10)
