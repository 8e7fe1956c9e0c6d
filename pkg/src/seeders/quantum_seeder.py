"""
Quantum State Seeder - Haar-random pure states measured by noisy projective POVMs.
"""
from typing import List

import numpy as np

from src.domain.models import LabeledSample, WeakClassifier
from src.quantum.measurement import (
    POVMClassifier,
    noisy_projector_povm,
    quantum_sample,
    random_pure_state,
    z_sign_labeler,
)
from src.seeders.base_seeder import BaseSeeder


class QuantumStateSeeder(BaseSeeder):
    """
    Seeds N Haar-random pure states of dimension d, labelled by z_sign_labeler.

    Each POVM projects onto a direction tilted away from |0> by a random
    amount and is mixed with I/2 at level flip_noise.
    """

    def __init__(self, spec, seed: int, dimension: int = 2):
        super().__init__(spec, seed)
        self.dimension = dimension

    def build_sample(self) -> LabeledSample:
        states = [
            random_pure_state(self.dimension, self.seed * 100003 + i)
            for i in range(self.spec.n_points)
        ]
        return quantum_sample(states, z_sign_labeler)

    def build_classifiers(self, sample: LabeledSample) -> List[WeakClassifier]:
        classifiers = []
        for k in range(self.spec.n_classifiers):
            tilt = self.rng.normal(size=self.dimension) + 1j * self.rng.normal(size=self.dimension)
            direction = np.zeros(self.dimension, dtype=np.complex128)
            direction[0] = 1.0
            direction += 0.5 * tilt / np.linalg.norm(tilt)
            povm = noisy_projector_povm(direction, self.spec.flip_noise)
            classifiers.append(POVMClassifier(povm, z_sign_labeler, name=f"povm[{k}]"))
        return classifiers
