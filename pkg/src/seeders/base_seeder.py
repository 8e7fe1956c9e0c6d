"""
Base Seeder - Abstract base class for all dataset seeders.
"""
from abc import ABC, abstractmethod
from typing import List, Tuple

import numpy as np

from src.app.errors import DatasetGenerationError
from src.domain.models import DatasetSpec, LabeledSample, WeakClassifier


class BaseSeeder(ABC):
    """
    Abstract base class for synthetic dataset seeders.

    All seeders should inherit from this class and implement
    the build_sample() and build_classifiers() methods.
    """

    def __init__(self, spec: DatasetSpec, seed: int):
        """
        Initialize the seeder with a dataset spec and a seed.

        Args:
            spec: Dataset spec (generator name, sizes, noise)
            seed: Seed for every random choice the seeder makes
        """
        self.spec = spec
        self.seed = seed
        self.rng = np.random.default_rng(seed)

    @abstractmethod
    def build_sample(self) -> LabeledSample:
        """
        Generate the labeled training sample.

        Returns:
            LabeledSample of spec.n_points points
        """
        pass

    @abstractmethod
    def build_classifiers(self, sample: LabeledSample) -> List[WeakClassifier]:
        """
        Generate the fixed weak classifiers for a sample.

        Returns:
            List of spec.n_classifiers classifiers
        """
        pass

    def validate(self, sample: LabeledSample, classifiers: List[WeakClassifier]) -> None:
        """Reject single-label samples."""
        if len(set(sample.labels.tolist())) < 2:
            raise DatasetGenerationError(
                f"{self.spec.name}: sample of {sample.size} points carries a single label"
            )

    def run(self) -> Tuple[LabeledSample, List[WeakClassifier]]:
        """
        Orchestrator method to run the seeder.

        Returns:
            Tuple of (sample, classifiers)
        """
        sample = self.build_sample()
        classifiers = self.build_classifiers(sample)
        self.validate(sample, classifiers)
        return sample, classifiers
