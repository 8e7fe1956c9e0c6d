"""
Dataset Seeders - two labeled point clouds with axis-aligned stumps.

- blobs: deterministic decision stumps
- noisy-stump: the same stumps, each output flipped with probability eta
"""
import logging
from typing import Dict, List, Tuple, Type

import numpy as np
from sklearn.datasets import make_blobs

from src.app.errors import DatasetGenerationError
from src.domain.models import DatasetSpec, LabeledPoint, LabeledSample, WeakClassifier
from src.ml.classifiers import DecisionStump, NoisyClassifier
from src.seeders.base_seeder import BaseSeeder

logger = logging.getLogger(__name__)


class BlobsSeeder(BaseSeeder):
    """
    Seeds two Gaussian clouds in the plane centred at -s(1, 1) and +s(1, 1),
    labelled -1 and +1, with axis-aligned decision stumps.

    The first two stumps split each axis at zero; later ones use random
    thresholds inside the data range. Polarity is chosen so every stump
    errs on at most half of the sample.
    """

    def build_sample(self) -> LabeledSample:
        s = self.spec.separation
        features, groups = make_blobs(
            n_samples=self.spec.n_points,
            centers=[[-s, -s], [s, s]],
            cluster_std=1.0,
            random_state=self.seed & 0xFFFFFFFF,
        )
        return LabeledSample(tuple(
            LabeledPoint(features=x, label=int(2 * g - 1)) for x, g in zip(features, groups)
        ))

    def build_stumps(self, sample: LabeledSample) -> List[DecisionStump]:
        features = sample.features
        stumps = []
        for k in range(self.spec.n_classifiers):
            feature = k % 2
            if k < 2:
                threshold = 0.0
            else:
                low, high = features[:, feature].min(), features[:, feature].max()
                threshold = float(self.rng.uniform(low, high))
            stump = DecisionStump(feature, threshold, 1)
            if stump.error_probs(sample).mean() > 0.5:
                stump = stump.flipped()
            stumps.append(stump)
        return stumps

    def build_classifiers(self, sample: LabeledSample) -> List[WeakClassifier]:
        return list(self.build_stumps(sample))

    def stumps_of(self, classifiers: List[WeakClassifier]) -> List[WeakClassifier]:
        return list(classifiers)

    def validate(self, sample: LabeledSample, classifiers: List[WeakClassifier]) -> None:
        super().validate(sample, classifiers)
        errors = [s.error_probs(sample).mean() for s in self.stumps_of(classifiers)]
        if not errors or min(errors) >= 0.5:
            raise DatasetGenerationError(f"{self.spec.name}: no stump beats random guessing")


class NoisyStumpSeeder(BlobsSeeder):
    """Blobs stumps wrapped so q(1|x) is eta where the stump is right and 1 - eta where wrong."""

    # checked on the stumps under the noise
    def stumps_of(self, classifiers: List[WeakClassifier]) -> List[WeakClassifier]:
        return [c.base for c in classifiers]

    def build_classifiers(self, sample: LabeledSample) -> List[WeakClassifier]:
        return [NoisyClassifier(s, self.spec.flip_noise) for s in self.build_stumps(sample)]


SEEDERS: Dict[str, Type[BaseSeeder]] = {
    'blobs': BlobsSeeder,
    'noisy-stump': NoisyStumpSeeder,
}


def generate_dataset(spec: DatasetSpec, seed: int) -> Tuple[LabeledSample, List[WeakClassifier]]:
    """
    Build a reproducible sample and classifier list.

    Raises:
        DatasetGenerationError: Unknown generator or degenerate sample
    """
    seeder_cls = SEEDERS.get(spec.name)
    if seeder_cls is None:
        raise DatasetGenerationError(f"unknown dataset generator {spec.name!r}")
    sample, classifiers = seeder_cls(spec, seed).run()
    logger.info(f"generated {spec.name}: N={sample.size}, T={len(classifiers)}, seed={seed}")
    return sample, classifiers
