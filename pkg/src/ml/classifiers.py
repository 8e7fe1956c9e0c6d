"""
Weak classifier implementations plugged into both trainers.
"""

from typing import Callable, Dict, Optional, Tuple

import numpy as np

from src.app.errors import DomainError
from src.domain.models import LabeledPoint, WeakClassifier


class DecisionStump(WeakClassifier):
    """Axis-aligned stump: polarity if x[feature] > threshold, else -polarity."""

    def __init__(self, feature: int, threshold: float, polarity: int = 1):
        if polarity not in (-1, 1):
            raise DomainError(f"stump polarity must be -1 or +1, got {polarity}")
        self.feature = feature
        self.threshold = float(threshold)
        self.polarity = polarity
        self.name = f"stump[x{feature} > {self.threshold:.4g}, {polarity:+d}]"

    def predict(self, point: LabeledPoint, rng: Optional[np.random.Generator] = None) -> int:
        return self.polarity if point.features[self.feature] > self.threshold else -self.polarity

    def error_prob(self, point: LabeledPoint) -> float:
        return 0.0 if self.predict(point) == point.label else 1.0

    def flipped(self) -> "DecisionStump":
        return DecisionStump(self.feature, self.threshold, -self.polarity)


class NoisyClassifier(WeakClassifier):
    """
    Deterministic base classifier whose output is flipped with probability eta.

    q(1|x) is eta where the base is right and 1 - eta where it is wrong.
    """

    def __init__(self, base: WeakClassifier, flip_prob: float):
        if not 0.0 <= flip_prob <= 1.0:
            raise DomainError(f"flip probability must lie in [0, 1], got {flip_prob}")
        self.base = base
        self.flip_prob = float(flip_prob)
        self.name = f"noisy({base.name}, eta={self.flip_prob:.3g})"

    def error_prob(self, point: LabeledPoint) -> float:
        base_error = self.base.error_prob(point)
        if base_error not in (0.0, 1.0):
            raise DomainError(f"{self.name}: base classifier must be deterministic")
        return 1.0 - self.flip_prob if base_error == 1.0 else self.flip_prob


class ConstantErrorClassifier(WeakClassifier):
    """Misclassifies every input with the same probability q."""

    def __init__(self, q: float):
        if not 0.0 <= q <= 1.0:
            raise DomainError(f"error probability must lie in [0, 1], got {q}")
        self.q = float(q)
        self.name = f"constant(q={self.q:.3g})"

    def error_prob(self, point: LabeledPoint) -> float:
        return self.q


class LookupClassifier(WeakClassifier):
    """Error probabilities looked up by the point's feature vector."""

    def __init__(self, table: Dict[Tuple[float, ...], float], default: Optional[float] = None):
        self.table = {tuple(float(v) for v in k): float(q) for k, q in table.items()}
        self.default = default
        self.name = f"lookup({len(self.table)} entries)"

    def error_prob(self, point: LabeledPoint) -> float:
        key = tuple(float(v) for v in point.features)
        if key in self.table:
            return self.table[key]
        if self.default is None:
            raise DomainError(f"{self.name}: no error probability for features {key}")
        return self.default


class FunctionClassifier(WeakClassifier):
    """Wraps any callable point -> q(1|x)."""

    def __init__(self, fn: Callable[[LabeledPoint], float], name: str = "function"):
        self.fn = fn
        self.name = name

    def error_prob(self, point: LabeledPoint) -> float:
        return float(self.fn(point))
