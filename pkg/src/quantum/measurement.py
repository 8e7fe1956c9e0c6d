"""
Quantum-data weak classifiers: two-outcome POVMs measured on density matrices.

A POVM {M_-1, M_+1} with M_-1 + M_+1 = I classifies rho_x; its error
probability is the weight of the outcome that disagrees with y(rho_x).
Each boosting iteration measures a fresh copy of rho_x, so the POVM acts
as a probabilistic classifier in both trainers.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from src.app.errors import DomainError, InvariantViolationError, PreconditionError
from src.domain.models import LabeledPoint, LabeledSample, WeakClassifier

logger = logging.getLogger(__name__)

TOLERANCE = 1e-10

Labeler = Callable[["DensityMatrix"], int]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.entries, dtype=np.complex128)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise InvariantViolationError(f"density matrix must be square, got shape {rho.shape}")
        if not np.allclose(rho, rho.conj().T, atol=TOLERANCE, rtol=0.0):
            raise InvariantViolationError("density matrix must be Hermitian")
        if abs(np.trace(rho).real - 1.0) > TOLERANCE:
            raise InvariantViolationError(f"density matrix trace {np.trace(rho).real!r} is not 1")
        if np.linalg.eigvalsh(rho).min() < -TOLERANCE:
            raise InvariantViolationError("density matrix must be positive semidefinite")
        object.__setattr__(self, "entries", rho)

    @classmethod
    def from_ket(cls, ket: Sequence[complex]) -> "DensityMatrix":
        psi = np.asarray(ket, dtype=np.complex128)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)

    def mix(self, other: "DensityMatrix", weight: float) -> "DensityMatrix":
        """weight * self + (1 - weight) * other."""
        return DensityMatrix(weight * self.entries + (1.0 - weight) * other.entries)

    def features(self) -> np.ndarray:
        """Real feature vector: real parts then imaginary parts of the entries."""
        return np.concatenate([self.entries.real.ravel(), self.entries.imag.ravel()])


@dataclass(frozen=True, eq=False)
class TwoOutcomePOVM:
    """Binary measurement given by M_+1; M_-1 = I - M_+1."""
    m_plus: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m_plus, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvariantViolationError(f"POVM element must be square, got shape {m.shape}")
        if not np.allclose(m, m.conj().T, atol=TOLERANCE, rtol=0.0):
            raise InvariantViolationError("POVM element must be Hermitian")
        eigenvalues = np.linalg.eigvalsh(m)
        if eigenvalues.min() < -TOLERANCE or eigenvalues.max() > 1.0 + TOLERANCE:
            raise InvariantViolationError("POVM element eigenvalues must lie in [0, 1]")
        object.__setattr__(self, "m_plus", m)

    @property
    def dimension(self) -> int:
        return self.m_plus.shape[0]

    @property
    def m_minus(self) -> np.ndarray:
        return np.eye(self.dimension) - self.m_plus

    def element(self, outcome: int) -> np.ndarray:
        if outcome == 1:
            return self.m_plus
        if outcome == -1:
            return self.m_minus
        raise DomainError(f"POVM outcome must be -1 or +1, got {outcome}")

    def outcome_prob(self, rho: DensityMatrix, outcome: int) -> float:
        if rho.dimension != self.dimension:
            raise PreconditionError(
                f"POVM of dimension {self.dimension} cannot measure a {rho.dimension}-dimensional state"
            )
        return float(np.trace(self.element(outcome) @ rho.entries).real)


def povm_error_prob(povm: TwoOutcomePOVM, rho: DensityMatrix, true_label: int) -> float:
    """
    tr(M_{-y} rho): probability the measurement outcome disagrees with y.

    Clipped into [0, 1] when it overshoots by at most the tolerance.
    """
    if true_label not in (-1, 1):
        raise DomainError(f"label must be -1 or +1, got {true_label}")
    prob = povm.outcome_prob(rho, -true_label)
    if prob < -TOLERANCE or prob > 1.0 + TOLERANCE:
        raise InvariantViolationError(f"POVM error probability {prob!r} outside [0, 1]")
    return min(max(prob, 0.0), 1.0)


def random_pure_state(d: int, seed: int) -> DensityMatrix:
    """Haar-random pure state |psi><psi| from a normalized complex Gaussian vector."""
    if d < 2:
        raise DomainError(f"dimension must be at least 2, got {d}")
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    return DensityMatrix.from_ket(psi)


def z_sign_labeler(rho: DensityMatrix) -> int:
    """+1 when the |0> population is at least 1/d (sign of <Z> for qubits), else -1."""
    return 1 if rho.entries[0, 0].real >= 1.0 / rho.dimension else -1


def noisy_projector_povm(direction: Sequence[complex], noise: float) -> TwoOutcomePOVM:
    """M_+1 = (1 - noise) |phi><phi| + noise I / 2."""
    if not 0.0 <= noise <= 1.0:
        raise DomainError(f"noise must lie in [0, 1], got {noise}")
    projector = DensityMatrix.from_ket(direction).entries
    return TwoOutcomePOVM((1.0 - noise) * projector + 0.5 * noise * np.eye(projector.shape[0]))


class POVMClassifier(WeakClassifier):
    """Adapter exposing a POVM through the WeakClassifier interface."""

    def __init__(self, povm: TwoOutcomePOVM, labeler: Labeler, name: str = "povm"):
        self.povm = povm
        self.labeler = labeler
        self.name = name

    def _state(self, point: LabeledPoint) -> DensityMatrix:
        if point.state is None:
            raise PreconditionError(f"{self.name}: point carries no quantum state")
        return point.state

    def error_prob(self, point: LabeledPoint) -> float:
        rho = self._state(point)
        return povm_error_prob(self.povm, rho, self.labeler(rho))

    def predict(self, point: LabeledPoint, rng: Optional[np.random.Generator] = None) -> int:
        """Measure one fresh copy of rho_x; the outcome does not depend on the stored label."""
        plus = self.povm.outcome_prob(self._state(point), 1)
        if plus >= 1.0:
            return 1
        if plus <= 0.0:
            return -1
        if rng is None:
            raise DomainError(f"{self.name}: a generator is required to simulate a measurement")
        return 1 if rng.random() < plus else -1


def povm_classifier(povm: TwoOutcomePOVM, labeler: Labeler) -> WeakClassifier:
    return POVMClassifier(povm, labeler)


def quantum_sample(states: Sequence[DensityMatrix], labeler: Labeler) -> LabeledSample:
    """Sample whose points carry their density matrix and the labeler's label."""
    return LabeledSample(tuple(
        LabeledPoint(features=rho.features(), label=labeler(rho), state=rho) for rho in states
    ))
