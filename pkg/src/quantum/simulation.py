"""
Dense statevector simulation of the registers used by quantum AdaBoost.

Register layout (C order): data index x (N values, not padded to a power
of two) x branch register s_t (t qubits, s_1 most significant) x ancilla
(1 qubit) x phase register (m qubits). Amplitudes are stored as a 4-d
complex array with exactly that shape.

The weight register M is simulated as an exact function table over
(x, s_t) instead of an amplitude-encoded binary register. A reversible
arithmetic circuit computes the same function with the same query cost;
reading the table directly removes any discretization error in W.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.app.config import Config
from src.app.errors import DomainError, InvariantViolationError, PreconditionError, ResourceCapError
from src.domain.models import LabeledSample, WeakClassifier
from src.ml.core import (
    DEFAULT_ENUMERATION_CAP,
    branch_probabilities,
    branch_weights,
    check_enumeration_cap,
    enumerate_branches,
    weight_bound,
)

logger = logging.getLogger(__name__)

DEFAULT_MEMORY_CAP = Config.MEMORY_CAP_AMPLITUDES
NORM_TOLERANCE = 1e-10


# =============================================================================
# REGISTERS AND STATES
# =============================================================================


@dataclass(frozen=True)
class RegisterLayout:
    n_data: int
    t: int
    n_phase: int = 0
    ancilla: int = 1

    def __post_init__(self):
        if self.n_data < 1 or self.t < 0 or self.n_phase < 0:
            raise DomainError(f"invalid register layout {self}")

    @property
    def shape(self):
        return (self.n_data, 2 ** self.t, 2 ** self.ancilla, 2 ** self.n_phase)

    @property
    def dimension(self) -> int:
        return self.n_data * 2 ** self.t * 2 ** self.ancilla * 2 ** self.n_phase

    def check_capacity(self, memory_cap: int = DEFAULT_MEMORY_CAP) -> None:
        if self.dimension > memory_cap:
            raise ResourceCapError(
                f"state of {self.dimension} amplitudes exceeds the memory cap of {memory_cap}",
                dimension=self.dimension,
                memory_cap=memory_cap,
            )


@dataclass
class QuantumState:
    amplitudes: np.ndarray
    layout: RegisterLayout

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != self.layout.shape:
            raise PreconditionError(
                f"amplitude shape {self.amplitudes.shape} does not match layout {self.layout.shape}"
            )

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def inner(self, other: "QuantumState") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.vector, other.vector))

    def assert_normalized(self, tolerance: float = NORM_TOLERANCE) -> None:
        norm = self.norm()
        if abs(norm - 1.0) > tolerance:
            raise InvariantViolationError(f"state norm {norm!r} deviates from 1")


class QueryCounter:
    """Counts applications of the query oracles H_i and their inverses."""

    def __init__(self):
        self.count = 0

    def record(self, queries: int) -> None:
        self.count += queries


def prepare_initial(
    sample: LabeledSample, layout: RegisterLayout, memory_cap: int = DEFAULT_MEMORY_CAP
) -> QuantumState:
    """Uniform superposition (1/sqrt N) sum_x |x> with every other register |0>."""
    if layout.n_data != sample.size:
        raise PreconditionError(f"layout holds {layout.n_data} data states, sample has {sample.size}")
    layout.check_capacity(memory_cap)
    amplitudes = np.zeros(layout.shape, dtype=np.complex128)
    amplitudes[:, 0, 0, 0] = 1.0 / np.sqrt(layout.n_data)
    return QuantumState(amplitudes, layout)


# =============================================================================
# QUERY ORACLES (A_t)
# =============================================================================


@dataclass(frozen=True)
class QuantumQueryOracle:
    """
    Query operator H_i as one real 2x2 rotation per data index.

    Column 0 is (sqrt q(0|x), sqrt q(1|x)), so |x>|0> maps to
    |x>(sqrt q(0|x)|0> + sqrt q(1|x)|1>).
    """
    unitaries: np.ndarray

    @classmethod
    def from_error_probs(cls, q: np.ndarray) -> "QuantumQueryOracle":
        q = np.asarray(q, dtype=np.float64)
        if np.any(q < 0.0) or np.any(q > 1.0):
            raise DomainError("oracle error probabilities must lie in [0, 1]")
        keep, flip = np.sqrt(1.0 - q), np.sqrt(q)
        unitaries = np.empty((q.shape[0], 2, 2))
        unitaries[:, 0, 0] = keep
        unitaries[:, 1, 0] = flip
        unitaries[:, 0, 1] = -flip
        unitaries[:, 1, 1] = keep
        return cls(unitaries)

    @classmethod
    def from_classifier(cls, classifier: WeakClassifier, sample: LabeledSample) -> "QuantumQueryOracle":
        return cls.from_error_probs(classifier.error_probs(sample))

    @property
    def error_probs(self) -> np.ndarray:
        return self.unitaries[:, 1, 0] ** 2


def apply_oracle_layer(
    state: QuantumState, oracles: Sequence[QuantumQueryOracle], inverse: bool = False
) -> QuantumState:
    layout = state.layout
    t = layout.t
    if len(oracles) != t:
        raise PreconditionError(f"{len(oracles)} oracles for a {t}-bit branch register")
    tensor = state.amplitudes.reshape((layout.n_data,) + (2,) * t + (2, 2 ** layout.n_phase))
    spec = "nba,n...b->n...a" if inverse else "nab,n...b->n...a"
    for i, oracle in enumerate(oracles):
        axis = 1 + i
        moved = np.moveaxis(tensor, axis, -1)
        rotated = np.einsum(spec, oracle.unitaries, moved)
        tensor = np.moveaxis(rotated, -1, axis)
    return QuantumState(tensor.reshape(layout.shape), layout)


def apply_query_oracles(
    state: QuantumState,
    oracles: Sequence[QuantumQueryOracle],
    counter: QueryCounter,
    inverse: bool = False,
) -> QuantumState:
    """
    Apply H_1 (x) ... (x) H_t to the branch register (the map A_t).

    The forward application requires an all-zero branch register and
    produces amplitudes sqrt(q(s_t|x)/N) on |x>|s_t>. Every application,
    forward or inverse, adds t to the counter.
    """
    if not inverse and np.any(np.abs(state.amplitudes[:, 1:, :, :]) > 0.0):
        raise PreconditionError("branch register must be |0...0> before querying")
    result = apply_oracle_layer(state, oracles, inverse)
    counter.record(len(oracles))
    return result


# =============================================================================
# WEIGHT TABLE AND CONDITIONAL ROTATION (Q_t)
# =============================================================================


@dataclass(frozen=True)
class WeightFunctionTable:
    """
    Exact content of the weight register: W^x_{s_t} for every (x, s_t).

    The weight of s_t is built from its first t - 1 bits and the clamped
    R̂_1 ... R̂_{t-1}; the last bit is the error bit r^x_t being averaged.
    `support` marks branch strings with nonzero probability q(s_t | x).
    """
    weights: np.ndarray
    support: np.ndarray
    r_hats: tuple

    @classmethod
    def build(
        cls, r_hats: Sequence[float], q: np.ndarray, cap: int = DEFAULT_ENUMERATION_CAP
    ) -> "WeightFunctionTable":
        """
        Args:
            r_hats: Clamped R̂_1 ... R̂_{t-1}
            q: Shape (N, t) error probabilities of the first t classifiers
            cap: Largest t whose 2^t branch strings may be tabulated

        Raises:
            EnumerationCapError: If t exceeds the cap
        """
        t = q.shape[1]
        check_enumeration_cap(t, cap)
        if len(r_hats) != t - 1:
            raise PreconditionError(f"{len(r_hats)} estimates supplied for iteration {t}")
        bits = enumerate_branches(t)
        per_branch = branch_weights(r_hats, bits[:, :t - 1])
        weights = np.broadcast_to(per_branch, (q.shape[0], per_branch.shape[0])).copy()
        if np.any(weights <= 0.0):
            raise InvariantViolationError("weight table entries must be positive")
        return cls(weights, branch_probabilities(q) > 0.0, tuple(r_hats))

    @property
    def t(self) -> int:
        return int(np.log2(self.weights.shape[1]))

    @property
    def c_hat(self) -> float:
        """Exact maximum weight over supported branch strings."""
        return float(np.max(np.where(self.support, self.weights, 0.0)))

    @property
    def c_hat_bound(self) -> float:
        return weight_bound(self.r_hats)


def _rotation_angles(table: WeightFunctionTable, c_hat: float):
    ratios = table.weights / c_hat
    last_bit = (np.arange(table.weights.shape[1]) & 1).astype(bool)[None, :]
    active = table.support & last_bit
    if np.any(ratios[active] > 1.0 + 1e-12):
        raise InvariantViolationError(
            f"weight {float(ratios[active].max() * c_hat)} exceeds c_hat {c_hat}; rotation would be complex"
        )
    ratios = np.clip(ratios, 0.0, 1.0)
    sines = np.where(last_bit, np.sqrt(ratios), 0.0)
    cosines = np.where(last_bit, np.sqrt(1.0 - ratios), 1.0)
    return cosines, sines


def rotate_ancilla(
    state: QuantumState, table: WeightFunctionTable, c_hat: float, inverse: bool = False
) -> QuantumState:
    cosines, sines = _rotation_angles(table, c_hat)
    if inverse:
        sines = -sines
    cosines = cosines[:, :, None]
    sines = sines[:, :, None]
    a0 = state.amplitudes[:, :, 0, :]
    a1 = state.amplitudes[:, :, 1, :]
    amplitudes = np.empty_like(state.amplitudes)
    amplitudes[:, :, 0, :] = cosines * a0 - sines * a1
    amplitudes[:, :, 1, :] = sines * a0 + cosines * a1
    return QuantumState(amplitudes, state.layout)


def apply_rotation_qt(
    state: QuantumState, weights: WeightFunctionTable, c_hat: float
) -> QuantumState:
    """
    Conditional rotation Q_t on the ancilla.

    Where the last branch bit is 1 the ancilla goes to
    sqrt(1 - W/c)|0> + sqrt(W/c)|1>; last-bit-0 states are untouched.
    Afterwards P(ancilla = 1) = R̂_t / c_hat.

    Raises:
        PreconditionError: If the ancilla is not |0> on the state's support
        InvariantViolationError: If a supported weight exceeds c_hat
    """
    if np.any(np.abs(state.amplitudes[:, :, 1, :]) > 0.0):
        raise PreconditionError("ancilla must be |0> before the conditional rotation")
    return rotate_ancilla(state, weights, c_hat)


def ancilla_one_probability(state: QuantumState) -> float:
    """Total probability of the ancilla-1 subspace."""
    return float(np.sum(np.abs(state.amplitudes[:, :, 1, :]) ** 2))


# =============================================================================
# REFLECTIONS
# =============================================================================


def reflect_about_init(state: QuantumState, init: QuantumState) -> QuantumState:
    """(2|init><init| - I)|state>: keeps init, negates everything orthogonal to it."""
    overlap = init.inner(state)
    return QuantumState(2.0 * overlap * init.amplitudes - state.amplitudes, state.layout)


def flip_ancilla_zero(state: QuantumState) -> QuantumState:
    """Phase flip of the ancilla-|0> component (-Z on the ancilla)."""
    amplitudes = state.amplitudes.copy()
    amplitudes[:, :, 0, :] *= -1.0
    return QuantumState(amplitudes, state.layout)
