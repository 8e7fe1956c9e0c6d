"""
Amplitude estimation of R̂_t and the quantum AdaBoost training loop.

G_t = Q_t A_t prepares sin(θ)|φ0>|0> + cos(θ)|φ1>|1> with
cos²(θ) = R̂_t / ĉ_t. The iterate W_G = G_t U⊥ G_t† Z (Z flips the
ancilla-|0> component, U⊥ reflects about the initial state) rotates the
span of {φ0, φ1} by 2θ, so its eigenvalues there are e^{±2iθ}. Phase
estimation reads 2θ (or 2π - 2θ) to m bits; folding the pair gives
θ̂ in [0, π/2] and R̂_t = ĉ_t cos²(θ̂).

Each iteration t starts over from the initial state and queries
classifiers 1 ... t again, since measuring the phase register destroys
the superposed weights.
"""

import logging
import math
import time
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from src.app.config import Config
from src.app.errors import DomainError, InvalidModelError, PreconditionError
from src.domain.models import (
    BoostModel,
    EstimationReport,
    LabeledSample,
    QuantumIterationRecord,
    WeakClassifier,
)
from src.ml.core import DEFAULT_CLAMP_WIDTH, alpha_from_error, clamp_error
from src.quantum.simulation import (
    DEFAULT_MEMORY_CAP,
    QuantumQueryOracle,
    QuantumState,
    QueryCounter,
    RegisterLayout,
    WeightFunctionTable,
    apply_oracle_layer,
    rotate_ancilla,
    ancilla_one_probability,
    apply_query_oracles,
    apply_rotation_qt,
    flip_ancilla_zero,
    prepare_initial,
    reflect_about_init,
)

logger = logging.getLogger(__name__)

DEFAULT_GUARD_BITS = Config.PHASE_GUARD_BITS
ESTIMATION_MODES = ("exact", "sampled")


# =============================================================================
# OPERATORS
# =============================================================================


class IterationOperator:
    """G_t = Q_t A_t with its inverse; every application costs t queries."""

    def __init__(
        self,
        oracles: Sequence[QuantumQueryOracle],
        table: WeightFunctionTable,
        c_hat: float,
        counter: Optional[QueryCounter] = None,
    ):
        self.oracles = list(oracles)
        self.table = table
        self.c_hat = c_hat
        self.counter = counter if counter is not None else QueryCounter()

    @property
    def t(self) -> int:
        return len(self.oracles)

    def prepare(self, init: QuantumState) -> QuantumState:
        """First application on the initial state, with the register preconditions checked."""
        queried = apply_query_oracles(init, self.oracles, self.counter)
        return apply_rotation_qt(queried, self.table, self.c_hat)

    def forward(self, state: QuantumState) -> QuantumState:
        queried = apply_oracle_layer(state, self.oracles)
        self.counter.record(self.t)
        return rotate_ancilla(queried, self.table, self.c_hat)

    def inverse(self, state: QuantumState) -> QuantumState:
        unrotated = rotate_ancilla(state, self.table, self.c_hat, inverse=True)
        self.counter.record(self.t)
        return apply_oracle_layer(unrotated, self.oracles, inverse=True)


def grover_iterate(state: QuantumState, operator: IterationOperator, init: QuantumState) -> QuantumState:
    """One application of W_G = G U⊥ G† Z."""
    flipped = flip_ancilla_zero(state)
    pulled_back = operator.inverse(flipped)
    reflected = reflect_about_init(pulled_back, init)
    return operator.forward(reflected)


class GroverIterate:
    """W_G bound to its G_t and initial state, applied by calling it."""

    def __init__(self, operator: IterationOperator, init: QuantumState):
        self.operator = operator
        self.init = init

    def __call__(self, state: QuantumState) -> QuantumState:
        return grover_iterate(state, self.operator, self.init)


def _ancilla_components(prepared: QuantumState) -> Tuple[QuantumState, QuantumState]:
    good = np.zeros_like(prepared.amplitudes)
    bad = np.zeros_like(prepared.amplitudes)
    good[:, :, 1, :] = prepared.amplitudes[:, :, 1, :]
    bad[:, :, 0, :] = prepared.amplitudes[:, :, 0, :]
    return QuantumState(bad, prepared.layout), QuantumState(good, prepared.layout)


def restricted_iterate_matrix(iterate: GroverIterate, prepared: QuantumState) -> np.ndarray:
    """
    2x2 matrix of W_G on span{φ0, φ1}, in that basis.

    φ0 and φ1 are the normalized ancilla-0 and ancilla-1 components of
    the prepared state G_t|init>.

    Raises:
        PreconditionError: If either component vanishes (the span is 1-d)
    """
    bad, good = _ancilla_components(prepared)
    basis = []
    for component in (bad, good):
        norm = component.norm()
        if norm < 1e-12:
            raise PreconditionError("prepared state lies in one ancilla subspace; span is one-dimensional")
        basis.append(QuantumState(component.amplitudes / norm, component.layout))
    matrix = np.empty((2, 2), dtype=np.complex128)
    for j, column in enumerate(basis):
        image = iterate(column)
        for i, row in enumerate(basis):
            matrix[i, j] = row.inner(image)
    return matrix


# =============================================================================
# PHASE ESTIMATION
# =============================================================================


class PhaseEstimate(NamedTuple):
    theta_hat: float
    distribution: np.ndarray


def phase_bits_for(c_hat: float, epsilon: float, guard_bits: int = DEFAULT_GUARD_BITS) -> int:
    """m = ceil(log2(ĉ/ε)) + guard bits, at least 1."""
    if epsilon <= 0.0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    return max(1, math.ceil(math.log2(c_hat / epsilon)) + guard_bits)


def fold_phase(y: int, n_phase: int) -> float:
    """θ̂ for phase outcome y: 2π y / 2^m and 2π minus it map to the same θ̂ in [0, π/2]."""
    size = 2 ** n_phase
    return math.pi * min(y, size - y) / size


def phase_estimate_theta(
    iterate: GroverIterate,
    prepared: QuantumState,
    m: int,
    mode: str = "exact",
    rng: Optional[np.random.Generator] = None,
    memory_cap: int = DEFAULT_MEMORY_CAP,
) -> PhaseEstimate:
    """
    Textbook phase estimation of W_G on the prepared state.

    The controlled powers W_G^{2^j} are built by repeated application, so
    the work register paired with phase value k holds W_G^k |prepared>
    (2^m - 1 iterate applications in total). An inverse QFT on the phase
    register gives the exact measurement distribution.

    Args:
        iterate: The Grover iterate W_G
        prepared: G_t applied to the initial state
        m: Phase register width
        mode: "exact" picks the most likely folded θ̂; "sampled" draws one outcome
        rng: Generator for sampled mode

    Returns:
        PhaseEstimate: (theta_hat, distribution over the 2^m outcomes)
    """
    if m < 1:
        raise DomainError(f"phase register needs at least one bit, got {m}")
    if mode not in ESTIMATION_MODES:
        raise DomainError(f"unknown estimation mode {mode!r}")
    work = prepared.layout
    layout = RegisterLayout(work.n_data, work.t, m)
    layout.check_capacity(memory_cap)

    size = 2 ** m
    powers = [prepared.amplitudes[..., 0]]
    current = prepared
    for _ in range(size - 1):
        current = iterate(current)
        powers.append(current.amplitudes[..., 0])
    controlled = QuantumState(np.stack(powers, axis=-1) / math.sqrt(size), layout)

    transformed = np.fft.fft(controlled.amplitudes, axis=-1) / math.sqrt(size)
    distribution = np.sum(np.abs(transformed) ** 2, axis=(0, 1, 2))

    folded_index = np.minimum(np.arange(size), size - np.arange(size))
    if mode == "exact":
        folded = np.bincount(folded_index, weights=distribution, minlength=size // 2 + 1)
        outcome = int(np.argmax(folded))
    else:
        if rng is None:
            raise DomainError("sampled estimation requires a generator")
        outcome = int(folded_index[rng.choice(size, p=distribution / distribution.sum())])
    theta_hat = fold_phase(outcome, m)
    logger.debug(f"phase estimation m={m}: folded outcome {outcome}/{size}, θ̂={theta_hat:.6f}")
    return PhaseEstimate(theta_hat, distribution)


def expected_quantum_queries(t: int, m: int) -> int:
    """Queries of iteration t: one G_t plus 2^m - 1 iterates of G_t and G_t†."""
    return t * (2 * (2 ** m - 1) + 1)


# =============================================================================
# TRAINING
# =============================================================================


def quantum_train(
    classifiers: Sequence[WeakClassifier],
    sample: LabeledSample,
    epsilon: float,
    seed: int = 0,
    clamp_width: float = DEFAULT_CLAMP_WIDTH,
    guard_bits: int = DEFAULT_GUARD_BITS,
    mode: str = "exact",
    memory_cap: int = DEFAULT_MEMORY_CAP,
) -> Tuple[BoostModel, EstimationReport]:
    """
    Quantum AdaBoost by amplitude estimation, simulated on statevectors.

    Args:
        classifiers: The T basis classifiers
        sample: Training sample of size N
        epsilon: Target precision of each R̂_t
        seed: Seeds the phase draws in sampled mode

    Returns:
        Tuple of (BoostModel, EstimationReport)
    """
    if not classifiers:
        raise InvalidModelError("at least one classifier is required")

    n = sample.size
    oracles = [QuantumQueryOracle.from_classifier(c, sample) for c in classifiers]
    q = np.column_stack([o.error_probs for o in oracles])

    report = EstimationReport(epsilon=epsilon, estimation_mode=mode, seed=seed)
    alphas: List[float] = []
    r_hats: List[float] = []
    c_hats: List[float] = []
    cumulative = 0

    for t in range(1, len(classifiers) + 1):
        started = time.perf_counter()
        table = WeightFunctionTable.build(r_hats, q[:, :t])
        c_hat = table.c_hat
        m = phase_bits_for(c_hat, epsilon, guard_bits)
        RegisterLayout(n, t, m).check_capacity(memory_cap)

        counter = QueryCounter()
        operator = IterationOperator(oracles[:t], table, c_hat, counter)
        init = prepare_initial(sample, RegisterLayout(n, t), memory_cap)
        prepared = operator.prepare(init)
        ancilla_probability = ancilla_one_probability(prepared)

        rng = np.random.default_rng([seed & 0xFFFFFFFF, t]) if mode == "sampled" else None
        estimate = phase_estimate_theta(GroverIterate(operator, init), prepared, m, mode, rng, memory_cap)

        r_raw = c_hat * math.cos(estimate.theta_hat) ** 2
        r_hat = clamp_error(r_raw, clamp_width)
        clamped = r_hat != r_raw
        if clamped:
            logger.warning(f"quantum t={t}: R̂ {r_raw:.6g} clamped to {r_hat:.6g}")
        alpha = alpha_from_error(r_hat)
        cumulative += counter.count

        alphas.append(alpha)
        r_hats.append(r_hat)
        c_hats.append(max(c_hat, c_hats[-1]) if c_hats else c_hat)
        report.append(QuantumIterationRecord(
            t=t,
            phase_bits=m,
            theta_hat=estimate.theta_hat,
            r_hat_raw=r_raw,
            r_hat=r_hat,
            alpha=alpha,
            c_hat=c_hat,
            c_hat_bound=table.c_hat_bound,
            ancilla_probability=ancilla_probability,
            query_count=counter.count,
            cumulative_queries=cumulative,
            clamped=clamped,
            wall_time=time.perf_counter() - started,
        ))
        logger.info(
            f"quantum t={t}: m={m} θ̂={estimate.theta_hat:.6f} R̂={r_hat:.6f} "
            f"α={alpha:.6f} ĉ={c_hat:.4f} queries={counter.count}"
        )

    model = BoostModel(tuple(classifiers), tuple(alphas), tuple(r_hats), tuple(c_hats))
    return model, report
