"""
Classical probabilistic AdaBoost trainer (Monte Carlo branch sampling).

Each point is queried once per classifier. The realized error bit selects
one branch per point, the weighted error R̂_t is the sample average of
W^x r^x_t, and the weights are updated adaptively from R̂_t.

Randomness is counter-based: the uniform draw for (seed, point, iteration)
is fixed regardless of the order points are processed in.

Also provides the textbook AdaBoost reference trainer for deterministic
classifiers and the Hoeffding violation-rate experiment.
"""

import logging
from dataclasses import dataclass
from typing import List, Mapping, Sequence, Tuple, Union

import numpy as np

from src.app.errors import DomainError, InvalidModelError
from src.domain.models import (
    BoostModel,
    BranchTable,
    IterationRecord,
    LabeledPoint,
    LabeledSample,
    TrainingTrace,
    WeakClassifier,
)
from src.ml.core import (
    DEFAULT_CLAMP_WIDTH,
    DEFAULT_ENUMERATION_CAP,
    alpha_from_error,
    branch_weights,
    clamp_error,
    error_matrix,
    exact_weighted_errors,
    update_weights,
    weight_bound,
)

logger = logging.getLogger(__name__)

_SEED_MASK = (1 << 64) - 1
MIN_HOEFFDING_TRIALS = 1000


# =============================================================================
# BRANCH SAMPLING
# =============================================================================


def branch_uniforms(seed: int, iteration: int, n_points: int, stream: int = 0) -> np.ndarray:
    """
    Counter-based uniforms u(seed, i, t) for every point index i.

    A Philox generator keyed by the run seed, with the iteration and the
    stream (trial index) in the high counter words, so element i depends
    only on (seed, stream, iteration, i).
    """
    counter = np.array([0, 0, stream, iteration], dtype=np.uint64)
    bit_generator = np.random.Philox(key=seed & _SEED_MASK, counter=counter)
    return np.random.Generator(bit_generator).random(n_points)


def sample_branch_bit(classifier: WeakClassifier, x: LabeledPoint, uniform: float) -> int:
    """
    Realize the error bit r^x_t of one query.

    Args:
        classifier: The queried classifier H_t
        x: The queried point
        uniform: Counter-derived draw u(seed, i, t) in [0, 1)

    Returns:
        int: 1 with probability error_prob(x), else 0
    """
    q = classifier.error_prob(x)
    if q <= 0.0:
        return 0
    if q >= 1.0:
        return 1
    return int(uniform < q)


def estimate_rhat(
    table: BranchTable,
    bits: Union[Mapping[int, int], Sequence[int], np.ndarray],
    sample: LabeledSample,
) -> float:
    """
    R̂_t = (1/N) sum_x r^x_t W^x, using the weights entering iteration t.

    Args:
        table: Branch table holding the weights accumulated through t - 1
        bits: Error bit per point index
        sample: The training sample
    """
    n = sample.size
    if len(table) != n:
        raise DomainError(f"branch table covers {len(table)} points, sample has {n}")
    if isinstance(bits, Mapping):
        missing = set(range(n)) - set(bits)
        if missing:
            raise DomainError(f"no error bit for points {sorted(missing)}")
        bits = [bits[i] for i in range(n)]
    bits = np.asarray(bits, dtype=np.float64)
    if bits.shape != (n,):
        raise DomainError("one error bit per sample point is required")
    return float(np.dot(bits, table.weights) / n)


def extend_table(table: BranchTable, bits: np.ndarray, r_hat: float) -> BranchTable:
    """Append this iteration's bits to every branch and apply the weight update."""
    branches = tuple(b.append(bit) for b, bit in zip(table.branches, bits))
    return BranchTable(branches, update_weights(table.weights, bits, r_hat))


# =============================================================================
# TRAINING
# =============================================================================


def train(
    classifiers: Sequence[WeakClassifier],
    sample: LabeledSample,
    seed: int,
    clamp_width: float = DEFAULT_CLAMP_WIDTH,
) -> Tuple[BoostModel, TrainingTrace]:
    """
    Run classical probabilistic AdaBoost.

    Args:
        classifiers: The T basis classifiers, in boosting order
        sample: Training sample of size N
        seed: Run seed keying the branch draws

    Returns:
        Tuple of (BoostModel, TrainingTrace)
    """
    if not classifiers:
        raise InvalidModelError("at least one classifier is required")

    n = sample.size
    table = BranchTable.initial(n)
    trace = TrainingTrace(rng_seed=seed)
    alphas: List[float] = []
    r_hats: List[float] = []
    c_hats: List[float] = []
    c_hat = 0.0
    queries = 0

    for t, classifier in enumerate(classifiers, start=1):
        uniforms = branch_uniforms(seed, t, n)
        bits = np.array(
            [sample_branch_bit(classifier, x, uniforms[i]) for i, x in enumerate(sample.points)],
            dtype=np.int8,
        )
        queries += n

        r_raw = estimate_rhat(table, bits, sample)
        r_hat = clamp_error(r_raw, clamp_width)
        clamped = r_hat != r_raw
        if clamped:
            logger.warning(f"t={t}: R̂ {r_raw:.6g} clamped to {r_hat:.6g}")

        c_hat = max(c_hat, table.max_weight())
        c_hat_bound = weight_bound(r_hats)
        table = extend_table(table, bits, r_hat)
        alpha = alpha_from_error(r_hat)

        alphas.append(alpha)
        r_hats.append(r_hat)
        c_hats.append(c_hat)
        trace.append(IterationRecord(
            t=t,
            r_hat_raw=r_raw,
            r_hat=r_hat,
            alpha=alpha,
            c_hat=c_hat,
            c_hat_bound=c_hat_bound,
            query_count=queries,
            clamped=clamped,
        ))
        logger.info(f"classical t={t}: R̂={r_hat:.6f} α={alpha:.6f} ĉ={c_hat:.4f} queries={queries}")

    model = BoostModel(tuple(classifiers), tuple(alphas), tuple(r_hats), tuple(c_hats))
    return model, trace


@dataclass(frozen=True)
class ConventionalResult:
    errors: Tuple[float, ...]
    alphas: Tuple[float, ...]


def conventional_adaboost(
    classifiers: Sequence[WeakClassifier],
    sample: LabeledSample,
    clamp_width: float = DEFAULT_CLAMP_WIDTH,
) -> ConventionalResult:
    """
    Textbook AdaBoost over fixed deterministic classifiers.

    Keeps a normalized distribution D over the sample, reweights with
    exp(-alpha y h(x)) and renormalizes. Serves as the reference the
    probabilistic trainer must reproduce.
    """
    n = sample.size
    wrong = error_matrix(classifiers, sample)
    if np.any((wrong != 0.0) & (wrong != 1.0)):
        raise DomainError("conventional AdaBoost requires deterministic classifiers")
    distribution = np.full(n, 1.0 / n)
    errors: List[float] = []
    alphas: List[float] = []
    for t in range(wrong.shape[1]):
        error = clamp_error(float(np.dot(distribution, wrong[:, t])), clamp_width)
        alpha = alpha_from_error(error)
        margins = np.where(wrong[:, t] == 1.0, -1.0, 1.0)
        distribution = distribution * np.exp(-alpha * margins)
        distribution /= distribution.sum()
        errors.append(error)
        alphas.append(alpha)
    return ConventionalResult(tuple(errors), tuple(alphas))


# =============================================================================
# HOEFFDING EXPERIMENT
# =============================================================================


@dataclass(frozen=True)
class HoeffdingTrialSpec:
    """Population, sample and precision of one Hoeffding violation experiment."""
    classifiers: Tuple[WeakClassifier, ...]
    sample: LabeledSample
    iteration: int
    epsilon: float
    trials: int = MIN_HOEFFDING_TRIALS
    seed: int = 0
    clamp_width: float = DEFAULT_CLAMP_WIDTH
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP


def hoeffding_violation_rate(spec: HoeffdingTrialSpec) -> float:
    """
    Fraction of independent estimates with |R̂_t - R~_t| >= epsilon.

    R~_t is enumerated exactly over all branches. Each trial redraws every
    branch bit from its own counter stream and averages W^x r^x_t with the
    weights fixed by the exact R~_1 ... R~_{t-1}, the bounded-average
    setting the inequality speaks about.
    """
    t = spec.iteration
    if t < 1 or t > len(spec.classifiers):
        raise DomainError(f"iteration must lie in [1, {len(spec.classifiers)}], got {t}")
    if spec.trials < MIN_HOEFFDING_TRIALS:
        raise DomainError(f"at least {MIN_HOEFFDING_TRIALS} trials are required, got {spec.trials}")

    classifiers = spec.classifiers[:t]
    r_tildes = exact_weighted_errors(classifiers, spec.sample, spec.clamp_width, spec.enumeration_cap)
    r_tilde = r_tildes[-1]
    clamped = [clamp_error(r, spec.clamp_width) for r in r_tildes[:-1]]

    q = error_matrix(classifiers, spec.sample)
    n = spec.sample.size
    violations = 0
    for trial in range(spec.trials):
        bits = np.column_stack([
            branch_uniforms(spec.seed, k + 1, n, stream=trial) < q[:, k] for k in range(t)
        ]).astype(np.int8)
        weights = branch_weights(clamped, bits[:, :t - 1])
        r_hat = float(np.dot(weights, bits[:, t - 1]) / n)
        if abs(r_hat - r_tilde) >= spec.epsilon:
            violations += 1

    rate = violations / spec.trials
    logger.info(f"hoeffding N={n} ε={spec.epsilon} t={t}: {violations}/{spec.trials} violations")
    return rate
