"""
Closed-form boosting mathematics shared by the classical and quantum trainers.

Covers the strong classifier, the exponential cost over all branches,
the optimal coefficient for a weighted error, the adaptive weight update,
exact branch enumeration on the empirical distribution, and Hoeffding
sample sizing.

All inputs are treated as immutable; every function here is pure.
"""

import math
import logging
from typing import List, Optional, Sequence

import numpy as np

from src.app.config import Config
from src.app.errors import DomainError, EnumerationCapError, InvalidModelError
from src.domain.models import BoostModel, LabeledPoint, LabeledSample, WeakClassifier

logger = logging.getLogger(__name__)

# =============================================================================
# CONFIGURATION
# =============================================================================

DEFAULT_CLAMP_WIDTH = Config.CLAMP_WIDTH
DEFAULT_ENUMERATION_CAP = Config.BRANCH_ENUMERATION_CAP


# =============================================================================
# COEFFICIENTS AND WEIGHTS
# =============================================================================


def clamp_error(r: float, width: float = DEFAULT_CLAMP_WIDTH) -> float:
    """Clamp a weighted error estimate into [width, 1 - width]."""
    if not 0.0 < width < 0.5:
        raise DomainError(f"clamp width must lie in (0, 0.5), got {width}")
    return float(min(max(r, width), 1.0 - width))


def alpha_from_error(r: float) -> float:
    """
    Optimal coefficient alpha = 1/2 ln((1 - r) / r) for weighted error r.

    Args:
        r: Weighted error strictly inside (0, 1); callers clamp first

    Returns:
        float: The coefficient alpha_t

    Raises:
        DomainError: If r is not strictly inside (0, 1)
    """
    if not 0.0 < r < 1.0:
        raise DomainError(f"weighted error must lie strictly inside (0, 1), got {r}")
    return 0.5 * math.log((1.0 - r) / r)


def update_weight(w: float, bit: int, r_hat: float) -> float:
    """Adaptive update: divide by 2 r_hat on an error bit, by 2 (1 - r_hat) otherwise."""
    if bit == 1:
        return w / (2.0 * r_hat)
    return w / (2.0 * (1.0 - r_hat))


def update_weights(weights: np.ndarray, bits: np.ndarray, r_hat: float) -> np.ndarray:
    """Vectorized update_weight over aligned weight and bit arrays."""
    bits = np.asarray(bits)
    return np.where(bits == 1, weights / (2.0 * r_hat), weights / (2.0 * (1.0 - r_hat)))


def branch_weights(r_hats: Sequence[float], bits: np.ndarray) -> np.ndarray:
    """
    Weights W_{s_k} for a batch of branch strings.

    Args:
        r_hats: Clamped estimates R_1 ... R_k applied in order
        bits: Integer array of shape (B, k), column i holding s_{i+1}

    Returns:
        np.ndarray: Shape (B,) weights starting from W_{s_0} = 1
    """
    bits = np.asarray(bits)
    if bits.ndim == 1:
        bits = bits[:, None]
    weights = np.ones(bits.shape[0], dtype=np.float64)
    for i, r in enumerate(r_hats):
        weights = update_weights(weights, bits[:, i], r)
    return weights


def weight_bound(r_hats: Sequence[float]) -> float:
    """Analytic maximum weight: product of max(1/(2R), 1/(2(1-R)))."""
    bound = 1.0
    for r in r_hats:
        bound *= max(1.0 / (2.0 * r), 1.0 / (2.0 * (1.0 - r)))
    return bound


def training_cost_bound(r_hats: Sequence[float]) -> float:
    """Exponential cost reached by optimal coefficients: product of 2 sqrt(R (1 - R))."""
    return float(np.prod([2.0 * math.sqrt(r * (1.0 - r)) for r in r_hats]))


# =============================================================================
# STRONG CLASSIFIER
# =============================================================================


def strong_classify(
    model: BoostModel, x: LabeledPoint, rng: Optional[np.random.Generator] = None
) -> int:
    """
    Evaluate sgn(sum_t alpha_t H_t(x)), with sgn(0) = +1.

    Probabilistic classifiers realize H_t(x) by one independent draw each
    from `rng`.
    """
    if model.size == 0:
        raise InvalidModelError("cannot classify with an empty model")
    score = 0.0
    for classifier, alpha in zip(model.classifiers, model.alphas):
        score += alpha * classifier.predict(x, rng)
    return 1 if score >= 0.0 else -1


def training_accuracy(model: BoostModel, sample: LabeledSample, seed: int = 0) -> float:
    """Fraction of sample points the strong classifier labels correctly."""
    rng = np.random.default_rng(seed)
    hits = sum(strong_classify(model, p, rng) == p.label for p in sample.points)
    return hits / sample.size


# =============================================================================
# BRANCH ENUMERATION
# =============================================================================


def check_enumeration_cap(t: int, cap: int) -> None:
    if t > cap:
        raise EnumerationCapError(
            f"exact enumeration of 2^{t} branches exceeds the cap of 2^{cap}", t=t, cap=cap
        )


def enumerate_branches(t: int) -> np.ndarray:
    """All 2^t branch strings as an (2^t, t) bit matrix, row index = register index."""
    indices = np.arange(2 ** t)
    shifts = np.arange(t - 1, -1, -1)
    return ((indices[:, None] >> shifts[None, :]) & 1).astype(np.int8)


def error_matrix(classifiers: Sequence[WeakClassifier], sample: LabeledSample) -> np.ndarray:
    """Shape (N, T) matrix of q_t(1 | x) for every point and classifier."""
    if not classifiers:
        return np.zeros((sample.size, 0))
    return np.column_stack([c.error_probs(sample) for c in classifiers])


def branch_probabilities(q: np.ndarray) -> np.ndarray:
    """
    Conditional branch probabilities q(s_t | x) = prod_i q_i(s_i | x).

    Args:
        q: Shape (N, t) error probabilities

    Returns:
        np.ndarray: Shape (N, 2^t), columns ordered by register index
    """
    t = q.shape[1]
    bits = enumerate_branches(t)
    probs = np.ones((q.shape[0], bits.shape[0]), dtype=np.float64)
    for i in range(t):
        probs *= np.where(bits[None, :, i] == 1, q[:, i:i + 1], 1.0 - q[:, i:i + 1])
    return probs


def exact_weighted_errors(
    classifiers: Sequence[WeakClassifier],
    sample: LabeledSample,
    clamp_width: float = DEFAULT_CLAMP_WIDTH,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> List[float]:
    """
    Branch-enumerated weighted errors R~_1 ... R~_T under p(x) = 1/N.

    Weights for iteration t come from the clamped R~_1 ... R~_{t-1}, the
    same way both trainers build them.

    Returns:
        list: Raw (unclamped) R~_t values
    """
    check_enumeration_cap(len(classifiers), cap)
    q = error_matrix(classifiers, sample)
    r_tildes: List[float] = []
    clamped: List[float] = []
    for t in range(1, len(classifiers) + 1):
        bits = enumerate_branches(t)
        probs = branch_probabilities(q[:, :t])
        weights = branch_weights(clamped, bits[:, :t - 1])
        r = float(np.mean(probs @ (weights * bits[:, t - 1])))
        r_tildes.append(r)
        clamped.append(clamp_error(r, clamp_width))
    return r_tildes


def support_max_weight(
    q: np.ndarray, r_hats: Sequence[float], cap: int = DEFAULT_ENUMERATION_CAP
) -> float:
    """
    Exact maximum of W^x_{s_t} over branch strings with nonzero probability.

    Args:
        q: Shape (N, t) error probabilities of the first t classifiers
        r_hats: The t - 1 clamped estimates the weights are built from
    """
    t = q.shape[1]
    check_enumeration_cap(t, cap)
    bits = enumerate_branches(t)
    weights = branch_weights(r_hats, bits[:, :t - 1])
    support = branch_probabilities(q) > 0.0
    return float(np.max(np.where(support, weights[None, :], 0.0)))


def exponential_cost(
    model: BoostModel, sample: LabeledSample, cap: int = DEFAULT_ENUMERATION_CAP
) -> float:
    """
    Exponential cost C_T summed exactly over all 2^T branches.

    C_T = sum_x 1/N sum_{s_T} prod_i q_i(s_i|x) prod_t exp(-alpha_t (-1)^{s_t})

    Raises:
        EnumerationCapError: If T exceeds the enumeration cap
    """
    if model.size == 0:
        raise InvalidModelError("cannot evaluate the cost of an empty model")
    check_enumeration_cap(model.size, cap)
    q = error_matrix(model.classifiers, sample)
    bits = enumerate_branches(model.size)
    alphas = np.asarray(model.alphas, dtype=np.float64)
    signs = np.where(bits == 1, -1.0, 1.0)
    branch_cost = np.exp(-(signs * alphas[None, :]).sum(axis=1))
    return float(np.mean(branch_probabilities(q) @ branch_cost))


# =============================================================================
# SAMPLE SIZING
# =============================================================================


def sample_size_for(c_hat: float, epsilon: float, failure_prob: float) -> int:
    """
    Smallest N with 2 exp(-2 N eps^2 / c^2) <= failure_prob.

    Args:
        c_hat: Maximum adaptive weight (range of the averaged quantity)
        epsilon: Target precision
        failure_prob: Allowed probability of missing the precision

    Returns:
        int: N = ceil(c^2 ln(2 / failure_prob) / (2 eps^2)), at least 1
    """
    if c_hat <= 0.0 or epsilon <= 0.0 or not 0.0 < failure_prob < 1.0:
        raise DomainError("sample_size_for needs c_hat > 0, epsilon > 0 and failure_prob in (0, 1)")
    n = math.ceil(c_hat ** 2 * math.log(2.0 / failure_prob) / (2.0 * epsilon ** 2))
    return max(1, int(n))


def hoeffding_bound(n_points: int, epsilon: float, c_hat: float) -> float:
    """Two-sided Hoeffding tail 2 exp(-2 N eps^2 / c^2), capped at 1."""
    return min(1.0, 2.0 * math.exp(-2.0 * n_points * epsilon ** 2 / c_hat ** 2))
