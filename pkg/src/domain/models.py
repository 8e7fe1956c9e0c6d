from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from src.app.errors import DomainError, InvalidModelError


# --- Sample Domain ---
@dataclass(frozen=True, eq=False)
class LabeledPoint:
    """A data point x with its target label y(x) in {-1, +1}.

    `state` is only set for quantum data, where it holds the density
    matrix rho_x that POVM classifiers measure.
    """
    features: np.ndarray
    label: int
    state: Optional[Any] = None

    def __post_init__(self):
        if self.label not in (-1, 1):
            raise DomainError(f"label must be -1 or +1, got {self.label!r}")
        features = np.asarray(self.features, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "features", features)


@dataclass(frozen=True, eq=False)
class LabeledSample:
    """Ordered training sample S; the list index is the identity of x_i."""
    points: Tuple[LabeledPoint, ...]

    def __post_init__(self):
        points = tuple(self.points)
        if not points:
            raise DomainError("sample must contain at least one point")
        width = points[0].features.shape[0]
        if any(p.features.shape[0] != width for p in points):
            raise DomainError("feature vector length must be fixed within a sample")
        object.__setattr__(self, "points", points)

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def labels(self) -> np.ndarray:
        return np.array([p.label for p in self.points], dtype=np.int64)

    @property
    def features(self) -> np.ndarray:
        return np.vstack([p.features for p in self.points])

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, index: int) -> LabeledPoint:
        return self.points[index]


# --- Classifier Domain ---
class WeakClassifier(ABC):
    """
    A basis classifier H_t characterized by its error probability.

    error_prob(x) returns q_t(r^x_t = 1 | x), the probability that the
    label H_t produces for x disagrees with y(x). Deterministic
    classifiers only ever return 0.0 or 1.0.
    """

    name = "classifier"

    @abstractmethod
    def error_prob(self, point: LabeledPoint) -> float:
        pass

    def error_probs(self, sample: LabeledSample) -> np.ndarray:
        """Error probabilities for every point of the sample, validated into [0, 1]."""
        probs = np.array([self.error_prob(p) for p in sample.points], dtype=np.float64)
        if np.any(~np.isfinite(probs)) or np.any(probs < 0.0) or np.any(probs > 1.0):
            raise DomainError(f"{self.name}: error probabilities must lie in [0, 1]")
        return probs

    def is_deterministic(self, sample: LabeledSample) -> bool:
        probs = self.error_probs(sample)
        return bool(np.all((probs == 0.0) | (probs == 1.0)))

    def predict(self, point: LabeledPoint, rng: Optional[np.random.Generator] = None) -> int:
        """
        Realize the label H_t(x).

        Probabilistic classifiers draw from q_t using `rng`; deterministic
        ones never touch it.
        """
        q = self.error_prob(point)
        if q <= 0.0:
            wrong = False
        elif q >= 1.0:
            wrong = True
        else:
            if rng is None:
                raise DomainError(f"{self.name}: a generator is required to realize a probabilistic label")
            wrong = bool(rng.random() < q)
        return -point.label if wrong else point.label


@dataclass(frozen=True)
class BranchString:
    """The bits s_1 ... s_t of one branch; s_i = 1 marks an error of H_i."""
    bits: Tuple[int, ...] = ()

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise DomainError(f"branch bits must be 0 or 1, got {bits}")
        object.__setattr__(self, "bits", bits)

    @property
    def length(self) -> int:
        return len(self.bits)

    def append(self, bit: int) -> "BranchString":
        return BranchString(self.bits + (int(bit),))

    def to_index(self) -> int:
        """Register index with s_1 as the most significant bit."""
        index = 0
        for bit in self.bits:
            index = (index << 1) | bit
        return index

    @classmethod
    def from_index(cls, index: int, length: int) -> "BranchString":
        return cls(tuple((index >> (length - 1 - i)) & 1 for i in range(length)))


# --- Model Domain ---
@dataclass(frozen=True)
class BoostModel:
    """Trained ensemble: classifiers with coefficients and per-iteration telemetry."""
    classifiers: Tuple[WeakClassifier, ...]
    alphas: Tuple[float, ...]
    r_hats: Tuple[float, ...]
    c_hats: Tuple[float, ...]

    def __post_init__(self):
        for name in ("classifiers", "alphas", "r_hats", "c_hats"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        lengths = {len(self.classifiers), len(self.alphas), len(self.r_hats), len(self.c_hats)}
        if len(lengths) != 1:
            raise InvalidModelError("classifiers, alphas, r_hats and c_hats must have equal length")
        if any(not 0.0 < r < 1.0 for r in self.r_hats):
            raise InvalidModelError("every r_hat must lie strictly inside (0, 1)")
        if any(b < a for a, b in zip(self.c_hats, self.c_hats[1:])):
            raise InvalidModelError("c_hats must be non-decreasing")

    @property
    def size(self) -> int:
        return len(self.classifiers)


# --- Classical Training Domain ---
@dataclass(frozen=True)
class IterationRecord:
    t: int
    r_hat_raw: float
    r_hat: float
    alpha: float
    c_hat: float
    c_hat_bound: float
    query_count: int
    clamped: bool


@dataclass
class TrainingTrace:
    """Append-only loop state of one classical training run."""
    rng_seed: int
    records: List[IterationRecord] = field(default_factory=list)

    def append(self, record: IterationRecord) -> None:
        if self.records and record.t != self.records[-1].t + 1:
            raise InvalidModelError("trace records must be appended in iteration order")
        self.records.append(record)

    @property
    def query_count(self) -> int:
        return self.records[-1].query_count if self.records else 0

    @property
    def alphas(self) -> List[float]:
        return [r.alpha for r in self.records]

    @property
    def r_hats(self) -> List[float]:
        return [r.r_hat for r in self.records]


@dataclass(frozen=True)
class BranchTable:
    """Per-point realized branch string and current weight W^x_{s_t}."""
    branches: Tuple[BranchString, ...]
    weights: np.ndarray

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=np.float64)
        if weights.shape != (len(self.branches),):
            raise DomainError("one weight per branch string is required")
        if np.any(weights <= 0.0):
            raise DomainError("branch weights must be positive")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def initial(cls, n_points: int) -> "BranchTable":
        return cls(tuple(BranchString() for _ in range(n_points)), np.ones(n_points))

    def max_weight(self) -> float:
        return float(self.weights.max())

    def __getitem__(self, index: int) -> Tuple[BranchString, float]:
        return self.branches[index], float(self.weights[index])

    def __len__(self) -> int:
        return len(self.branches)


# --- Quantum Training Domain ---
@dataclass(frozen=True)
class QuantumIterationRecord:
    t: int
    phase_bits: int
    theta_hat: float
    r_hat_raw: float
    r_hat: float
    alpha: float
    c_hat: float
    c_hat_bound: float
    ancilla_probability: float
    query_count: int
    cumulative_queries: int
    clamped: bool
    wall_time: float


@dataclass
class EstimationReport:
    """Per-iteration phase-estimation telemetry of one quantum training run."""
    epsilon: float
    estimation_mode: str
    seed: int
    records: List[QuantumIterationRecord] = field(default_factory=list)

    def append(self, record: QuantumIterationRecord) -> None:
        self.records.append(record)

    @property
    def total_queries(self) -> int:
        return self.records[-1].cumulative_queries if self.records else 0

    @property
    def alphas(self) -> List[float]:
        return [r.alpha for r in self.records]


# --- Experiment Domain ---
@dataclass(frozen=True)
class DatasetSpec:
    name: str
    n_points: int
    n_classifiers: int
    separation: float = 3.0
    flip_noise: float = 0.0


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str
    n_points: Sequence[Any]
    n_classifiers: int
    epsilon: Sequence[float]
    failure_prob: float = 0.05
    seed: int = 0
    dataset: str = "blobs"
    separation: float = 3.0
    flip_noise: float = 0.0
    c_hat_target: float = 1.0
    memory_cap: int = 2 ** 26
    output: str = "reports"
    trials: int = 1000
    hoeffding_iteration: int = 1
    guard_bits: int = 2
    estimation: str = "exact"
    workers: int = 1
    clamp_width: float = 1e-6
    enumeration_cap: int = 20
    povm_dimension: int = 2
