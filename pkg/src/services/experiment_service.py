"""
Experiment Service for classical vs. quantum AdaBoost runs.

Runs one experiment mode over a grid of (N, ε) cells and returns report
rows plus a JSON-ready summary:
- classical / quantum: one trainer per cell
- compare: both trainers on identical samples and classifiers
- hoeffding: violation rate of the classical estimate vs. the tail bound
- povm-demo: both trainers on Haar-random qubit states with noisy POVMs

Cells are independent and may run on a thread pool; rows are assembled
by a single writer (see export_service).
"""

import dataclasses
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from src.app.errors import BoostingError, EnumerationCapError, ResourceCapError, error_payload
from src.domain.models import (
    BoostModel,
    DatasetSpec,
    EstimationReport,
    ExperimentConfig,
    LabeledSample,
    TrainingTrace,
    WeakClassifier,
)
from src.ml.core import (
    error_matrix,
    exact_weighted_errors,
    clamp_error,
    hoeffding_bound,
    sample_size_for,
    support_max_weight,
    training_accuracy,
    training_cost_bound,
)
from src.ml.training import (
    HoeffdingTrialSpec,
    conventional_adaboost,
    hoeffding_violation_rate,
    train,
)
from src.quantum.estimation import quantum_train
from src.schemas.config_schema import AUTO
from src.seeders.dataset_seeder import generate_dataset
from src.seeders.quantum_seeder import QuantumStateSeeder
from src.services.export_service import export_service

logger = logging.getLogger(__name__)

# Failures that still leave a partial report behind
CAPPED_ERRORS = (ResourceCapError, EnumerationCapError)


@dataclass
class CellResult:
    """Rows and summary entry produced by one (N, ε) cell."""
    rows: List[Dict[str, Any]] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    error: Optional[BoostingError] = None


@dataclass
class ExperimentResult:
    mode: str
    seed: int
    rows: List[Dict[str, Any]]
    summary: Dict[str, Any]
    error: Optional[BoostingError] = None

    @property
    def exit_code(self) -> int:
        return self.error.exit_code if self.error is not None else 0


def _floats(values) -> List[float]:
    return [float(v) for v in values]


def _row(mode: str, row_type: str, n: int, t_total: int, eps: float, seed: int, **values) -> Dict[str, Any]:
    row = {
        'mode': mode,
        'row_type': row_type,
        'n_points': int(n),
        'n_classifiers': int(t_total),
        'epsilon': float(eps),
        'seed': int(seed),
        'status': 'ok',
    }
    row.update(values)
    return row


def _error_row(mode: str, n: int, t_total: int, eps: float, seed: int, exc: BoostingError) -> Dict[str, Any]:
    return _row(mode, 'error', n, t_total, eps, seed, status=exc.code)


class ExperimentService:
    """Service class running experiment modes over a cell grid."""

    # =========================================================================
    # GRID
    # =========================================================================

    @staticmethod
    def grid(config: ExperimentConfig) -> List[Tuple[int, float]]:
        """
        (N, ε) cells in config order.

        With n_points = auto each ε gets the Hoeffding sample size for
        c_hat_target and failure_prob.
        """
        if list(config.n_points) == [AUTO]:
            return [
                (sample_size_for(config.c_hat_target, eps, config.failure_prob), eps)
                for eps in config.epsilon
            ]
        return [(int(n), float(eps)) for n in config.n_points for eps in config.epsilon]

    @staticmethod
    def dataset_for(config: ExperimentConfig, n: int) -> Tuple[LabeledSample, List[WeakClassifier]]:
        spec = DatasetSpec(
            name=config.dataset,
            n_points=n,
            n_classifiers=config.n_classifiers,
            separation=config.separation,
            flip_noise=config.flip_noise,
        )
        return generate_dataset(spec, config.seed)

    # =========================================================================
    # TRAINER BLOCKS
    # =========================================================================

    @staticmethod
    def classical_block(
        config: ExperimentConfig, mode: str, n: int, eps: float,
        sample: LabeledSample, classifiers: List[WeakClassifier],
    ) -> Tuple[List[Dict[str, Any]], Dict[str, Any], BoostModel, TrainingTrace]:
        started = time.perf_counter()
        model, trace = train(classifiers, sample, config.seed, config.clamp_width)
        wall_time = time.perf_counter() - started

        t_total = len(classifiers)
        rows = [
            _row(
                mode, 'iteration', n, t_total, eps, config.seed,
                iteration=r.t, r_hat=r.r_hat, alpha=r.alpha, c_hat=r.c_hat,
                query_count=n, total_queries=r.query_count,
            )
            for r in trace.records
        ]
        rows.append(_row(
            mode, 'summary', n, t_total, eps, config.seed,
            c_hat=model.c_hats[-1], total_queries=trace.query_count,
        ))
        summary = {
            'alphas': _floats(model.alphas),
            'r_hats': _floats(model.r_hats),
            'c_hats': _floats(model.c_hats),
            'clamped': [r.clamped for r in trace.records],
            'total_queries': trace.query_count,
            'training_accuracy': training_accuracy(model, sample, config.seed),
            'training_cost_bound': training_cost_bound(model.r_hats),
            'wall_time': wall_time,
        }
        return rows, summary, model, trace

    @staticmethod
    def quantum_block(
        config: ExperimentConfig, mode: str, n: int, eps: float,
        sample: LabeledSample, classifiers: List[WeakClassifier],
    ) -> Tuple[List[Dict[str, Any]], Dict[str, Any], BoostModel, EstimationReport]:
        model, report = quantum_train(
            classifiers,
            sample,
            eps,
            seed=config.seed,
            clamp_width=config.clamp_width,
            guard_bits=config.guard_bits,
            mode=config.estimation,
            memory_cap=config.memory_cap,
        )
        t_total = len(classifiers)
        rows = [
            _row(
                mode, 'iteration', n, t_total, eps, config.seed,
                iteration=r.t, r_hat=r.r_hat, alpha=r.alpha, c_hat=r.c_hat,
                phase_bits=r.phase_bits, query_count=r.query_count,
                total_queries=r.cumulative_queries,
            )
            for r in report.records
        ]
        rows.append(_row(
            mode, 'summary', n, t_total, eps, config.seed,
            c_hat=model.c_hats[-1], total_queries=report.total_queries,
        ))
        summary = {
            'alphas': _floats(model.alphas),
            'r_hats': _floats(model.r_hats),
            'c_hats': _floats(model.c_hats),
            'phase_bits': [r.phase_bits for r in report.records],
            'theta_hats': _floats(r.theta_hat for r in report.records),
            'ancilla_probabilities': _floats(r.ancilla_probability for r in report.records),
            'clamped': [r.clamped for r in report.records],
            'estimation': report.estimation_mode,
            'total_queries': report.total_queries,
            'training_accuracy': training_accuracy(model, sample, config.seed),
            'training_cost_bound': training_cost_bound(model.r_hats),
            'wall_time': float(sum(r.wall_time for r in report.records)),
        }
        return rows, summary, model, report

    # =========================================================================
    # CELL RUNNERS
    # =========================================================================

    def classical_cell(self, config: ExperimentConfig, n: int, eps: float) -> CellResult:
        sample, classifiers = self.dataset_for(config, n)
        rows, summary, _, _ = self.classical_block(config, 'classical', n, eps, sample, classifiers)
        return CellResult(rows, {'n_points': n, 'epsilon': eps, 'classical': summary})

    def quantum_cell(self, config: ExperimentConfig, n: int, eps: float) -> CellResult:
        sample, classifiers = self.dataset_for(config, n)
        cell = CellResult(summary={'n_points': n, 'epsilon': eps})
        try:
            rows, summary, _, _ = self.quantum_block(config, 'quantum', n, eps, sample, classifiers)
        except CAPPED_ERRORS as e:
            logger.warning(f"quantum N={n} ε={eps}: {e.message}; writing partial report")
            cell.rows.append(_error_row('quantum', n, len(classifiers), eps, config.seed, e))
            cell.summary['quantum'] = error_payload(e)
            cell.error = e
            return cell
        cell.rows.extend(rows)
        cell.summary['quantum'] = summary
        return cell

    def compare_cell(self, config: ExperimentConfig, n: int, eps: float) -> CellResult:
        """
        Classical and quantum training on the same sample and classifiers.

        Deterministic classifier sets are also trained with textbook
        AdaBoost as a reference.
        """
        sample, classifiers = self.dataset_for(config, n)
        t_total = len(classifiers)
        rows, classical, _, _ = self.classical_block(config, 'classical', n, eps, sample, classifiers)
        cell = CellResult(rows, {'n_points': n, 'epsilon': eps, 'classical': classical})

        if all(c.is_deterministic(sample) for c in classifiers):
            reference = conventional_adaboost(classifiers, sample, config.clamp_width)
            cell.summary['conventional'] = {
                'alphas': _floats(reference.alphas),
                'errors': _floats(reference.errors),
            }
        else:
            cell.summary['conventional'] = None

        try:
            q_rows, quantum, _, _ = self.quantum_block(config, 'quantum', n, eps, sample, classifiers)
        except CAPPED_ERRORS as e:
            logger.warning(f"compare N={n} ε={eps}: {e.message}; writing partial report")
            cell.rows.append(_error_row('quantum', n, t_total, eps, config.seed, e))
            cell.summary['quantum'] = error_payload(e)
            cell.error = e
            return cell

        cell.rows.extend(q_rows)
        cell.summary['quantum'] = quantum
        alpha_diff = [abs(a - b) for a, b in zip(classical['alphas'], quantum['alphas'])]
        cell.summary['alpha_diff'] = alpha_diff
        cell.summary['max_alpha_diff'] = max(alpha_diff)
        cell.summary['r_hat_diff'] = [abs(a - b) for a, b in zip(classical['r_hats'], quantum['r_hats'])]
        logger.info(f"compare N={n} ε={eps}: max |α_c - α_q| = {max(alpha_diff):.3g}")
        return cell

    def hoeffding_cell(self, config: ExperimentConfig, n: int, eps: float) -> CellResult:
        """
        Observed P(|R̂_t - R~_t| >= ε) against 2 exp(-2 N ε² / ĉ²).

        The cell is within bound when the rate does not exceed the bound
        plus a 3 sigma binomial slack.
        """
        sample, classifiers = self.dataset_for(config, n)
        t = config.hoeffding_iteration
        t_total = len(classifiers)
        try:
            spec = HoeffdingTrialSpec(
                classifiers=tuple(classifiers),
                sample=sample,
                iteration=t,
                epsilon=eps,
                trials=config.trials,
                seed=config.seed,
                clamp_width=config.clamp_width,
                enumeration_cap=config.enumeration_cap,
            )
            rate = hoeffding_violation_rate(spec)
            r_tildes = exact_weighted_errors(classifiers[:t], sample, config.clamp_width, config.enumeration_cap)
            clamped = [clamp_error(r, config.clamp_width) for r in r_tildes[:-1]]
            q = error_matrix(classifiers[:t], sample)
            c_hat = support_max_weight(q, clamped, config.enumeration_cap)
        except CAPPED_ERRORS as e:
            logger.warning(f"hoeffding N={n} ε={eps}: {e.message}")
            return CellResult(
                [_error_row('hoeffding', n, t_total, eps, config.seed, e)],
                {'n_points': n, 'epsilon': eps, 'error': error_payload(e)},
                e,
            )

        bound = hoeffding_bound(n, eps, c_hat)
        slack = 3.0 * math.sqrt(bound / config.trials)
        within = rate <= bound + slack
        if not within:
            logger.warning(f"hoeffding N={n} ε={eps}: rate {rate:.4f} exceeds bound {bound:.4f} + {slack:.4f}")
        row = _row(
            'hoeffding', 'cell', n, t_total, eps, config.seed,
            iteration=t, r_hat=r_tildes[-1], c_hat=c_hat, observed_rate=rate, bound=bound,
            trials=config.trials, status='ok' if within else 'exceeded',
        )
        summary = {
            'n_points': n,
            'epsilon': eps,
            'iteration': t,
            'r_tilde': r_tildes[-1],
            'c_hat': c_hat,
            'observed_rate': rate,
            'bound': bound,
            'slack': slack,
            'within_bound': within,
        }
        return CellResult([row], summary)

    def povm_cell(self, config: ExperimentConfig, n: int, eps: float) -> CellResult:
        """Both trainers on Haar-random states measured by noisy projective POVMs."""
        spec = DatasetSpec('povm', n, config.n_classifiers, flip_noise=config.flip_noise)
        sample, classifiers = QuantumStateSeeder(spec, config.seed, config.povm_dimension).run()
        rows, classical, _, _ = self.classical_block(config, 'povm-classical', n, eps, sample, classifiers)
        cell = CellResult(rows, {
            'n_points': n,
            'epsilon': eps,
            'dimension': config.povm_dimension,
            'classical': classical,
        })
        try:
            q_rows, quantum, _, _ = self.quantum_block(config, 'povm-quantum', n, eps, sample, classifiers)
        except CAPPED_ERRORS as e:
            cell.rows.append(_error_row('povm-quantum', n, len(classifiers), eps, config.seed, e))
            cell.summary['quantum'] = error_payload(e)
            cell.error = e
            return cell
        cell.rows.extend(q_rows)
        cell.summary['quantum'] = quantum
        cell.summary['alpha_diff'] = [abs(a - b) for a, b in zip(classical['alphas'], quantum['alphas'])]
        return cell

    # =========================================================================
    # ORCHESTRATION
    # =========================================================================

    def run(self, config: ExperimentConfig, mode: Optional[str] = None) -> ExperimentResult:
        """
        Run an experiment mode over every cell of the config grid.

        Args:
            config: Validated experiment config
            mode: Overrides config.mode when given (CLI subcommands)

        Returns:
            ExperimentResult: Rows, summary and the first capped error, if any
        """
        if mode is not None and mode != config.mode:
            config = dataclasses.replace(config, mode=mode)
        runners = {
            'classical': self.classical_cell,
            'quantum': self.quantum_cell,
            'compare': self.compare_cell,
            'hoeffding': self.hoeffding_cell,
            'povm-demo': self.povm_cell,
        }
        runner = runners[config.mode]
        cells = self.grid(config)
        logger.info(f"running {config.mode} over {len(cells)} cells with {config.workers} workers")

        started = time.perf_counter()
        if config.workers > 1 and len(cells) > 1:
            with ThreadPoolExecutor(max_workers=config.workers) as executor:
                results = list(executor.map(lambda cell: runner(config, *cell), cells))
        else:
            results = [runner(config, n, eps) for n, eps in cells]
        wall_time = time.perf_counter() - started

        rows = [row for result in results for row in result.rows]
        errors = [result.error for result in results if result.error is not None]
        summary = {
            'mode': config.mode,
            'seed': config.seed,
            'cells': [result.summary for result in results],
            'errors': [error_payload(e) for e in errors],
            'wall_time': wall_time,
        }
        if config.mode == 'compare':
            diffs = [c['max_alpha_diff'] for c in summary['cells'] if 'max_alpha_diff' in c]
            summary['max_alpha_diff'] = max(diffs) if diffs else None
        if config.mode == 'hoeffding':
            summary['all_within_bound'] = all(c.get('within_bound', False) for c in summary['cells'])
        return ExperimentResult(config.mode, config.seed, rows, summary, errors[0] if errors else None)

    def run_and_export(
        self, config: ExperimentConfig, mode: Optional[str] = None
    ) -> Tuple[ExperimentResult, Dict[str, str]]:
        """
        Run a mode and write its report directory (config.output).

        Capped errors still produce the partial report; the result keeps
        the error so callers can pick the exit code.
        """
        export_service.prepare_output(config.output)
        result = self.run(config, mode)
        paths = export_service.write_report(config.output, result.rows, result.summary, config)
        return result, paths

    def run_compare(self, config: ExperimentConfig) -> Tuple[ExperimentResult, Dict[str, str]]:
        return self.run_and_export(config, 'compare')

    def run_hoeffding(self, config: ExperimentConfig) -> Tuple[ExperimentResult, Dict[str, str]]:
        return self.run_and_export(config, 'hoeffding')


experiment_service = ExperimentService()
