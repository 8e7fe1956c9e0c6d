"""
Export service for experiment reports.

Writes the `--out` directory:
- report.csv: one row per (run, iteration) plus summary rows, fixed header
- summary.json: α vectors, differences, wall times and error markers
- resolved-config.txt: the config actually run, as sorted key = value lines
"""

import json
import logging
import os
from typing import Any, Dict, List

import pandas as pd

from src.app.errors import ConfigError, InvariantViolationError
from src.domain.models import ExperimentConfig
from src.schemas.report_schema import INTEGER_COLUMNS, REPORT_COLUMNS, report_row_schema
from src.services.config_service import config_service

logger = logging.getLogger(__name__)

REPORT_FILE = 'report.csv'
SUMMARY_FILE = 'summary.json'
RESOLVED_CONFIG_FILE = 'resolved-config.txt'
SORT_COLUMNS = ['mode', 'n_points', 'epsilon', 'iteration']


class ExportService:
    """Service class for report export operations."""

    def report_frame(self, rows: List[Dict[str, Any]]) -> pd.DataFrame:
        """
        Validate rows and arrange them in the fixed column order.

        Rows are sorted by (mode, N, ε, iteration) with summary and error
        rows (no iteration) after the iterations of their run.

        Raises:
            InvariantViolationError: If a row fails the report schema
        """
        for row in rows:
            errors = report_row_schema.validate(row)
            if errors:
                raise InvariantViolationError(f"malformed report row: {errors}", row=row)

        df = pd.DataFrame(rows, columns=REPORT_COLUMNS)
        for column in INTEGER_COLUMNS:
            df[column] = df[column].astype('Int64')
        df = df.sort_values(SORT_COLUMNS, kind='mergesort', na_position='last')
        return df.reset_index(drop=True)

    def prepare_output(self, out_dir: str) -> None:
        """
        Create the output directory.

        Raises:
            ConfigError: If the path exists as a file or cannot be created
        """
        try:
            os.makedirs(out_dir, exist_ok=True)
        except OSError as e:
            raise ConfigError(f"cannot use output directory {out_dir!r}: {e.strerror or e}", output=out_dir) from e

    def write_report(
        self,
        out_dir: str,
        rows: List[Dict[str, Any]],
        summary: Dict[str, Any],
        config: ExperimentConfig,
    ) -> Dict[str, str]:
        """
        Write report.csv, summary.json and resolved-config.txt.

        Args:
            out_dir: Output directory, created when missing
            rows: Report rows from the experiment service
            summary: JSON-ready summary
            config: The resolved config

        Returns:
            dict: File role -> written path
        """
        self.prepare_output(out_dir)
        paths = {
            'report': os.path.join(out_dir, REPORT_FILE),
            'summary': os.path.join(out_dir, SUMMARY_FILE),
            'config': os.path.join(out_dir, RESOLVED_CONFIG_FILE),
        }

        df = self.report_frame(rows)
        df.to_csv(paths['report'], index=False, lineterminator='\n')

        with open(paths['summary'], 'w', encoding='utf-8') as f:
            json.dump(summary, f, indent=2, sort_keys=True)
            f.write('\n')

        with open(paths['config'], 'w', encoding='utf-8') as f:
            f.write('\n'.join(config_service.resolved_lines(config)) + '\n')

        logger.info(f"wrote {len(df)} report rows to {paths['report']}")
        return paths


export_service = ExportService()
