"""
Configuration service: loads, validates and writes back experiment configs.
"""
import dataclasses
import logging
import os
from typing import Dict, List, Optional

from dotenv import dotenv_values
from marshmallow import ValidationError

from src.app.errors import ConfigError
from src.domain.models import ExperimentConfig
from src.schemas.config_schema import experiment_config_schema

logger = logging.getLogger(__name__)


class ConfigService:
    """Service for experiment config files."""

    @staticmethod
    def read_values(path: str) -> Dict[str, Optional[str]]:
        """
        Read a flat `key = value` file.

        Raises:
            ConfigError: If the file does not exist
        """
        if not os.path.isfile(path):
            raise ConfigError(f"config file not found: {path}", path=path)
        return dict(dotenv_values(path))

    @staticmethod
    def load_config(
        path: str,
        seed_override: Optional[int] = None,
        out_override: Optional[str] = None,
    ) -> ExperimentConfig:
        """
        Load and validate an experiment config.

        Args:
            path: Config file path
            seed_override: --seed value, replaces the file's seed
            out_override: --out value, replaces the file's output directory

        Returns:
            ExperimentConfig: Range-checked config

        Raises:
            ConfigError: On unknown keys, missing keys or out-of-range values
        """
        values = ConfigService.read_values(path)
        try:
            config = experiment_config_schema.load(values)
        except ValidationError as e:
            raise ConfigError(f"invalid config {path}", errors=e.messages)

        overrides = {}
        if seed_override is not None:
            if seed_override < 0:
                raise ConfigError(f"seed must be non-negative, got {seed_override}")
            overrides['seed'] = seed_override
        if out_override is not None:
            overrides['output'] = out_override
        if overrides:
            config = dataclasses.replace(config, **overrides)
        logger.info(f"loaded config {path}: mode={config.mode}, seed={config.seed}")
        return config

    @staticmethod
    def resolved_lines(config: ExperimentConfig) -> List[str]:
        """Sorted `key = value` lines that reload to the same config."""
        dumped = experiment_config_schema.dump(config)
        return [f"{key} = {dumped[key]}" for key in sorted(dumped)]


config_service = ConfigService()
