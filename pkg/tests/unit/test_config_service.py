"""
Unit tests for experiment config loading.
"""

import pytest

from src.app.errors import ConfigError
from src.schemas.config_schema import AUTO
from src.services.config_service import ConfigService
from src.services.experiment_service import ExperimentService
from src.ml.core import sample_size_for


class TestConfigService:
    """Unit tests for ConfigService."""

    def test_load_minimal_config(self, write_config):
        """Test that required keys load and defaults fill the rest."""
        path = write_config(mode="compare", n_points="4, 16", n_classifiers=2, epsilon="0.1,0.05")
        config = ConfigService.load_config(path)
        assert config.mode == "compare"
        assert config.n_points == [4, 16]
        assert config.epsilon == [0.1, 0.05]
        assert config.dataset == "blobs"
        assert config.estimation == "exact"

    def test_overrides(self, write_config):
        """Test that --seed and --out replace the file values."""
        path = write_config(mode="classical", n_points=4, n_classifiers=1, epsilon=0.1, seed=3)
        config = ConfigService.load_config(path, seed_override=11, out_override="elsewhere")
        assert config.seed == 11
        assert config.output == "elsewhere"

    def test_missing_file(self, tmp_path):
        """Test that a missing file is a config error."""
        with pytest.raises(ConfigError):
            ConfigService.load_config(str(tmp_path / "absent.cfg"))

    @pytest.mark.parametrize("values", [
        {"mode": "compare", "n_points": 4, "n_classifiers": 2, "epsilon": 0.1, "colour": "blue"},
        {"mode": "compare", "n_points": 4, "n_classifiers": 2, "epsilon": "0.1,0"},
        {"mode": "sideways", "n_points": 4, "n_classifiers": 2, "epsilon": 0.1},
        {"mode": "compare", "n_points": 0, "n_classifiers": 2, "epsilon": 0.1},
        {"mode": "compare", "n_classifiers": 2, "epsilon": 0.1},
        {"mode": "hoeffding", "n_points": 4, "n_classifiers": 2, "epsilon": 0.1, "hoeffding_iteration": 3},
        {"mode": "compare", "n_points": 4, "n_classifiers": 2, "epsilon": 0.1, "flip_noise": 1.5},
        {"mode": "hoeffding", "n_points": 4, "n_classifiers": 2, "epsilon": 0.1, "trials": 50},
    ])
    def test_invalid_configs(self, write_config, values):
        """Test that unknown keys, zero epsilon and out-of-range values are rejected."""
        with pytest.raises(ConfigError):
            ConfigService.load_config(write_config(**values))

    def test_resolved_lines_reload(self, write_config, tmp_path):
        """Test that the resolved config reloads to the same values."""
        path = write_config(mode="hoeffding", n_points="8,16", n_classifiers=2, epsilon=0.2, trials=1500)
        config = ConfigService.load_config(path)
        lines = ConfigService.resolved_lines(config)
        assert lines == sorted(lines)
        resolved = tmp_path / "resolved.cfg"
        resolved.write_text("\n".join(lines) + "\n")
        assert ConfigService.load_config(str(resolved)) == config

    def test_auto_sample_size(self, write_config):
        """Test that n_points = auto uses the Hoeffding sample size per epsilon."""
        path = write_config(
            mode="classical", n_points=AUTO, n_classifiers=1, epsilon="0.2,0.1", c_hat_target=1.0,
        )
        config = ConfigService.load_config(path)
        cells = ExperimentService.grid(config)
        assert cells == [
            (sample_size_for(1.0, 0.2, 0.05), 0.2),
            (sample_size_for(1.0, 0.1, 0.05), 0.1),
        ]


class TestSettings:
    """Unit tests for environment-selected settings."""

    def test_testing_profile_lowers_memory_cap(self, monkeypatch, write_config):
        """Test that BOOST_CONFIG=testing supplies the smaller default memory cap."""
        from src.app import load_settings

        monkeypatch.setenv("BOOST_CONFIG", "testing")
        assert load_settings().MEMORY_CAP_AMPLITUDES == 2 ** 20
        path = write_config(mode="quantum", n_points=4, n_classifiers=1, epsilon=0.1)
        assert ConfigService.load_config(path).memory_cap == 2 ** 20

    def test_unknown_profile_falls_back(self):
        """Test that an unknown profile name gives the default settings."""
        from src.app import Config, load_settings

        assert load_settings("staging") is Config
