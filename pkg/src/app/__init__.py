from dotenv import load_dotenv
import os

# Load environment variables BEFORE importing config
# so BOOST_* overrides are visible when the Config class is defined
load_dotenv()

from .config import config, Config


def load_settings(config_name=None):
    """Return the Config class selected by name or the BOOST_CONFIG env var."""
    if config_name is None:
        config_name = os.environ.get("BOOST_CONFIG", "default")
    return config.get(config_name, Config)
