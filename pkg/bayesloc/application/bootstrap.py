import logging
import os
from dotenv import load_dotenv

from bayesloc.application.config import Config
from bayesloc.application.container import Container

# Prevent OpenMP thread contention with the trial pool
os.environ["OMP_NUM_THREADS"] = "1"

# Load env configuration
load_dotenv()

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(config: Config) -> None:
    """Install the root handler once, at the configured level."""
    logging.basicConfig(level=config.log_level, format=LOG_FORMAT)


def build_container(config: Config | None = None) -> Container:
    """
    Assemble and return the application's dependency container.

    This is the composition root: it loads configuration and wires the worker
    pool and the service into one `Container`.

    Args:
        config (Config | None): Settings to use instead of the environment.

    Returns:
        Container: An unstarted container.

    Raises:
        ConfigError: If the environment holds an invalid setting.
    """
    return Container(
        config=config if config is not None else Config()
    )
