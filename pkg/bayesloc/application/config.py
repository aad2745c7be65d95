import logging
import os
from pathlib import Path

from bayesloc.core.errors import ConfigError
from bayesloc.core.geometry import DEFAULT_RESOLUTION

DEFAULT_THREADS = 1
DEFAULT_LOG_LEVEL = "WARNING"
DEFAULT_OUTPUT_DIR = "results"


class Config:
    """
    Application configuration loader.

    Reads optional environment variables once at startup and exposes typed,
    validated values. Core and infra layers never read the environment.
    """

    def __init__(self):
        """
        Load and validate environment variables.

        Optional:
            BAYESLOC_THREADS – Worker threads for Monte-Carlo trials (int >= 1).
            BAYESLOC_LOG_LEVEL – Logging level name.
            BAYESLOC_RESOLUTION – Default grid resolution in metres (> 0).
            BAYESLOC_OUTPUT_DIR – Default artifact directory.

        Raises:
            ConfigError: If a variable is set to an invalid value.
        """
        self.threads: int = self._int_env("BAYESLOC_THREADS", DEFAULT_THREADS)
        if self.threads < 1:
            raise ConfigError(f"BAYESLOC_THREADS must be >= 1, got {self.threads}")

        self.log_level: str = self._optional_env("BAYESLOC_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper()
        if not isinstance(logging.getLevelName(self.log_level), int):
            raise ConfigError(f"BAYESLOC_LOG_LEVEL is not a logging level: {self.log_level}")

        self.resolution: float = self._float_env("BAYESLOC_RESOLUTION", DEFAULT_RESOLUTION)
        if not self.resolution > 0:
            raise ConfigError(f"BAYESLOC_RESOLUTION must be > 0, got {self.resolution}")

        self._output_dir: Path = Path(self._optional_env("BAYESLOC_OUTPUT_DIR", DEFAULT_OUTPUT_DIR))

    def _optional_env(self, env_key: str, default: str) -> str:
        env_value = os.getenv(env_key)
        return env_value.strip() if env_value and env_value.strip() else default

    def _int_env(self, env_key: str, default: int) -> int:
        raw = self._optional_env(env_key, str(default))
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{env_key} must be an integer, got {raw!r}") from None

    def _float_env(self, env_key: str, default: float) -> float:
        raw = self._optional_env(env_key, repr(default))
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{env_key} must be a number, got {raw!r}") from None

    @property
    def output_dir(self) -> Path:
        """
        Directory for artifacts of commands run without `--out`.

        Returns:
            Path: `BAYESLOC_OUTPUT_DIR`, or `results` under the working directory.
        """
        return self._output_dir
