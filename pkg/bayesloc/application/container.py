from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from bayesloc.application.config import Config
from bayesloc.application.service import Service


class Container:
    """
    Dependency container for the bayesloc application.

    Owns the lifecycle of the trial worker pool and the `Service` built on it.
    Nothing is constructed until `start()` is called; `stop()` shuts the pool
    down.
    """

    def __init__(self, config: Config):
        """
        Args:
            config (Config): Settings loaded from the environment.
        """
        self._config = config

        self._executor: Optional[ThreadPoolExecutor] = None
        self._service: Optional[Service] = None

        self._started = False

    def start(self) -> None:
        """Create the worker pool, when more than one thread is configured, and the service."""
        if self._started:
            return

        executor = None
        if self._config.threads > 1:
            executor = ThreadPoolExecutor(max_workers=self._config.threads, thread_name_prefix="bayesloc-trial")

        self._executor = executor
        self._service = Service(executor)
        self._started = True

    def stop(self) -> None:
        """Tear down all managed resources."""
        if not self._started:
            return

        try:
            if self._executor:
                self._executor.shutdown(wait=True)
        finally:
            self._executor = None
            self._service = None
            self._started = False

    def __enter__(self) -> "Container":
        self.start()
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.stop()

    @property
    def config(self) -> Config:
        return self._config

    @property
    def service(self) -> Service:
        """
        Return the initialized `Service` instance.

        Raises:
            RuntimeError: If the container has not been started.
        """
        self._check_started()
        return self._service

    def _check_started(self) -> None:
        if not self._started:
            raise RuntimeError("Container has not been started. Call start() first.")
