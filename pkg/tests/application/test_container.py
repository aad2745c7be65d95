from concurrent.futures import ThreadPoolExecutor

import pytest

from bayesloc.application.bootstrap import build_container
from bayesloc.application.config import Config
from bayesloc.application.service import Service


@pytest.fixture
def config(monkeypatch):
    monkeypatch.delenv("BAYESLOC_THREADS", raising=False)
    return Config()


class TestContainer:

    def test_service_needs_start(self, config):
        container = build_container(config)
        with pytest.raises(RuntimeError):
            container.service

    def test_context_manager_lifecycle(self, config):
        with build_container(config) as container:
            assert isinstance(container.service, Service)
            assert container.service._executor is None
        with pytest.raises(RuntimeError):
            container.service

    def test_pool_with_several_threads(self, monkeypatch):
        monkeypatch.setenv("BAYESLOC_THREADS", "2")
        container = build_container()
        container.start()
        try:
            assert isinstance(container.service._executor, ThreadPoolExecutor)
            assert container.config.threads == 2
        finally:
            container.stop()

    def test_start_and_stop_are_idempotent(self, config):
        container = build_container(config)
        container.start()
        service = container.service
        container.start()
        assert container.service is service
        container.stop()
        container.stop()
