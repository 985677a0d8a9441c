import logging

import pytest
from hypothesis import HealthCheck, settings

from app.config.settings import get_settings
from app.schemas.protocol_schema import ElectionParams, ProtocolKind
from app.schemas.sim_schema import SimConfig
from app.services.runner_service import SerialRunner
from app.worker.tasks import apply_settings, celery_app

# The autouse env fixture is safe to share across generated examples.
settings.register_profile("project", suppress_health_check=[HealthCheck.function_scoped_fixture], deadline=None)
settings.load_profile("project")


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    """Keep a developer's .env.local and shell exports out of the tests."""
    monkeypatch.chdir(tmp_path)
    for name in ("TRIAL_BACKEND", "TRIAL_WORKERS", "TRIAL_CHUNK_SIZE", "DRAW_SAMPLER", "LOG_LEVEL", "CELERY_ALWAYS_EAGER"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("TRIAL_BACKEND", "serial")


@pytest.fixture
def serial_runner():
    return SerialRunner()


@pytest.fixture(params=list(ProtocolKind), ids=lambda kind: kind.value)
def protocol(request):
    return request.param


@pytest.fixture
def small_config(protocol):
    return SimConfig(
        params=ElectionParams(n=32, alpha=1.5),
        protocol=protocol,
        trials=40,
        seed=11,
    )


@pytest.fixture(autouse=True)
def restore_logging():
    """setup_logging swaps the root handlers; put them back after each test."""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers = handlers
    root.setLevel(level)


@pytest.fixture
def restore_celery():
    yield
    apply_settings(celery_app, get_settings())
