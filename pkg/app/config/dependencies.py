from typing import Optional

from .settings import Settings, get_settings


def get_celery_app(settings: Optional[Settings] = None):
    """Worker Celery app reconfigured from current settings (cache removed to allow dynamic config changes)"""
    from ..worker.tasks import apply_settings, celery_app

    return apply_settings(celery_app, settings or get_settings())


def get_trial_runner(
    settings: Optional[Settings] = None,
    backend: Optional[str] = None,
    workers: Optional[int] = None,
):
    """Trial runner for the configured backend; explicit arguments override settings"""
    from ..services.runner_service import CeleryRunner, ProcessRunner, SerialRunner

    settings = settings or get_settings()
    backend = backend or settings.trial_backend
    workers = workers or settings.trial_workers

    if backend == "serial":
        return SerialRunner(chunk_size=settings.trial_chunk_size)
    if backend == "process":
        return ProcessRunner(workers=workers, chunk_size=settings.trial_chunk_size)
    if backend == "celery":
        return CeleryRunner(
            get_celery_app(settings),
            workers=workers,
            chunk_size=settings.trial_chunk_size,
            timeout=settings.celery_task_timeout,
        )
    raise ValueError(f"Unknown trial backend: {backend!r} (expected serial, process or celery)")
