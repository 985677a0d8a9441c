import logging
import time

from celery import Celery

from ..config.settings import get_settings
from ..schemas.sim_schema import SimConfig
from ..services.engine_service import run_trial_batch

logger = logging.getLogger(__name__)

celery_app = Celery("worker")


def apply_settings(app: Celery, settings=None) -> Celery:
    """Broker, result backend, expiry and eager mode from settings."""
    settings = settings or get_settings()
    app.conf.broker_url = settings.celery_broker_url
    app.conf.result_backend = settings.celery_result_backend
    # Completed batches are fetched once; expire them so redis does not fill up.
    app.conf.result_expires = settings.celery_result_expires
    app.conf.task_always_eager = settings.celery_always_eager
    app.conf.task_eager_propagates = True
    app.conf.task_serializer = "json"
    app.conf.result_serializer = "json"
    app.conf.accept_content = ["json"]
    return app


apply_settings(celery_app)


@celery_app.task(name="run_trial_batch")
def run_trial_batch_task(config_payload: dict, start: int, stop: int) -> list:
    """Run trials start..stop-1 and return compact RunMetrics rows as JSON dicts."""
    task_start_time = time.perf_counter()
    config = SimConfig.model_validate(config_payload)
    try:
        runs = run_trial_batch(config, range(start, stop))
    except Exception:
        logger.error("Trial batch failed", extra={"start": start, "stop": stop}, exc_info=True)
        raise
    logger.info(
        "Trial batch completed",
        extra={
            "start": start,
            "stop": stop,
            "protocol": config.protocol.value,
            "n": config.params.n,
            "elapsed_ms": round((time.perf_counter() - task_start_time) * 1000, 1),
        },
    )
    return [run.model_dump(mode="json") for run in runs]
