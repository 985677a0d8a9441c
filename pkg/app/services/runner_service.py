"""Trial execution backends: in-process, process pool and Celery workers"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional

from ..schemas.sim_schema import RunMetrics, SimConfig
from .engine_service import run_trial_batch

logger = logging.getLogger(__name__)


def trial_chunks(trials: int, workers: int, chunk_size: Optional[int] = None) -> List[range]:
    """Contiguous ranges covering 0..trials-1."""
    if chunk_size is None:
        chunk_size = max(1, -(-trials // max(1, workers)))
    return [range(start, min(start + chunk_size, trials)) for start in range(0, trials, chunk_size)]


def _reassemble(config: SimConfig, batches) -> List[RunMetrics]:
    runs = sorted((run for batch in batches for run in batch), key=lambda run: run.trial_index)
    if [run.trial_index for run in runs] != list(range(config.trials)):
        raise RuntimeError(f"trial results incomplete: expected {config.trials}, got {len(runs)}")
    return runs


class SerialRunner:
    """Runs every trial in the calling process."""

    def __init__(self, chunk_size: Optional[int] = None):
        self.chunk_size = chunk_size

    def run(self, config: SimConfig) -> List[RunMetrics]:
        chunks = trial_chunks(config.trials, 1, self.chunk_size)
        return _reassemble(config, [run_trial_batch(config, chunk) for chunk in chunks])


class ProcessRunner:
    """Spreads trial chunks over a local process pool."""

    def __init__(self, workers: int, chunk_size: Optional[int] = None):
        self.workers = workers
        self.chunk_size = chunk_size

    def run(self, config: SimConfig) -> List[RunMetrics]:
        chunks = trial_chunks(config.trials, self.workers, self.chunk_size)
        if self.workers <= 1 or len(chunks) <= 1:
            return _reassemble(config, [run_trial_batch(config, chunk) for chunk in chunks])

        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            batches = list(pool.map(run_trial_batch, [config] * len(chunks), chunks))
        return _reassemble(config, batches)


class CeleryRunner:
    """Dispatches trial chunks as ``run_trial_batch`` tasks and waits for all of them."""

    def __init__(self, celery_app, workers: int, chunk_size: Optional[int] = None, timeout: float = 3600.0):
        self.celery_app = celery_app
        self.workers = workers
        self.chunk_size = chunk_size
        self.timeout = timeout

    def run(self, config: SimConfig) -> List[RunMetrics]:
        from ..worker.tasks import run_trial_batch_task

        chunks = trial_chunks(config.trials, self.workers, self.chunk_size)
        payload = config.model_dump(mode="json")
        pending = [run_trial_batch_task.apply_async(args=(payload, chunk.start, chunk.stop)) for chunk in chunks]
        try:
            rows = [result.get(timeout=self.timeout) for result in pending]
        except Exception:
            logger.error(
                "Celery trial batch failed",
                extra={"trials": config.trials, "chunks": len(chunks)},
                exc_info=True,
            )
            raise
        batches = [[RunMetrics.model_validate(row) for row in batch] for batch in rows]
        return _reassemble(config, batches)
