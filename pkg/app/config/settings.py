import os
from typing import Literal, Optional

from pydantic import model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Simulator configuration with type safety"""
    model_config = SettingsConfigDict(
        env_file=".env.local",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )

    log_level: str = "INFO"

    # Trial execution
    trial_backend: Literal["serial", "process", "celery"] = "serial"
    trial_workers: int = 0                 # 0 = one worker per CPU
    trial_chunk_size: Optional[int] = None  # None = split trials evenly across workers

    # Celery Configuration
    celery_broker_url: Optional[str] = "redis://redis:6379/0"
    celery_result_backend: Optional[str] = "redis://redis:6379/0"
    celery_result_expires: int = 3600
    celery_task_timeout: float = 3600.0
    celery_always_eager: bool = False

    # Simulation defaults
    default_max_rounds: int = 1000
    default_trials: int = 1000
    draw_sampler: Literal["sparse", "dense"] = "sparse"

    # Analytics
    enumeration_cap: int = 10**6
    series_tolerance: float = 1e-15
    fourier_terms: int = 16
    geometric_tail_tolerance: float = 1e-12
    dkw_confidence: float = 0.99

    @model_validator(mode='after')
    def resolve_defaults(self):
        """Fill derived defaults and reject inconsistent combinations"""
        if self.trial_workers < 0:
            raise ValueError("TRIAL_WORKERS must be >= 0 (0 means one per CPU).")
        if self.trial_workers == 0:
            self.trial_workers = os.cpu_count() or 1

        if self.trial_chunk_size is not None and self.trial_chunk_size < 1:
            raise ValueError("TRIAL_CHUNK_SIZE must be a positive integer.")

        if self.trial_backend == "celery" and not self.celery_always_eager and not self.celery_broker_url:
            raise ValueError("CELERY_BROKER_URL is required when TRIAL_BACKEND=celery.")

        if self.celery_result_backend is None:
            self.celery_result_backend = self.celery_broker_url

        for name in ("default_max_rounds", "default_trials", "enumeration_cap", "fourier_terms"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name.upper()} must be >= 1.")

        if not 0.0 < self.dkw_confidence < 1.0:
            raise ValueError("DKW_CONFIDENCE must lie in (0, 1).")

        return self


def get_settings() -> Settings:
    """Settings instance (no cache so tests can override through the environment)"""
    return Settings()
