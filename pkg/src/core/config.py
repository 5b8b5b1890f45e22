import math
from typing import Optional

from pydantic import validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Laboratory settings."""

    # Project
    PROJECT_NAME: str = "coverlab"
    PROJECT_DESCRIPTION: str = "Random-walk laboratory for uncovered sets and lamplighter cutoff"
    VERSION: str = "0.1.0"

    # Exact computation caps
    DENSE_CAP: int = 4096
    WREATH_CAP: int = 16
    EXACT_STATE_CAP: int = 12
    SYMMETRIC_GROUP_CAP: int = 6

    # Tolerances
    ROW_SUM_TOL: float = 1e-10
    STATIONARY_TOL: float = 1e-10
    RETURN_TIME_TOL: float = 1e-8

    # Generation
    RETRY_LIMIT: int = 1000
    PERCOLATION_MIN_CLUSTER: int = 10

    # Simulation
    HORIZON_FACTOR: float = 1e4
    WALK_CHUNK: int = 4096
    ORACLE_MAX_STEPS: int = 200_000
    THREADS: int = 1

    # Estimation defaults
    T_COV_REPLICAS: int = 200
    MATTHEWS_MAX_SUBSET: int = 64
    ZETA: float = math.log(2.0)
    Z_THRESHOLD: float = 3.0
    EXP_MOMENT_OVERFLOW_LOG2: float = 500.0
    TV_BINS: int = 49
    CUTOFF_SAMPLES: int = 2000
    MIN_JOINT_EVENTS: int = 10
    PARTITION_SAMPLE: int = 256
    PARTITION_MAX_REL_STDERR: float = 0.5

    # Excursion defaults
    EXCURSION_R_INNER: int = 1
    EXCURSION_R_OUTER: int = 3
    EXCURSION_BETA: float = 2.0
    EXCURSION_ALPHA_WINDOW: float = 1.0

    # Persistence
    CACHE_DIR: Optional[str] = ".cache/oracle"
    FLOAT_FORMAT: str = "%.17g"

    @validator("DENSE_CAP", "WREATH_CAP", "EXACT_STATE_CAP", "RETRY_LIMIT", "WALK_CHUNK")
    def positive_caps(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"must be positive, got {v}")
        return v

    model_config = SettingsConfigDict(
        env_prefix="COVERLAB_", env_file=".env", env_file_encoding="utf-8", case_sensitive=True
    )


settings = Settings()
