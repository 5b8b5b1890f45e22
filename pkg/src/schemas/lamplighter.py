from typing import List, Optional

from pydantic import BaseModel, Field

from src.core.config import settings
from src.schemas.estimate import Estimate
from src.schemas.latepoints import DistinguisherConfig


class CutoffConfig(BaseModel):
    samples: int = Field(default_factory=lambda: settings.CUTOFF_SAMPLES, ge=2)
    pairs: int = Field(default=2000, ge=2)
    bins: int = Field(default_factory=lambda: settings.TV_BINS, ge=1)
    zeta: float = Field(default_factory=lambda: settings.ZETA, gt=0.0)
    seed: int = Field(default=0, ge=0)
    threads: Optional[int] = None

    def distinguisher(self) -> DistinguisherConfig:
        return DistinguisherConfig(
            zeta=self.zeta, replicas=self.samples, pairs=self.pairs, seed=self.seed, threads=self.threads
        )


class CutoffReport(BaseModel):
    """Lower and upper total variation curves of the lamplighter around alpha * t_cov."""

    family: str
    t_cov_ref: Estimate
    alpha_grid: List[float]
    horizons: List[int] = Field(default_factory=list)
    tv_lower: List[float] = Field(default_factory=list)
    tv_upper: List[float] = Field(default_factory=list)
    base_residual: List[float] = Field(default_factory=list)
    overflow: List[bool] = Field(default_factory=list)
    lower_crossing: Optional[float] = None     # alpha where tv_lower drops below 1/2
    upper_crossing: Optional[float] = None     # alpha where tv_upper drops below 1/4
    crossing_estimate: Optional[float] = None


class ExactTvReport(BaseModel):
    family: str
    worst_start: int
    tv: List[float]
    mixing_time: Optional[int] = None
