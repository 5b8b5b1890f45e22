import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field

from src.core.config import settings
from src.schemas.estimate import Estimate


class DistinguisherConfig(BaseModel):
    zeta: float = Field(default_factory=lambda: settings.ZETA, gt=0.0)
    z_threshold: float = Field(default_factory=lambda: settings.Z_THRESHOLD)
    replicas: int = Field(default=1000, ge=2)
    pairs: int = Field(default=2000, ge=2)
    seed: int = Field(default=0, ge=0)
    threads: Optional[int] = None


class DistinguisherResult(BaseModel):
    alpha: float
    horizon: int
    rejection: Estimate
    z_values: List[float] = Field(default_factory=list)
    late_sizes: List[int] = Field(default_factory=list)


class ExpMomentResult(BaseModel):
    """Monte Carlo exponential moment of the late-set intersection of two independent walks."""

    alpha: float
    horizon: int
    zeta: float
    m_hat: Optional[float] = None          # None when the moment overflowed
    m_stderr: Optional[float] = None
    tv_upper: float = 1.0
    overflow: bool = False
    intersections: List[int] = Field(default_factory=list)


class CorrelationResult(BaseModel):
    alpha: float
    horizon: int
    points: List[int]
    replicas: int
    p_joint: float
    p_single: List[float]
    product: float
    ratio: Optional[float] = None
    ratio_interval: Optional[Tuple[float, float]] = None
    joint_count: int
    insufficient: bool = False
    reference: float

    @property
    def log_marginal_gap(self) -> List[float]:
        """|log(p_single * |V|^alpha)| per point, from the reference value."""
        per_point = self.reference ** (1.0 / len(self.points))
        return [abs(math.log(p / per_point)) if p > 0 else math.inf for p in self.p_single]


class LateExponentResult(BaseModel):
    alpha: float
    horizon: int
    mean_size: Estimate
    exponent: Optional[float] = None
    sizes: List[int] = Field(default_factory=list)
