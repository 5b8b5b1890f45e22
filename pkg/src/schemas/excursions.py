import math
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from src.core.config import settings
from src.schemas.estimate import Estimate


class ExcursionParams(BaseModel):
    """
    Geometry and timing of excursions between the r-sphere and the exterior of the R-ball.

    ``alpha_window`` is the post-exit window multiplier; it is unrelated to the
    time fraction alpha used for late points.
    """

    r: int = Field(default_factory=lambda: settings.EXCURSION_R_INNER, ge=1)
    R: int = Field(default_factory=lambda: settings.EXCURSION_R_OUTER, ge=2)
    beta: float = Field(default_factory=lambda: settings.EXCURSION_BETA, ge=0.0)
    alpha_window: float = Field(default_factory=lambda: settings.EXCURSION_ALPHA_WINDOW, ge=0.0)
    t_mix_uniform: Optional[int] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def check_ordering(self) -> "ExcursionParams":
        if self.r >= self.R:
            raise ValueError(f"need r < R, got r={self.r}, R={self.R}")
        if self.alpha_window > self.beta:
            raise ValueError(f"need alpha_window <= beta, got {self.alpha_window} > {self.beta}")
        return self

    def gap(self, t_mix_uniform: int) -> int:
        """Remix gap ceil(beta * T_mix^U)."""
        return int(math.ceil(self.beta * t_mix_uniform))

    def window(self, t_mix_uniform: int) -> int:
        """Post-exit window ceil(alpha_window * T_mix^U)."""
        return int(math.ceil(self.alpha_window * t_mix_uniform))


class OccupationResult(BaseModel):
    x: int
    occupation: float
    stationary: float
    ratio: float
    mean_time_on_target: Estimate
    mean_cycle: Estimate
    excursions: int


class HittingPrediction(BaseModel):
    x: int
    predicted: float
    exact: Optional[float] = None
    relative_error: Optional[float] = None
    mean_cycle: Estimate
    success: Estimate

    @property
    def ratio(self) -> Optional[float]:
        return None if self.exact is None else self.predicted / self.exact


class ConcentrationResult(BaseModel):
    x: int
    horizon: int
    count: int
    mean_cycle: float
    ratio: float


class PartitionReport(BaseModel):
    epsilon: float
    classes: Dict[int, List[int]] = Field(default_factory=dict)
    sizes: Dict[int, float] = Field(default_factory=dict)
    d_k: Dict[int, float] = Field(default_factory=dict)
    C_k: Dict[int, float] = Field(default_factory=dict)
    C: float = 0.0
    extrapolated: bool = False
    ratios: Dict[int, float] = Field(default_factory=dict)


class QReport(BaseModel):
    x: int
    q: List[float] = Field(default_factory=list)
    running_product: List[float] = Field(default_factory=list)
    max_q: float = 0.0
    certain_pairs: List[Tuple[int, int]] = Field(default_factory=list)
    empirical: bool = False

    def product_after(self, count: int) -> float:
        """Product of (1 - q_j) over the first ``count`` excursions."""
        if count <= 0 or not self.running_product:
            return 1.0
        return self.running_product[min(count, len(self.running_product)) - 1]
