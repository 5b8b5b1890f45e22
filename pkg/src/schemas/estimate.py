import math
from typing import Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field


class Estimate(BaseModel):
    mean: float
    stderr: float = 0.0
    count: int = Field(default=1, ge=1)

    @classmethod
    def from_samples(cls, samples: Sequence[float]) -> "Estimate":
        """Sample mean and standard error of the mean."""
        values = np.asarray(samples, dtype=float)
        if values.size == 0:
            raise ValueError("cannot estimate from an empty sample")
        stderr = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else 0.0
        return cls(mean=float(values.mean()), stderr=stderr, count=int(values.size))

    def interval(self, z: float = 1.96) -> Tuple[float, float]:
        return self.mean - z * self.stderr, self.mean + z * self.stderr

    def within(self, value: float, sigmas: float = 3.0) -> bool:
        """Whether ``value`` lies within ``sigmas`` standard errors of the mean."""
        return abs(self.mean - value) <= sigmas * self.stderr

    def __str__(self) -> str:
        return f"{self.mean:.6g} ± {self.stderr:.3g} (n={self.count})"
