"""Experiment configuration sections and the persisted experiment record."""
import hashlib
import json
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from src.core.config import settings
from src.schemas.estimate import Estimate
from src.schemas.family import FamilySpec

ExperimentKind = Literal["gen", "cover", "late", "distinguish", "excursion", "lamplighter", "oracle"]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ExperimentSection(_Section):
    kind: ExperimentKind
    name: str = "experiment"
    seed: int = Field(default=0, ge=0)
    out: str = "runs"
    threads: int = Field(default_factory=lambda: settings.THREADS, ge=1)
    t_cov_replicas: int = Field(default_factory=lambda: settings.T_COV_REPLICAS, ge=2)


class GenSection(_Section):
    edge_list: bool = True
    distances: bool = False


class CoverSection(_Section):
    replicas: int = Field(default=200, ge=2)
    first_hit: bool = False
    matthews: bool = True


class LateSection(_Section):
    alphas: List[float] = Field(default_factory=lambda: [0.25, 0.5, 0.75])
    replicas: int = Field(default=500, ge=2)
    points: List[int] = Field(default_factory=list)
    exact: bool = False


class DistinguishSection(_Section):
    alphas: List[float] = Field(default_factory=lambda: [0.3, 0.5, 0.7, 0.9])
    replicas: int = Field(default=1000, ge=2)
    pairs: int = Field(default=2000, ge=2)
    zeta: float = Field(default_factory=lambda: settings.ZETA, gt=0.0)
    z_threshold: float = Field(default_factory=lambda: settings.Z_THRESHOLD)


class ExcursionSection(_Section):
    target: int = Field(default=0, ge=0)
    r: int = Field(default_factory=lambda: settings.EXCURSION_R_INNER, ge=1)
    R: int = Field(default_factory=lambda: settings.EXCURSION_R_OUTER, ge=2)
    beta: float = Field(default_factory=lambda: settings.EXCURSION_BETA, ge=0.0)
    alpha_window: float = Field(default_factory=lambda: settings.EXCURSION_ALPHA_WINDOW, ge=0.0)
    t_mix_uniform: Optional[int] = Field(default=None, ge=0)
    replicas: int = Field(default=2000, ge=2)
    horizon: int = Field(default=200_000, ge=1)
    epsilon: Optional[float] = Field(default=None, gt=0.0)
    q_statistics: bool = False


class LamplighterSection(_Section):
    alphas: List[float] = Field(default_factory=lambda: [0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95])
    t_max: int = Field(default=20, ge=0)
    replicas: int = Field(default=100_000, ge=2)
    samples: int = Field(default_factory=lambda: settings.CUTOFF_SAMPLES, ge=2)
    pairs: int = Field(default=2000, ge=2)
    bins: int = Field(default_factory=lambda: settings.TV_BINS, ge=1)
    exact: bool = True
    cutoff: bool = False


class OracleSection(_Section):
    epsilons: List[float] = Field(default_factory=lambda: [0.25, 0.125])
    use_cache: bool = False


class ExperimentConfig(_Section):
    experiment: ExperimentSection
    graph: FamilySpec
    gen: GenSection = Field(default_factory=GenSection)
    cover: CoverSection = Field(default_factory=CoverSection)
    late: LateSection = Field(default_factory=LateSection)
    distinguish: DistinguishSection = Field(default_factory=DistinguishSection)
    excursion: ExcursionSection = Field(default_factory=ExcursionSection)
    lamplighter: LamplighterSection = Field(default_factory=LamplighterSection)
    oracle: OracleSection = Field(default_factory=OracleSection)

    def snapshot(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")

    def digest(self) -> str:
        return config_digest(self.snapshot())


def config_digest(snapshot: Dict[str, Any]) -> str:
    """SHA-256 over the canonical JSON form of a config snapshot."""
    canonical = json.dumps(snapshot, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class ExperimentRecord(BaseModel):
    """
    Everything needed to reproduce one run.

    ``estimates`` maps "<operation>.<field>" to the value it produced; every
    value is derived from the config snapshot's master seed.
    """

    version: str = Field(default_factory=lambda: settings.VERSION)
    kind: ExperimentKind
    config: Dict[str, Any]
    config_digest: str
    seed: int
    t_cov_ref: Optional[Estimate] = None
    estimates: Dict[str, Any] = Field(default_factory=dict)
    timings: Dict[str, float] = Field(default_factory=dict)
    artifacts: List[str] = Field(default_factory=list)
