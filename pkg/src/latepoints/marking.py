"""
Late sets and markings.

A Mu marking flips a fair coin on every vertex of the range at time
floor(alpha * T_cov) and forces 0 elsewhere; a Uniform marking flips a coin
everywhere.
"""
import logging
import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from src.core.rng import Stream, replica_rng
from src.graphs.topology import GraphTopology
from src.schemas.estimate import Estimate
from src.walker.walk import RangeRecord, sample_stationary, walk_range

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Marking:
    bits: np.ndarray
    provenance: Literal["mu", "uniform"]
    alpha: Optional[float] = None
    horizon: Optional[int] = None

    @property
    def zeros(self) -> int:
        return int(self.bits.size - self.bits.sum())


@dataclass(frozen=True)
class LateSet:
    vertices: np.ndarray
    alpha: float
    t_cov_ref: Estimate
    horizon: int

    def __len__(self) -> int:
        return int(self.vertices.size)


def horizon_for(alpha: float, t_cov_ref: Estimate) -> int:
    """T = floor(alpha * T_cov reference)."""
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}")
    if t_cov_ref.mean <= 0:
        raise ValueError(f"cover time reference must be positive, got {t_cov_ref.mean}")
    return int(math.floor(alpha * t_cov_ref.mean))


def stationary_range(g: GraphTopology, horizon: int, rng: np.random.Generator) -> RangeRecord:
    return walk_range(g, sample_stationary(g, rng), horizon, rng)


def replica_range(g: GraphTopology, seed: int, replica: int, horizon: int, stream: Stream = Stream.WALK) -> np.ndarray:
    """Visited vector of one replica's stationary-start walk; nested in horizon."""
    return stationary_range(g, horizon, replica_rng(seed, replica, stream)).visited


def late_set(g: GraphTopology, alpha: float, t_cov_ref: Estimate, rng: np.random.Generator) -> LateSet:
    """Vertices not visited by a stationary-start walk by time floor(alpha * T_cov)."""
    horizon = horizon_for(alpha, t_cov_ref)
    visited = stationary_range(g, horizon, rng).visited
    return LateSet(vertices=np.flatnonzero(~visited), alpha=alpha, t_cov_ref=t_cov_ref, horizon=horizon)


def mu_marking(visited: np.ndarray, coins: np.random.Generator, alpha: Optional[float] = None, horizon: Optional[int] = None) -> Marking:
    """Fair bits on the visited vertices, zero elsewhere; one coin is drawn for every vertex."""
    flips = coins.integers(0, 2, size=visited.size, dtype=np.uint8)
    return Marking(bits=flips * visited.astype(np.uint8), provenance="mu", alpha=alpha, horizon=horizon)


def sample_marking_mu(
    g: GraphTopology,
    alpha: float,
    t_cov_ref: Estimate,
    rng: np.random.Generator,
    coins: Optional[np.random.Generator] = None,
) -> Marking:
    """
    One Mu marking from a fresh range.

    Args:
        g: Graph
        alpha: Fraction of the cover time reference
        t_cov_ref: Cover time reference
        rng: Generator for the walk
        coins: Generator for the bits, defaults to rng
    """
    horizon = horizon_for(alpha, t_cov_ref)
    visited = stationary_range(g, horizon, rng).visited
    return mu_marking(visited, coins if coins is not None else rng, alpha=alpha, horizon=horizon)


def sample_marking_uniform(g: GraphTopology, rng: np.random.Generator) -> Marking:
    return Marking(bits=rng.integers(0, 2, size=g.vertex_count, dtype=np.uint8), provenance="uniform")


def zero_count_statistic(m: Marking) -> float:
    """z = (zeros - |V|/2) / (sqrt(|V|)/2)."""
    n = m.bits.size
    return (m.zeros - n / 2.0) / (math.sqrt(n) / 2.0)


def bitwise_means(bits: np.ndarray) -> np.ndarray:
    """Per-vertex mean over a (samples, |V|) stack of markings."""
    return np.asarray(bits, dtype=float).mean(axis=0)


def pair_correlation(bits: np.ndarray, i: int, j: int) -> float:
    """Empirical Pearson correlation of bits i and j over a (samples, |V|) stack."""
    stack = np.asarray(bits, dtype=float)
    return float(np.corrcoef(stack[:, i], stack[:, j])[0, 1])
