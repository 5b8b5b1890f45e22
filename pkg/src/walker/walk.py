"""
Lazy random walk simulation.

The walk holds with probability 1/2 and otherwise moves to a uniformly chosen
neighbor. One uniform draw decides each step: u < 1/2 holds, otherwise the
neighbor index is floor((u - 1/2) * 2 * deg). Uniforms are drawn in fixed
chunks, so the trajectory of a replica does not depend on the horizon it is
run to.
"""
import logging
import math
from dataclasses import dataclass
from itertools import islice
from typing import Iterator, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field

from src.core.config import settings
from src.core.errors import HorizonExceeded
from src.core.rng import Stream, replica_rng
from src.graphs.topology import GraphTopology

logger = logging.getLogger(__name__)


class WalkConfig(BaseModel):
    seed: int = Field(ge=0, lt=2**64)
    replica_index: int = Field(default=0, ge=0)
    start: Union[int, Literal["stationary"]] = "stationary"


@dataclass(frozen=True)
class RangeRecord:
    """
    Range of one walk.

    Attributes:
        visited: Boolean vector over vertices, X(0) included
        cover_time: First time every vertex has been visited, None if unfinished
        first_hit: First visit time per vertex (0 for the start), -1 if unvisited
        start: X(0)
    """

    visited: np.ndarray
    cover_time: Optional[int]
    first_hit: np.ndarray
    start: int

    @property
    def visited_count(self) -> int:
        return int(self.visited.sum())

    @property
    def covered(self) -> bool:
        return self.cover_time is not None

    def visited_at(self, horizon: int) -> np.ndarray:
        """Range {X(0), ..., X(horizon)} for any horizon up to the one simulated."""
        return (self.first_hit >= 0) & (self.first_hit <= horizon)


def safety_horizon(g: GraphTopology) -> int:
    """Step cap HORIZON_FACTOR * |V| * log|V|."""
    n = g.vertex_count
    return int(math.ceil(settings.HORIZON_FACTOR * n * max(math.log(n), 1.0)))


def step(g: GraphTopology, x: int, rng: np.random.Generator) -> int:
    """One lazy step from x."""
    u = rng.random()
    if u < 0.5:
        return x
    deg = int(g.degrees[x])
    k = min(int((u - 0.5) * 2 * deg), deg - 1)
    return int(g.indices[g.indptr[x] + k])


def sample_stationary(g: GraphTopology, rng: np.random.Generator) -> int:
    """Vertex drawn with probability deg(x) / sum of degrees."""
    cumulative = g.cumulative_degrees
    u = rng.random() * cumulative[-1]
    return int(np.searchsorted(cumulative, u, side="right"))


def iter_trajectory(g: GraphTopology, start: int, rng: np.random.Generator) -> Iterator[int]:
    """Endless stream X(0), X(1), ... starting from ``start``."""
    indptr, indices, degrees = g.walk_tables
    chunk = settings.WALK_CHUNK
    x = start
    yield x
    while True:
        for u in rng.random(chunk).tolist():
            if u >= 0.5:
                deg = degrees[x]
                k = int((u - 0.5) * 2 * deg)
                if k >= deg:
                    k = deg - 1
                x = indices[indptr[x] + k]
            yield x


def trajectory(g: GraphTopology, start: int, horizon: int, rng: np.random.Generator) -> np.ndarray:
    """Positions X(0..horizon) as an int64 array."""
    if horizon < 0:
        raise ValueError(f"horizon must be non-negative, got {horizon}")
    return np.fromiter(islice(iter_trajectory(g, start, rng), horizon + 1), dtype=np.int64, count=horizon + 1)


def resolve_start(g: GraphTopology, config: WalkConfig, rng: np.random.Generator) -> int:
    if config.start == "stationary":
        return sample_stationary(g, rng)
    if not 0 <= config.start < g.vertex_count:
        raise ValueError(f"start vertex {config.start} out of range for {g!r}")
    return config.start


def walk_range(g: GraphTopology, x0: int, horizon: int, rng: np.random.Generator) -> RangeRecord:
    """Range of the walk from x0 up to horizon, stopping early once covered."""
    n = g.vertex_count
    first_hit = [-1] * n
    remaining = n
    cover_time = None
    for t, x in enumerate(islice(iter_trajectory(g, x0, rng), horizon + 1)):
        if first_hit[x] < 0:
            first_hit[x] = t
            remaining -= 1
            if remaining == 0:
                cover_time = t
                break
    hits = np.asarray(first_hit, dtype=np.int64)
    return RangeRecord(visited=hits >= 0, cover_time=cover_time, first_hit=hits, start=x0)


def run_range(g: GraphTopology, config: WalkConfig, horizon: int) -> RangeRecord:
    """
    Range of the walk up to ``horizon``.

    Args:
        g: Graph to walk on
        config: Seed, replica and start
        horizon: Last time T included in the range

    Returns:
        RangeRecord with visited = {X(0), ..., X(T)}
    """
    if horizon < 0:
        raise ValueError(f"horizon must be non-negative, got {horizon}")
    rng = replica_rng(config.seed, config.replica_index, Stream.WALK)
    return walk_range(g, resolve_start(g, config, rng), horizon, rng)


def run_until_cover(g: GraphTopology, config: WalkConfig) -> RangeRecord:
    """
    Run until every vertex is visited.

    Raises:
        HorizonExceeded: If the walk has not covered within the safety horizon
    """
    cap = safety_horizon(g)
    rng = replica_rng(config.seed, config.replica_index, Stream.WALK)
    record = walk_range(g, resolve_start(g, config, rng), cap, rng)
    if not record.covered:
        raise HorizonExceeded(f"{g!r} not covered within {cap} steps (replica {config.replica_index})")
    return record


def hitting_sample(g: GraphTopology, start: int, target: int, rng: np.random.Generator) -> int:
    """First t >= 1 with X(t) = target."""
    cap = safety_horizon(g)
    walk = iter_trajectory(g, start, rng)
    next(walk)
    for t, x in enumerate(walk, start=1):
        if x == target:
            return t
        if t >= cap:
            break
    raise HorizonExceeded(f"{g!r}: target {target} not hit from {start} within {cap} steps")


def occupation_frequencies(g: GraphTopology, start: int, steps: int, rng: np.random.Generator) -> np.ndarray:
    """Fraction of the times 0..steps-1 spent at each vertex."""
    path = trajectory(g, start, steps - 1, rng)
    return np.bincount(path, minlength=g.vertex_count) / steps
