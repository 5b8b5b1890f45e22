"""
The lamplighter chain over a base graph.

A step draws y from the lazy base kernel at the current position x,
re-randomizes the lamps at x and y with fair coins (a single lamp when y = x)
and moves to y. Lamp configurations are encoded as integers whose bit i is
the lamp at base vertex i; the explicit state id of (lamps, x) is
mask * |V| + x.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from src.core.config import settings
from src.core.errors import CapExceeded
from src.core.rng import Stream, replica_rng
from src.graphs.topology import GraphTopology, build_topology
from src.oracle.kernel import stationary_distribution
from src.schemas.family import LamplighterSpec
from src.walker.walk import step

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LampState:
    lamps: np.ndarray
    position: int

    @property
    def mask(self) -> int:
        return int(sum(int(bit) << i for i, bit in enumerate(self.lamps.tolist())))

    def encode(self) -> str:
        """Compact text form ``<position>:<hex lamps>``, lamp i being bit i."""
        digits = max(1, (self.lamps.size + 3) // 4)
        return f"{self.position}:{self.mask:0{digits}x}"

    @classmethod
    def decode(cls, text: str, vertex_count: int) -> "LampState":
        position, _, hex_lamps = text.partition(":")
        mask = int(hex_lamps, 16)
        if mask >> vertex_count:
            raise ValueError(f"lamp mask {hex_lamps} has bits beyond {vertex_count} vertices")
        lamps = np.array([(mask >> i) & 1 for i in range(vertex_count)], dtype=np.uint8)
        return cls(lamps=lamps, position=int(position))

    def state_id(self) -> int:
        return self.mask * self.lamps.size + self.position


def lamplighter_step(g: GraphTopology, state: LampState, rng: np.random.Generator) -> LampState:
    """One lamplighter step; lamps outside {x, y} are untouched."""
    x = state.position
    y = step(g, x, rng)
    lamps = state.lamps.copy()
    lamps[x] = rng.integers(0, 2)
    if y != x:
        lamps[y] = rng.integers(0, 2)
    return LampState(lamps=lamps, position=y)


def _check_wreath_cap(g: GraphTopology, cap: int) -> None:
    if g.vertex_count > cap:
        raise CapExceeded(f"lamplighter state space needs |V| <= {cap}, got {g.vertex_count}")


def wreath_graph(g: GraphTopology) -> GraphTopology:
    """
    Explicit lamplighter graph: (f, x) ~ (h, y) iff x ~ y and f, h agree off {x, y}.

    Raises:
        CapExceeded: If |V| exceeds WREATH_CAP
    """
    _check_wreath_cap(g, settings.WREATH_CAP)
    n = g.vertex_count
    neighbors: List[List[int]] = [[] for _ in range(n << n)]
    for mask in range(1 << n):
        for x in range(n):
            row = neighbors[mask * n + x]
            for y in g.neighbors(x).tolist():
                cleared = mask & ~((1 << x) | (1 << y))
                for lamp_x in (0, 1):
                    for lamp_y in (0, 1):
                        other = cleared | (lamp_x << x) | (lamp_y << y)
                        row.append(other * n + y)
    return build_topology(neighbors, LamplighterSpec(base=g.family))


def stationary_law(g: GraphTopology) -> np.ndarray:
    """Uniform lamps times the degree-weighted position, shape (2^|V|, |V|)."""
    _check_wreath_cap(g, settings.WREATH_CAP)
    pi = stationary_distribution(g)
    return np.tile(pi / (1 << g.vertex_count), (1 << g.vertex_count, 1))


def ensemble_step(
    g: GraphTopology, lamps: np.ndarray, positions: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """
    Advance every replica one step in place on ``lamps``; returns the new positions.

    Args:
        lamps: (replicas, |V|) uint8 lamp matrix, modified in place
        positions: (replicas,) current positions
    """
    count = positions.size
    u = rng.random(count)
    degrees = g.degrees[positions]
    k = np.minimum(((u - 0.5) * 2 * degrees).astype(np.int64), degrees - 1)
    moved = g.indices[g.indptr[positions] + np.maximum(k, 0)]
    targets = np.where(u < 0.5, positions, moved)
    coins = rng.integers(0, 2, size=(count, 2), dtype=np.uint8)
    rows = np.arange(count)
    lamps[rows, positions] = coins[:, 0]
    lamps[rows, targets] = np.where(targets == positions, coins[:, 0], coins[:, 1])
    return targets


def simulate_ensemble(
    g: GraphTopology,
    steps: int,
    replicas: int,
    seed: int,
    start: Optional[int] = None,
    observe=None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Run independent chains side by side from all-off lamps.

    All replicas share the (seed, 0, WALK) stream, which draws their uniforms
    and coins jointly, one step at a time.

    Args:
        g: Base graph
        steps: Number of steps
        replicas: Number of chains
        seed: Master seed
        start: Fixed start position; stationary positions when omitted
        observe: Optional callback observe(t, lamps, positions) called for t = 0..steps

    Returns:
        Tuple of (lamps, positions) at the final time
    """
    rng = replica_rng(seed, 0, Stream.WALK)
    lamps = np.zeros((replicas, g.vertex_count), dtype=np.uint8)
    if start is None:
        cumulative = g.cumulative_degrees
        positions = np.searchsorted(cumulative, rng.random(replicas) * cumulative[-1], side="right")
    else:
        positions = np.full(replicas, start, dtype=np.int64)
    if observe is not None:
        observe(0, lamps, positions)
    for t in range(1, steps + 1):
        positions = ensemble_step(g, lamps, positions, rng)
        if observe is not None:
            observe(t, lamps, positions)
    return lamps, positions


def state_ids(lamps: np.ndarray, positions: np.ndarray) -> np.ndarray:
    weights = (1 << np.arange(lamps.shape[1], dtype=np.int64))
    return (lamps.astype(np.int64) @ weights) * lamps.shape[1] + positions


def empirical_tv_curve(g: GraphTopology, t_max: int, replicas: int, seed: int, start: int = 0) -> np.ndarray:
    """Total variation between the ensemble's empirical law and the stationary law, t = 0..t_max."""
    target = stationary_law(g).reshape(-1)
    curve = np.empty(t_max + 1)

    def observe(t, lamps, positions):
        counts = np.bincount(state_ids(lamps, positions), minlength=target.size)
        curve[t] = 0.5 * float(np.abs(counts / replicas - target).sum())

    simulate_ensemble(g, t_max, replicas, seed, start=start, observe=observe)
    return curve


def lamp_marginals(g: GraphTopology, horizon: int, replicas: int, seed: int) -> np.ndarray:
    """Lamp vectors at time horizon from all-off lamps and a stationary position, shape (replicas, |V|)."""
    lamps, _ = simulate_ensemble(g, horizon, replicas, seed)
    return lamps
