"""
Exact total variation curves of the lamplighter chain on tiny bases.

Distributions live on a (2^|V|, |V|) array indexed by (lamp mask, position).
One step is pushed forward in three moves: re-randomize the lamp at the
position, move the position with the lazy base kernel, re-randomize the lamp
at the new position. XOR-translating the lamps is an automorphism of the
chain fixing the stationary law, so starts with all lamps off cover every
start.
"""
import logging
from typing import Optional

import numpy as np

from src.core.config import settings
from src.core.errors import CapExceeded
from src.graphs.topology import GraphTopology
from src.lamplighter.chain import stationary_law
from src.oracle.kernel import transition_matrix
from src.schemas.lamplighter import ExactTvReport

logger = logging.getLogger(__name__)


def _flip_index(n: int) -> np.ndarray:
    """flip[mask, x] = mask with bit x toggled."""
    masks = np.arange(1 << n, dtype=np.int64)[:, None]
    return masks ^ (1 << np.arange(n, dtype=np.int64))[None, :]


def pushforward(dist: np.ndarray, kernel: np.ndarray, flip: np.ndarray) -> np.ndarray:
    """
    One lamplighter step applied to a stack of distributions.

    Args:
        dist: (..., 2^|V|, |V|) probabilities over (mask, position)
        kernel: Dense lazy base kernel
        flip: Output of the mask-toggle table for |V|

    Returns:
        Distribution one step later, same shape
    """
    columns = np.arange(dist.shape[-1])
    randomized = 0.5 * (dist + dist[..., flip, columns])
    moved = randomized @ kernel
    return 0.5 * (moved + moved[..., flip, columns])


def per_start_tv(g: GraphTopology, t_max: int) -> np.ndarray:
    """
    TV to the stationary law from every start (all lamps off, position x).

    Returns:
        (t_max + 1, |V|) array
    """
    n = g.vertex_count
    if n > settings.EXACT_STATE_CAP:
        raise CapExceeded(f"exact lamplighter curves need |V| <= {settings.EXACT_STATE_CAP}, got {n}")
    kernel = transition_matrix(g)
    flip = _flip_index(n)
    target = stationary_law(g)

    dist = np.zeros((n, 1 << n, n))
    dist[np.arange(n), 0, np.arange(n)] = 1.0
    values = np.empty((t_max + 1, n))
    for t in range(t_max + 1):
        if t:
            dist = pushforward(dist, kernel, flip)
        values[t] = 0.5 * np.abs(dist - target).sum(axis=(1, 2))
    return values


def exact_tv_curve(g: GraphTopology, t_max: int) -> np.ndarray:
    """Worst-start total variation distance of the lamplighter chain, t = 0..t_max."""
    return per_start_tv(g, t_max).max(axis=1)


def exact_tv_report(g: GraphTopology, t_max: int, eps: float = 0.25) -> ExactTvReport:
    values = per_start_tv(g, t_max)
    curve = values.max(axis=1)
    below = np.flatnonzero(curve <= eps)
    mixing: Optional[int] = int(below[0]) if below.size else None
    if mixing is None:
        logger.warning(f"Lamplighter over {g.family.label()} still above {eps} at t={t_max}")
    return ExactTvReport(
        family=g.family.label(),
        worst_start=int(values.sum(axis=0).argmax()),
        tv=curve.tolist(),
        mixing_time=mixing,
    )
