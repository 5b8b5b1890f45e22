"""
Hitting times and absorbing-chain solves.
"""
import logging
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from src.core.config import settings
from src.core.errors import GeometryDegenerate, SingularSystem
from src.graphs.queries import distances_from
from src.graphs.topology import GraphTopology
from src.oracle.kernel import check_dense_cap, sparse_kernel, stationary_distribution, transition_matrix

logger = logging.getLogger(__name__)


class MatthewsBounds(NamedTuple):
    lower: float
    upper: float
    subset: List[int]


def harmonic(k: int) -> float:
    return float(np.sum(1.0 / np.arange(1, k + 1))) if k > 0 else 0.0


def _solve(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        return linalg.solve(matrix, rhs)
    except linalg.LinAlgError as e:
        raise SingularSystem(f"absorbing system is singular: {e}") from e


def absorption(kernel: np.ndarray, transient: Sequence[int], absorbing: Sequence[int]) -> np.ndarray:
    """
    Absorption probabilities B[i, j] = P_{transient[i]}[first absorbed at absorbing[j]].

    Args:
        kernel: Transition matrix (dense)
        transient: States that keep moving
        absorbing: States that stop the chain; every other state must be unreachable
    """
    transient = np.asarray(transient, dtype=np.int64)
    absorbing = np.asarray(absorbing, dtype=np.int64)
    block = np.eye(transient.size) - kernel[np.ix_(transient, transient)]
    return _solve(block, kernel[np.ix_(transient, absorbing)])


def hitting_times_to(g: GraphTopology, target: int, kernel: Optional[np.ndarray] = None) -> np.ndarray:
    """
    E_x tau(target) for every x by the single-target absorbing solve.

    The entry at the target itself is its expected return time.
    """
    if kernel is None:
        kernel = transition_matrix(g)
    others = np.array([v for v in range(g.vertex_count) if v != target], dtype=np.int64)
    block = np.eye(others.size) - kernel[np.ix_(others, others)]
    times = np.empty(g.vertex_count)
    times[others] = _solve(block, np.ones(others.size))
    times[target] = 1.0 + kernel[target, others] @ times[others]
    return times


def expected_hitting_times(g: GraphTopology, kernel: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Matrix of E_x tau(y), tau(y) the first visit at a time t >= 1.

    Uses the fundamental matrix Z = (I - P + 1 pi^T)^{-1}:
    E_x tau(y) = (Z[y,y] - Z[x,y]) / pi(y) off the diagonal and 1/pi(y) on it.

    Raises:
        CapExceeded: Above the dense cap
        SingularSystem: If the graph is disconnected
    """
    check_dense_cap(g)
    if not g.is_connected:
        raise SingularSystem(f"{g!r} is disconnected")
    if kernel is None:
        kernel = transition_matrix(g)
    n = g.vertex_count
    pi = stationary_distribution(g)
    fundamental = _solve(np.eye(n) - kernel + np.outer(np.ones(n), pi), np.eye(n))
    hitting = (np.diag(fundamental)[None, :] - fundamental) / pi[None, :]
    np.fill_diagonal(hitting, 1.0 / pi)
    return hitting


def matthews_bounds(g: GraphTopology, hitting: np.ndarray) -> MatthewsBounds:
    """
    Harmonic-number bounds on the expected cover time from stationarity.

    upper = t_hit * H_|V|. The lower bound is the best over greedy far-apart
    subsets A of min_{a != b in A} E_a tau(b) * (H_|A| - 1).
    """
    n = g.vertex_count
    off = hitting.copy()
    np.fill_diagonal(off, np.inf)
    t_hit = float(np.max(np.where(np.isfinite(off), off, -np.inf)))
    upper = t_hit * harmonic(n)

    symmetric = np.minimum(off, off.T)
    a, b = np.unravel_index(np.argmax(np.where(np.isfinite(symmetric), symmetric, -np.inf)), symmetric.shape)
    subset = [int(a), int(b)]
    separation = float(symmetric[a, b])
    closest = np.minimum(symmetric[a], symmetric[b])
    best_lower, best_size = separation * (harmonic(2) - 1.0), 2
    for size in range(3, min(settings.MATTHEWS_MAX_SUBSET, n) + 1):
        candidates = np.where(np.isin(np.arange(n), subset), -np.inf, closest)
        v = int(np.argmax(candidates))
        separation = min(separation, float(candidates[v]))
        subset.append(v)
        closest = np.minimum(closest, symmetric[v])
        lower = separation * (harmonic(size) - 1.0)
        if lower > best_lower:
            best_lower, best_size = lower, size
    return MatthewsBounds(lower=best_lower, upper=upper, subset=subset[:best_size])


def _ball_layers(g: GraphTopology, x: int, r: int, outer: int) -> np.ndarray:
    dist = distances_from(g, x)
    if not 0 < r < outer:
        raise ValueError(f"need 0 < r < R, got r={r}, R={outer}")
    if not np.any(dist > outer):
        raise GeometryDegenerate(f"no vertex of {g!r} lies beyond distance {outer} of {x}")
    if not np.any(dist == r):
        raise GeometryDegenerate(f"sphere of radius {r} around {x} is empty")
    return dist


def first_excursion_hit_probability(g: GraphTopology, x: int, r: int, outer: int) -> float:
    """
    Probability, from stationarity, that the walk hits x between its first
    entry into the r-sphere around x and its subsequent exit from the R-ball.
    """
    check_dense_cap(g)
    kernel = transition_matrix(g)
    dist = _ball_layers(g, x, r, outer)
    sphere = np.flatnonzero(dist == r)
    rest = np.flatnonzero(dist != r)
    pi = stationary_distribution(g)
    entry = pi[sphere] + pi[rest] @ absorption(kernel, rest, sphere)

    inner = np.flatnonzero((dist <= outer) & (dist > 0))
    outside = np.flatnonzero(dist > outer)
    hit = absorption(kernel, inner, np.concatenate([[x], outside]))[:, 0]
    position = {v: i for i, v in enumerate(inner.tolist())}
    return float(entry @ hit[[position[z] for z in sphere.tolist()]])


def excursion_pair_probabilities(
    g: GraphTopology, x: int, r: int, outer: int
) -> Tuple[List[int], List[int], np.ndarray]:
    """
    Exact q(entry, exit): probability an excursion from the r-sphere hits x
    before leaving the R-ball, given its entry and exit vertices.

    Returns:
        Tuple of (entry vertices, exit vertices, q matrix indexed [entry, exit]);
        entries are nan where the exit is unreachable from that entry
    """
    check_dense_cap(g)
    kernel = sparse_kernel(g).toarray()
    dist = _ball_layers(g, x, r, outer)
    inner = np.flatnonzero(dist <= outer)
    exits = np.flatnonzero(dist == outer + 1)
    entries = np.flatnonzero(dist == r)
    position = {v: i for i, v in enumerate(inner.tolist())}

    exit_law = absorption(kernel, inner, exits)
    avoid = inner[inner != x]
    hit = absorption(kernel, avoid, np.concatenate([[x], exits]))[:, 0]
    avoid_position = {v: i for i, v in enumerate(avoid.tolist())}

    from_x = exit_law[position[x]]
    q = np.full((entries.size, exits.size), np.nan)
    for i, z in enumerate(entries.tolist()):
        through = exit_law[position[z]]
        reachable = through > 0
        q[i, reachable] = hit[avoid_position[z]] * from_x[reachable] / through[reachable]
    return entries.tolist(), exits.tolist(), np.clip(q, 0.0, 1.0)
