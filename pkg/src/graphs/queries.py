"""Distance and degree queries on a GraphTopology."""
from typing import Iterable, List, NamedTuple, Set

import numpy as np
from scipy.sparse.csgraph import shortest_path

from src.core.config import settings
from src.core.errors import CapExceeded
from src.graphs.topology import GraphTopology


class DegreeStats(NamedTuple):
    max_degree: int
    min_degree: int
    ratio: float


def _check_vertex(g: GraphTopology, x: int) -> None:
    if not 0 <= x < g.vertex_count:
        raise ValueError(f"vertex {x} out of range for {g!r}")


def distances_to_set(g: GraphTopology, sources: Iterable[int]) -> np.ndarray:
    """
    Multi-source breadth-first distances d(., E).

    Unreachable vertices get -1.
    """
    sources = sorted(set(int(s) for s in sources))
    if not sources:
        raise ValueError("source set must be non-empty")
    for s in sources:
        _check_vertex(g, s)
    rows = shortest_path(g.to_csr(), method="D", directed=False, unweighted=True, indices=sources)
    nearest = np.atleast_2d(rows).min(axis=0)
    return np.where(np.isfinite(nearest), nearest, -1).astype(np.int64)


def distances_from(g: GraphTopology, x: int) -> np.ndarray:
    return distances_to_set(g, [x])


def ball(g: GraphTopology, x: int, r: int) -> Set[int]:
    """Vertices within graph distance r of x."""
    _check_vertex(g, x)
    if r < 0:
        raise ValueError(f"radius must be non-negative, got {r}")
    dist = distances_from(g, x)
    return set(np.flatnonzero((dist >= 0) & (dist <= r)).tolist())


def distance(g: GraphTopology, x: int, y: int) -> int:
    """Shortest-path length between x and y."""
    _check_vertex(g, y)
    return int(distances_from(g, x)[y])


def all_pairs_distances(g: GraphTopology) -> np.ndarray:
    """Dense |V| x |V| hop-distance matrix."""
    if g.vertex_count > settings.DENSE_CAP:
        raise CapExceeded(f"all-pairs distances need |V| <= {settings.DENSE_CAP}, got {g.vertex_count}")
    dist = shortest_path(g.to_csr(), method="D", directed=False, unweighted=True)
    return dist.astype(np.int64)


def eccentricity(g: GraphTopology, x: int) -> int:
    return int(distances_from(g, x).max())


def diameter(g: GraphTopology) -> int:
    if g.vertex_count <= settings.DENSE_CAP:
        return int(all_pairs_distances(g).max())
    return max(eccentricity(g, x) for x in range(g.vertex_count))


def degree_stats(g: GraphTopology) -> DegreeStats:
    """Maximum degree, minimum degree and their ratio."""
    hi = int(g.degrees.max())
    lo = int(g.degrees.min())
    return DegreeStats(max_degree=hi, min_degree=lo, ratio=hi / lo)


def sphere(dist: np.ndarray, r: int) -> List[int]:
    """Vertices at exactly distance r given a precomputed distance vector."""
    return np.flatnonzero(dist == r).tolist()
