"""Transience profile from the Green's matrix."""
import logging
from typing import Iterator, List, Optional

import networkx as nx
import numpy as np

from src.graphs.queries import all_pairs_distances
from src.graphs.topology import GraphTopology
from src.oracle.kernel import greens_function

logger = logging.getLogger(__name__)


def maximal_clustered_sets(dist: np.ndarray, s: int) -> Iterator[List[int]]:
    """
    Every inclusion-maximal vertex set of diameter at most s.

    These are the maximal cliques of the graph joining vertices at distance
    1..s, so s = 0 yields the singletons.
    """
    close = (dist <= s) & (dist > 0)
    yield from nx.find_cliques(nx.from_numpy_array(close.astype(np.int8)))


def transience_profile(
    g: GraphTopology,
    r_max: int,
    s_max: int = 2,
    greens: Optional[np.ndarray] = None,
    dist: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Table rho[r, s] = max of g(x, A) over x and sets A with diam(A) <= s and
    d(x, A) >= r.

    Every admissible A sits inside a maximal set M of diameter <= s, and
    g(x, .) is nonnegative, so the maximum is attained on M restricted to the
    vertices at distance >= r from x. The table is exact; the number of
    maximal sets grows quickly with s, so keep s small.

    Args:
        g: Graph within the dense cap
        r_max: Largest distance r tabulated
        s_max: Largest set diameter s tabulated
        greens: Precomputed Green's matrix, computed if omitted
        dist: Precomputed all-pairs distances, computed if omitted

    Returns:
        Array of shape (r_max + 1, s_max + 1), nonincreasing down each column.
        Entries with no admissible (x, A) are 0.
    """
    if greens is None:
        greens = greens_function(g)
    if dist is None:
        dist = all_pairs_distances(g)
    profile = np.zeros((r_max + 1, s_max + 1))
    for s in range(s_max + 1):
        count = 0
        for members in maximal_clustered_sets(dist, s):
            count += 1
            weights = greens[:, members]
            gaps = dist[:, members]
            for r in range(r_max + 1):
                best = float(np.where(gaps >= r, weights, 0.0).sum(axis=1).max())
                if best > profile[r, s]:
                    profile[r, s] = best
        logger.debug(f"{count} maximal sets of diameter <= {s} in {g.family.label()}")
    return profile
