"""
Generators for the supported graph families.

Vertex identifiers follow a canonical per-family ordering: row-major
coordinates for tori and percolation boxes, binary order for hypercubes and
lexicographic permutation rank for the transposition Cayley graph, and
the center first then arm by arm outward for stars.
"""
import itertools
import logging
from typing import Callable, Dict, List, Tuple

import numpy as np

from src.core.config import settings
from src.core.errors import InvalidSpec, RetryExhausted
from src.core.rng import attempt_rng
from src.graphs.topology import GraphTopology, build_topology
from src.graphs.unionfind import UnionFind
from src.schemas.family import (
    CompleteSpec,
    CycleSpec,
    FamilySpec,
    HypercubeSpec,
    LamplighterSpec,
    PercolationBallSpec,
    RandomRegularSpec,
    StarSpec,
    SymmetricTranspositionsSpec,
    TorusSpec,
)

logger = logging.getLogger(__name__)


def _lattice_neighbors(side: int, d: int, wrap: bool) -> List[List[int]]:
    """Nearest-neighbor lists on the box {0..side-1}^d in row-major order."""
    shape = (side,) * d
    count = side ** d
    coords = np.indices(shape).reshape(d, count)
    neighbor_sets: List[set] = [set() for _ in range(count)]
    for axis in range(d):
        for delta in (-1, 1):
            shifted = coords.copy()
            shifted[axis] += delta
            if wrap:
                shifted[axis] %= side
                valid = np.ones(count, dtype=bool)
            else:
                valid = (shifted[axis] >= 0) & (shifted[axis] < side)
            ids = np.ravel_multi_index(shifted[:, valid], shape)
            for x, y in zip(np.flatnonzero(valid).tolist(), ids.tolist()):
                if x != y:
                    neighbor_sets[x].add(y)
    return [sorted(s) for s in neighbor_sets]


def _torus(spec: TorusSpec) -> GraphTopology:
    return build_topology(_lattice_neighbors(spec.n, spec.d, wrap=True), spec)


def _hypercube(spec: HypercubeSpec) -> GraphTopology:
    count = 1 << spec.n
    neighbors = [sorted(x ^ (1 << i) for i in range(spec.n)) for x in range(count)]
    return build_topology(neighbors, spec)


def _complete(spec: CompleteSpec) -> GraphTopology:
    neighbors = [[y for y in range(spec.n) if y != x] for x in range(spec.n)]
    return build_topology(neighbors, spec)


def _cycle(spec: CycleSpec) -> GraphTopology:
    n = spec.n
    neighbors = [sorted({(x - 1) % n, (x + 1) % n}) for x in range(n)]
    return build_topology(neighbors, spec)


def _star(spec: StarSpec) -> GraphTopology:
    """Arm a holds vertices 1 + a*length .. (a+1)*length, numbered outward from the center."""
    count = 1 + spec.arms * spec.length
    neighbors: List[List[int]] = [[] for _ in range(count)]
    for a in range(spec.arms):
        previous = 0
        for k in range(spec.length):
            v = 1 + a * spec.length + k
            neighbors[previous].append(v)
            neighbors[v].append(previous)
            previous = v
    return build_topology(neighbors, spec)


def _symmetric_transpositions(spec: SymmetricTranspositionsSpec) -> GraphTopology:
    if spec.n > settings.SYMMETRIC_GROUP_CAP:
        raise InvalidSpec(f"S_n capped at n <= {settings.SYMMETRIC_GROUP_CAP}, got {spec.n}")
    perms = list(itertools.permutations(range(spec.n)))
    rank = {p: i for i, p in enumerate(perms)}
    neighbors = []
    for p in perms:
        row = []
        for i, j in itertools.combinations(range(spec.n), 2):
            q = list(p)
            q[i], q[j] = q[j], q[i]
            row.append(rank[tuple(q)])
        neighbors.append(row)
    return build_topology(neighbors, spec)


def _random_regular(spec: RandomRegularSpec) -> GraphTopology:
    """Configuration-model pairing, rejecting loops, multi-edges and disconnected outcomes."""
    stubs = np.repeat(np.arange(spec.n), spec.d)
    for attempt in range(settings.RETRY_LIMIT):
        rng = attempt_rng(spec.seed, attempt)
        pairs = rng.permutation(stubs).reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        canonical = np.sort(pairs, axis=1)
        if np.unique(canonical, axis=0).shape[0] != canonical.shape[0]:
            continue
        neighbors: List[List[int]] = [[] for _ in range(spec.n)]
        for u, w in canonical.tolist():
            neighbors[u].append(w)
            neighbors[w].append(u)
        topology = build_topology(neighbors, spec, require_connected=False)
        if topology.is_connected:
            logger.debug(f"{spec.label()} accepted on attempt {attempt}")
            return topology
    raise RetryExhausted(f"{spec.label()}: no simple connected pairing in {settings.RETRY_LIMIT} attempts")


def box_bonds(spec: PercolationBallSpec) -> np.ndarray:
    """All nearest-neighbor bonds of the box [-n, n]^d as an (m, 2) array of row-major ids."""
    side = 2 * spec.n + 1
    neighbors = _lattice_neighbors(side, spec.d, wrap=False)
    return np.array([(x, y) for x, row in enumerate(neighbors) for y in row if x < y], dtype=np.int64)


def percolation_bonds(spec: PercolationBallSpec, attempt: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Bernoulli bond draws for one attempt of the percolation generator.

    Args:
        spec: Percolation specification
        attempt: Attempt index; each attempt owns an independent stream

    Returns:
        Tuple of (all box bonds, boolean open mask aligned with them)
    """
    bonds = box_bonds(spec)
    rng = attempt_rng(spec.seed, attempt)
    return bonds, rng.random(bonds.shape[0]) < spec.p


def _percolation_ball(spec: PercolationBallSpec) -> GraphTopology:
    box_size = (2 * spec.n + 1) ** spec.d
    if box_size < settings.PERCOLATION_MIN_CLUSTER:
        raise InvalidSpec(
            f"{spec.label()}: box holds {box_size} sites, fewer than {settings.PERCOLATION_MIN_CLUSTER}"
        )
    for attempt in range(settings.RETRY_LIMIT):
        bonds, is_open = percolation_bonds(spec, attempt)
        open_bonds = bonds[is_open]
        uf = UnionFind(box_size)
        for u, w in open_bonds.tolist():
            uf.merge(u, w)
        cluster = uf.largest_component()
        if len(cluster) < settings.PERCOLATION_MIN_CLUSTER:
            continue
        relabel = {site: i for i, site in enumerate(cluster)}
        neighbors: List[List[int]] = [[] for _ in cluster]
        for u, w in open_bonds.tolist():
            if u in relabel and w in relabel:
                neighbors[relabel[u]].append(relabel[w])
                neighbors[relabel[w]].append(relabel[u])
        logger.debug(f"{spec.label()}: cluster of {len(cluster)} sites on attempt {attempt}")
        return build_topology(neighbors, spec)
    raise RetryExhausted(
        f"{spec.label()}: no cluster of {settings.PERCOLATION_MIN_CLUSTER} sites in {settings.RETRY_LIMIT} attempts"
    )


def _lamplighter(spec: LamplighterSpec) -> GraphTopology:
    from src.lamplighter.chain import wreath_graph

    return wreath_graph(generate(spec.base))


_GENERATORS: Dict[str, Callable[..., GraphTopology]] = {
    "torus": _torus,
    "hypercube": _hypercube,
    "complete": _complete,
    "cycle": _cycle,
    "star": _star,
    "symmetric_transpositions": _symmetric_transpositions,
    "random_regular": _random_regular,
    "percolation_ball": _percolation_ball,
    "lamplighter": _lamplighter,
}


def generate(spec: FamilySpec) -> GraphTopology:
    """
    Generate the graph described by a family specification.

    Args:
        spec: Validated family specification

    Returns:
        A connected simple GraphTopology, deterministic in (spec, seed)

    Raises:
        InvalidSpec: If the parameters cannot produce a valid graph
        RetryExhausted: If a rejection sampler fails RETRY_LIMIT times
    """
    try:
        topology = _GENERATORS[spec.kind](spec)
    except ValueError as e:
        raise InvalidSpec(f"{spec.label()}: {e}") from e
    logger.info(f"Generated {topology!r}")
    return topology
