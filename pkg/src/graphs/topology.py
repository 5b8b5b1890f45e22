"""
Immutable graph topology shared by every simulation and oracle computation.

Adjacency is stored in compressed sparse row form: the neighbors of ``x`` are
``indices[indptr[x]:indptr[x + 1]]``, sorted ascending. Arrays are marked
read-only after construction.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import List, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from src.schemas.family import VERTEX_TRANSITIVE_KINDS, FamilySpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GraphTopology:
    """
    A finite, simple, undirected graph with dense vertex identifiers 0..|V|-1.

    Attributes:
        vertex_count: Number of vertices
        indptr: Row pointer array of length vertex_count + 1
        indices: Concatenated sorted neighbor lists
        family: Specification the graph was generated from
        is_connected: Whether the graph is connected
    """

    vertex_count: int
    indptr: np.ndarray
    indices: np.ndarray
    family: FamilySpec
    is_connected: bool

    def neighbors(self, x: int) -> np.ndarray:
        return self.indices[self.indptr[x]:self.indptr[x + 1]]

    def adjacency(self) -> List[List[int]]:
        """Per-vertex sorted neighbor lists."""
        return [self.neighbors(x).tolist() for x in range(self.vertex_count)]

    @cached_property
    def degrees(self) -> np.ndarray:
        degrees = np.diff(self.indptr)
        degrees.setflags(write=False)
        return degrees

    @property
    def edge_count(self) -> int:
        return int(self.indices.size // 2)

    @property
    def vertex_transitive(self) -> bool:
        return self.family.kind in VERTEX_TRANSITIVE_KINDS

    def edges(self) -> np.ndarray:
        """Edge list as an (m, 2) array with u < w, sorted lexicographically."""
        rows = np.repeat(np.arange(self.vertex_count), self.degrees)
        mask = rows < self.indices
        return np.column_stack([rows[mask], self.indices[mask]])

    def to_csr(self) -> csr_matrix:
        data = np.ones(self.indices.size, dtype=np.int8)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.vertex_count, self.vertex_count))

    @cached_property
    def walk_tables(self):
        """Python-list views of the adjacency used by the stepping loops."""
        return self.indptr.tolist(), self.indices.tolist(), self.degrees.tolist()

    @cached_property
    def cumulative_degrees(self) -> np.ndarray:
        return np.cumsum(self.degrees)

    def __repr__(self) -> str:
        return f"<GraphTopology({self.family.label()}, |V|={self.vertex_count}, |E|={self.edge_count})>"


def build_topology(
    neighbor_lists: Sequence[Sequence[int]], family: FamilySpec, require_connected: bool = True
) -> GraphTopology:
    """
    Build and validate a topology from per-vertex neighbor lists.

    Args:
        neighbor_lists: For each vertex, its neighbors (any order, duplicates rejected)
        family: Specification recorded on the topology
        require_connected: Raise if the graph is disconnected

    Returns:
        The validated GraphTopology

    Raises:
        ValueError: On self-loops, duplicate neighbors, asymmetry, isolated vertices
            or (when required) disconnection
    """
    vertex_count = len(neighbor_lists)
    if vertex_count < 1:
        raise ValueError("graph must have at least one vertex")

    indptr = np.zeros(vertex_count + 1, dtype=np.int64)
    chunks = []
    for x, nbrs in enumerate(neighbor_lists):
        row = np.sort(np.asarray(nbrs, dtype=np.int64))
        if row.size == 0:
            raise ValueError(f"vertex {x} has no neighbors")
        if np.any(row == x):
            raise ValueError(f"self-loop at vertex {x}")
        if np.any(row[1:] == row[:-1]):
            raise ValueError(f"duplicate neighbor at vertex {x}")
        if row[0] < 0 or row[-1] >= vertex_count:
            raise ValueError(f"neighbor of vertex {x} out of range")
        chunks.append(row)
        indptr[x + 1] = indptr[x] + row.size
    indices = np.concatenate(chunks)

    data = np.ones(indices.size, dtype=np.int8)
    matrix = csr_matrix((data, indices, indptr), shape=(vertex_count, vertex_count))
    if (matrix != matrix.T).nnz != 0:
        raise ValueError("adjacency is not symmetric")

    components, _ = connected_components(matrix, directed=False)
    is_connected = components == 1
    if require_connected and not is_connected:
        raise ValueError(f"graph has {components} connected components")

    indptr.setflags(write=False)
    indices.setflags(write=False)
    topology = GraphTopology(
        vertex_count=vertex_count,
        indptr=indptr,
        indices=indices,
        family=family,
        is_connected=bool(is_connected),
    )
    logger.debug(f"Built {topology!r}")
    return topology
