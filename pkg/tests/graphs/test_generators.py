"""
Unit tests for the graph family generators.
"""
import numpy as np
import pytest
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from unittest.mock import patch

from src.core.errors import InvalidSpec, RetryExhausted
from src.graphs import degree_stats, diameter, generate, percolation_bonds
from src.schemas.family import (
    CompleteSpec,
    CycleSpec,
    HypercubeSpec,
    PercolationBallSpec,
    RandomRegularSpec,
    StarSpec,
    SymmetricTranspositionsSpec,
    TorusSpec,
    parse_family,
)


def test_torus_structure():
    """Test a small torus is 4-regular on 9 vertices."""
    g = generate(TorusSpec(d=2, n=3))
    assert g.vertex_count == 9
    assert set(g.degrees.tolist()) == {4}
    assert g.edge_count == 18


def test_hypercube_structure():
    """Test the 3-cube has 8 vertices of degree 3 and diameter 3."""
    g = generate(HypercubeSpec(n=3))
    assert g.vertex_count == 8
    assert set(g.degrees.tolist()) == {3}
    assert diameter(g) == 3


def test_complete_edge_count():
    """Test K_4 has 6 edges."""
    g = generate(CompleteSpec(n=4))
    assert g.vertex_count == 4
    assert g.edge_count == 6


def test_cycle_is_two_regular():
    g = generate(CycleSpec(n=7))
    assert g.edge_count == 7
    assert g.neighbors(0).tolist() == [1, 6]


def test_symmetric_transpositions():
    """Test S_4 with transpositions is 6-regular on 24 vertices."""
    g = generate(SymmetricTranspositionsSpec(n=4))
    assert g.vertex_count == 24
    assert set(g.degrees.tolist()) == {6}


def test_symmetric_group_cap():
    with patch("src.graphs.generators.settings.SYMMETRIC_GROUP_CAP", 3):
        with pytest.raises(InvalidSpec):
            generate(SymmetricTranspositionsSpec(n=4))


def test_random_regular_is_simple_connected_and_deterministic():
    spec = RandomRegularSpec(d=3, n=50, seed=4)
    g = generate(spec)
    h = generate(spec)
    assert g.is_connected
    assert set(g.degrees.tolist()) == {3}
    assert np.array_equal(g.indices, h.indices)


def test_random_regular_retry_exhausted():
    """Test the pairing sampler gives up after the retry limit."""
    with patch("src.graphs.generators.settings.RETRY_LIMIT", 0):
        with pytest.raises(RetryExhausted):
            generate(RandomRegularSpec(d=3, n=10))


def test_random_regular_parity_rejected():
    with pytest.raises(InvalidSpec):
        parse_family({"kind": "random_regular", "d": 3, "n": 7})


def test_percolation_cluster_matches_union_find_oracle():
    """Test the extracted cluster against an independent connectivity oracle on the same bonds."""
    spec = PercolationBallSpec(d=3, n=8, p=0.4, seed=7)
    g = generate(spec)
    bonds, is_open = percolation_bonds(spec, 0)
    open_bonds = bonds[is_open]
    size = 17 ** 3
    matrix = coo_matrix((np.ones(len(open_bonds)), (open_bonds[:, 0], open_bonds[:, 1])), shape=(size, size))
    _, labels = connected_components(matrix, directed=False)
    largest = np.bincount(labels).max()

    assert g.is_connected
    assert g.vertex_count == largest
    stats = degree_stats(g)
    assert stats.min_degree >= 1
    assert stats.max_degree <= 6


def test_percolation_box_too_small():
    with pytest.raises(InvalidSpec):
        generate(PercolationBallSpec(d=1, n=2, p=0.9))


def test_generation_is_labelled_with_family():
    spec = TorusSpec(d=3, n=4)
    g = generate(spec)
    assert g.family == spec
    assert g.vertex_transitive
    assert "Torus" in repr(g)


def test_star_structure():
    """Test a star with long arms is a tree whose only branching vertex is the center."""
    g = generate(StarSpec(arms=3, length=4))
    assert g.vertex_count == 13
    assert g.edge_count == 12
    assert g.degrees[0] == 3
    assert g.neighbors(0).tolist() == [1, 5, 9]
    assert sorted(g.degrees[1:].tolist()) == [1, 1, 1] + [2] * 9
    assert diameter(g) == 8
    assert not g.vertex_transitive

    plain = generate(StarSpec(arms=5))
    assert degree_stats(plain) == (5, 1, 5.0)
    with pytest.raises(InvalidSpec):
        parse_family({"kind": "star", "arms": 1})
