"""
Unit tests for distance and degree queries.
"""
import numpy as np
import pytest
from unittest.mock import patch

from src.core.errors import CapExceeded
from src.graphs import (
    all_pairs_distances,
    ball,
    degree_stats,
    distance,
    distances_from,
    distances_to_set,
    eccentricity,
    generate,
)
from src.graphs.queries import sphere
from src.graphs.unionfind import UnionFind
from src.schemas.family import CompleteSpec, CycleSpec, HypercubeSpec, PercolationBallSpec, RandomRegularSpec, TorusSpec


def test_ball_radius_zero(cycle6):
    assert ball(cycle6, 2, 0) == {2}


def test_ball_sizes():
    """Test |B(x,1)| = 1 + degree on the 4-cube and the 3-torus."""
    assert len(ball(generate(HypercubeSpec(n=4)), 0, 1)) == 5
    assert len(ball(generate(TorusSpec(d=3, n=10)), 123, 1)) == 7


def test_ball_negative_radius(cycle6):
    with pytest.raises(ValueError):
        ball(cycle6, 0, -1)


def test_distances():
    cube = generate(HypercubeSpec(n=4))
    assert distance(cube, 0b0000, 0b1111) == 4
    assert distance(cube, 5, 5) == 0
    assert distance(generate(CompleteSpec(n=5)), 0, 3) == 1


def test_distances_to_set(cycle6):
    assert distances_to_set(cycle6, [0, 3]).tolist() == [0, 1, 1, 0, 1, 1]
    assert sphere(distances_from(cycle6, 0), 2) == [2, 4]
    with pytest.raises(ValueError):
        distances_to_set(cycle6, [])


def test_all_pairs_matches_bfs(torus2_4):
    matrix = all_pairs_distances(torus2_4)
    for x in range(torus2_4.vertex_count):
        assert np.array_equal(matrix[x], distances_from(torus2_4, x))
    assert eccentricity(torus2_4, 0) == 4


def test_distances_to_set_is_nearest_source():
    g = generate(RandomRegularSpec(d=3, n=30, seed=5))
    matrix = all_pairs_distances(g)
    sources = [3, 17, 22]
    assert np.array_equal(distances_to_set(g, sources), matrix[sources].min(axis=0))
    assert np.array_equal(distances_to_set(g, [17, 3, 17]), distances_to_set(g, sources[:2]))


def test_ball_grows_by_neighborhoods():
    """Test B(x, r+1) is B(x, r) plus its neighbors on a non-regular cluster."""
    g = generate(PercolationBallSpec(d=2, n=4, p=0.7, seed=3))
    for x in (0, g.vertex_count // 2, g.vertex_count - 1):
        inner = ball(g, x, 0)
        assert inner == {x}
        for r in range(5):
            grown = inner | {int(y) for v in inner for y in g.neighbors(v)}
            assert ball(g, x, r + 1) == grown
            inner = grown


@pytest.mark.parametrize(
    "spec",
    [TorusSpec(d=2, n=7), HypercubeSpec(n=5), CycleSpec(n=25), PercolationBallSpec(d=2, n=4, p=0.7, seed=3)],
)
def test_triangle_inequality_on_random_triples(spec):
    g = generate(spec)
    rng = np.random.default_rng(2024)
    for x, y, z in rng.integers(0, g.vertex_count, size=(1000, 3)).tolist():
        assert distance(g, x, z) <= distance(g, x, y) + distance(g, y, z)
        assert distance(g, x, y) == distance(g, y, x)


def test_all_pairs_cap(torus2_4):
    with patch("src.graphs.queries.settings.DENSE_CAP", 8):
        with pytest.raises(CapExceeded):
            all_pairs_distances(torus2_4)


def test_degree_stats():
    assert degree_stats(generate(TorusSpec(d=3, n=6))) == (6, 6, 1.0)
    assert degree_stats(generate(CompleteSpec(n=7))) == (6, 6, 1.0)


def test_union_find_largest_component():
    uf = UnionFind(6)
    uf.merge(0, 1)
    uf.merge(2, 3)
    uf.merge(3, 4)
    assert uf.find(4) == uf.find(2)
    assert uf.largest_component() == [2, 3, 4]
