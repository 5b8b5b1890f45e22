"""
Unit tests for the transience profile.
"""
import itertools

import numpy as np
import pytest

from src.graphs import all_pairs_distances, generate
from src.oracle import greens_function, transience_profile
from src.oracle.transience import maximal_clustered_sets
from src.schemas.family import CycleSpec, RandomRegularSpec, StarSpec, TorusSpec


def _exhaustive_profile(greens: np.ndarray, dist: np.ndarray, r_max: int, s_max: int) -> np.ndarray:
    """Maximum of g(x, A) over every nonempty vertex subset A, straight from the definition."""
    n = dist.shape[0]
    profile = np.zeros((r_max + 1, s_max + 1))
    for size in range(1, n + 1):
        for members in itertools.combinations(range(n), size):
            idx = list(members)
            diam = int(dist[np.ix_(idx, idx)].max())
            if diam > s_max:
                continue
            values = greens[:, idx].sum(axis=1)
            to_set = dist[:, idx].min(axis=1)
            for r in range(r_max + 1):
                admissible = to_set >= r
                if admissible.any():
                    best = values[admissible].max()
                    profile[r, diam:] = np.maximum(profile[r, diam:], best)
    return profile


@pytest.mark.parametrize(
    "spec",
    [
        RandomRegularSpec(d=3, n=10, seed=0),
        RandomRegularSpec(d=3, n=10, seed=4),
        RandomRegularSpec(d=4, n=11, seed=2),
        StarSpec(arms=3, length=3),
    ],
)
def test_profile_matches_exhaustive_maximum(spec):
    """Test the profile equals the maximum over every admissible set on non-transitive graphs."""
    g = generate(spec)
    greens = greens_function(g)
    dist = all_pairs_distances(g)
    got = transience_profile(g, r_max=3, s_max=2, greens=greens, dist=dist)
    want = _exhaustive_profile(greens, dist, r_max=3, s_max=2)
    np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-12)


def test_maximal_sets_cover_every_vertex(torus2_4):
    dist = all_pairs_distances(torus2_4)
    singletons = list(maximal_clustered_sets(dist, 0))
    assert sorted(m[0] for m in singletons) == list(range(16))
    for s in (1, 2):
        sets = list(maximal_clustered_sets(dist, s))
        assert set(itertools.chain.from_iterable(sets)) == set(range(16))
        for members in sets:
            assert dist[np.ix_(members, members)].max() <= s


def test_profile_on_complete_graph(k5):
    """Test on K5 the best set at r = 0 is all of V and nothing is two steps away."""
    greens = greens_function(k5)
    profile = transience_profile(k5, r_max=2, s_max=1, greens=greens)
    assert profile[0, 1] == pytest.approx(greens[0].sum())
    assert profile[0, 0] == pytest.approx(greens.max())
    assert profile[2].tolist() == [0.0, 0.0]


def test_transient_torus_decays_faster_than_recurrent_cycle():
    torus = transience_profile(generate(TorusSpec(d=3, n=8)), r_max=4, s_max=1)
    cycle = transience_profile(generate(CycleSpec(n=40)), r_max=4, s_max=1)
    assert np.all(np.diff(torus[:, 1]) <= 0)
    assert torus[4, 1] / torus[1, 1] < 0.5
    assert torus[4, 1] / torus[1, 1] < cycle[4, 1] / cycle[1, 1]
    assert cycle[4, 1] > 5 * torus[4, 1]
