"""
Unit tests for hitting times, Matthews bounds and excursion probabilities.
"""
import numpy as np
import pytest

from src.core.errors import GeometryDegenerate
from src.oracle import (
    excursion_pair_probabilities,
    expected_hitting_times,
    first_excursion_hit_probability,
    harmonic,
    hitting_times_to,
    matthews_bounds,
    stationary_distribution,
)


def test_hitting_times_k3(k3):
    hitting = expected_hitting_times(k3)
    expected = np.full((3, 3), 4.0)
    np.fill_diagonal(expected, 3.0)
    assert np.allclose(hitting, expected)


def test_single_target_matches_matrix(torus2_4):
    hitting = expected_hitting_times(torus2_4)
    assert np.allclose(hitting_times_to(torus2_4, 5), hitting[:, 5])


def test_return_times_are_inverse_pi(cycle6):
    hitting = expected_hitting_times(cycle6)
    assert np.allclose(np.diag(hitting), 1 / stationary_distribution(cycle6))


def test_harmonic():
    assert harmonic(0) == 0.0
    assert harmonic(3) == pytest.approx(11 / 6)


def test_matthews_bounds_complete_graphs(k2, k3):
    bounds3 = matthews_bounds(k3, expected_hitting_times(k3))
    assert bounds3.upper == pytest.approx(22 / 3)
    assert bounds3.lower == pytest.approx(4 * (11 / 6 - 1))
    assert bounds3.lower <= 6.0 <= bounds3.upper

    bounds2 = matthews_bounds(k2, expected_hitting_times(k2))
    assert bounds2.upper == pytest.approx(3.0)


def test_excursion_probability_in_unit_interval(torus2_6):
    p = first_excursion_hit_probability(torus2_6, 0, 1, 2)
    assert 0.0 < p < 1.0


def test_excursion_pairs_shape(torus2_6):
    entries, exits, q = excursion_pair_probabilities(torus2_6, 0, 1, 2)
    assert len(entries) == 4
    assert len(exits) == 10
    assert q.shape == (4, 10)
    finite = q[np.isfinite(q)]
    assert finite.size > 0
    assert np.all((finite >= 0) & (finite <= 1))


def test_excursion_geometry_checks(torus2_4):
    with pytest.raises(GeometryDegenerate):
        first_excursion_hit_probability(torus2_4, 0, 1, 4)
    with pytest.raises(ValueError):
        first_excursion_hit_probability(torus2_4, 0, 2, 2)
