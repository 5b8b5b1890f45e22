"""
Unit tests for late sets and markings.
"""
import numpy as np
import pytest

from src.core.rng import Stream, replica_rng
from src.latepoints import (
    Marking,
    bitwise_means,
    horizon_for,
    late_set,
    pair_correlation,
    sample_marking_mu,
    sample_marking_uniform,
    zero_count_statistic,
)
from src.schemas.estimate import Estimate


def test_zero_count_statistic_extremes():
    """Test z = +10 for all zeros and -10 for all ones on 100 vertices."""
    assert zero_count_statistic(Marking(bits=np.zeros(100, dtype=np.uint8), provenance="uniform")) == pytest.approx(10.0)
    assert zero_count_statistic(Marking(bits=np.ones(100, dtype=np.uint8), provenance="uniform")) == pytest.approx(-10.0)


def test_horizon_for():
    assert horizon_for(0.5, Estimate(mean=101.0)) == 50
    assert horizon_for(0.0, Estimate(mean=7.0)) == 0
    with pytest.raises(ValueError):
        horizon_for(-0.1, Estimate(mean=7.0))
    with pytest.raises(ValueError):
        horizon_for(0.5, Estimate(mean=0.0))


def test_late_set_at_time_zero(torus2_6):
    late = late_set(torus2_6, 0.0, Estimate(mean=100.0), replica_rng(1))
    assert len(late) == torus2_6.vertex_count - 1
    assert late.horizon == 0


def test_mu_marking_zero_off_range(torus2_6):
    t_cov = Estimate(mean=40.0)
    for i in range(20):
        walk, coins = replica_rng(3, i, Stream.WALK), replica_rng(3, i, Stream.COINS)
        marking = sample_marking_mu(torus2_6, 0.25, t_cov, walk, coins)
        visited = late_set(torus2_6, 0.25, t_cov, replica_rng(3, i, Stream.WALK))
        assert marking.provenance == "mu"
        assert marking.horizon == 10
        assert not np.any(marking.bits[visited.vertices])


def test_uniform_marking_bits_fair(torus2_6):
    rng = replica_rng(4)
    stack = np.vstack([sample_marking_uniform(torus2_6, rng).bits for _ in range(4000)])
    means = bitwise_means(stack)
    assert np.all(np.abs(means - 0.5) < 0.04)
    assert abs(pair_correlation(stack, 0, 1)) < 0.1
