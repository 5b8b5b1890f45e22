"""
Unit tests for the zero-count distinguisher and exponential moments.
"""
import math

import numpy as np
import pytest
from scipy.stats import kstest

from src.graphs import generate
from src.latepoints import distinguisher_power, tv_upper_from_moment, uniform_rejection, uniform_z_values
from src.latepoints.distinguisher import exponential_moment
from src.schemas.estimate import Estimate
from src.schemas.family import TorusSpec
from src.schemas.latepoints import DistinguisherConfig


@pytest.fixture(scope="module")
def torus2_10():
    return generate(TorusSpec(d=2, n=10))


def test_early_markings_always_rejected(torus2_10):
    config = DistinguisherConfig(replicas=50, seed=1)
    result = distinguisher_power(torus2_10, 0.1, Estimate(mean=100.0), config)
    assert result.horizon == 10
    assert result.rejection.mean == 1.0
    assert len(result.z_values) == 50
    assert all(size >= 89 for size in result.late_sizes)


def test_uniform_false_rejection_small(torus2_10):
    rejection = uniform_rejection(torus2_10, DistinguisherConfig(replicas=2000, seed=2))
    assert rejection.mean < 0.01


def test_tv_upper_from_moment():
    assert tv_upper_from_moment(1.0) == 0.0
    assert tv_upper_from_moment(0.5) == 0.0
    assert tv_upper_from_moment(2.0) == pytest.approx(0.5)
    assert tv_upper_from_moment(100.0) == 1.0


def test_exponential_moment_overflow():
    mean, stderr, overflow = exponential_moment([0, 1000], math.log(2.0))
    assert overflow
    assert math.isinf(mean) and math.isinf(stderr)

    mean, _, overflow = exponential_moment([0, 1, 2], math.log(2.0))
    assert not overflow
    assert mean == pytest.approx(7 / 3)


def test_power_nonincreasing_in_alpha(torus2_10):
    """Test that under common random numbers each replica's z, and so the rejection rate, falls as alpha grows."""
    config = DistinguisherConfig(replicas=200, seed=7)
    results = [distinguisher_power(torus2_10, alpha, Estimate(mean=300.0), config) for alpha in (0.05, 0.2, 0.5, 1.0, 2.0)]
    z = np.array([r.z_values for r in results])
    assert np.all(np.diff(z, axis=0) <= 1e-12)
    rejection = [r.rejection.mean for r in results]
    assert rejection == sorted(rejection, reverse=True)
    sizes = np.array([r.late_sizes for r in results])
    assert np.all(np.diff(sizes, axis=0) <= 0)


def test_uniform_z_is_standard_normal():
    """Test the uniform-marking z against N(0, 1) on 512 vertices, spreading each lattice point over its cell."""
    g = generate(TorusSpec(d=3, n=8))
    z = np.array(uniform_z_values(g, 10_000, seed=8))
    cell = 1.0 / math.sqrt(g.vertex_count)
    z = z + np.random.default_rng(8).uniform(-cell, cell, size=z.size)
    assert kstest(z, "norm").pvalue > 0.01
