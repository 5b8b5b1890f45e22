"""
Unit tests for the exact lamplighter total variation curves.
"""
import numpy as np
import pytest
from unittest.mock import patch

from src.core.errors import CapExceeded
from src.lamplighter import exact_tv_curve, exact_tv_report, per_start_tv, stationary_law
from src.lamplighter.exact import _flip_index, pushforward
from src.latepoints import exact_marking_law
from src.oracle import stationary_distribution, transition_matrix


def _explicit_kernel(g) -> np.ndarray:
    """Lamplighter kernel over state ids mask * n + x, built straight from the step rule."""
    n = g.vertex_count
    base = transition_matrix(g)
    kernel = np.zeros((n << n, n << n))
    for mask in range(1 << n):
        for x in range(n):
            for y in range(n):
                if base[x, y] == 0:
                    continue
                touched = {x, y}
                cleared = mask & ~sum(1 << v for v in touched)
                outcomes = [cleared]
                for v in touched:
                    outcomes = [o | bit << v for o in outcomes for bit in (0, 1)]
                for other in outcomes:
                    kernel[mask * n + x, other * n + y] += base[x, y] / len(outcomes)
    return kernel


def test_tv_at_time_zero(k3):
    """Test TV(0) = 1 - pi(start) from an all-off start."""
    values = per_start_tv(k3, 0)
    pi = stationary_distribution(k3)
    assert np.allclose(values[0], 1 - pi / 8)


def test_pushforward_matches_explicit_kernel(k3):
    kernel = _explicit_kernel(k3)
    assert np.allclose(kernel.sum(axis=1), 1.0)
    flip = _flip_index(3)
    dist = np.zeros((8, 3))
    dist[0, 1] = 1.0
    row = dist.reshape(-1)
    for _ in range(5):
        dist = pushforward(dist, transition_matrix(k3), flip)
        row = row @ kernel
        assert np.allclose(dist.reshape(-1), row)


def test_stationary_law_is_fixed(cycle6):
    law = stationary_law(cycle6)
    nxt = pushforward(law, transition_matrix(cycle6), _flip_index(6))
    assert np.allclose(nxt, law)


def test_curve_nonincreasing_to_zero(k3):
    curve = exact_tv_curve(k3, 40)
    assert np.all(np.diff(curve) <= 1e-12)
    assert curve[-1] < 1e-3


def test_lamps_follow_marking_law(k3):
    """Test the lamp law from a stationary position matches the marking law for T >= 1."""
    kernel, flip = transition_matrix(k3), _flip_index(3)
    dist = np.zeros((8, 3))
    dist[0] = stationary_distribution(k3)
    for horizon in range(1, 5):
        dist = pushforward(dist, kernel, flip)
        assert np.allclose(dist.sum(axis=1), exact_marking_law(k3, horizon).mu)


def test_report(cycle6):
    report = exact_tv_report(cycle6, 200)
    assert len(report.tv) == 201
    assert report.mixing_time is not None
    assert report.tv[report.mixing_time] <= 0.25
    assert report.tv[report.mixing_time - 1] > 0.25
    assert 0 <= report.worst_start < 6

    short = exact_tv_report(cycle6, 2)
    assert short.mixing_time is None


def test_exact_cap(k3):
    with patch("src.lamplighter.exact.settings.EXACT_STATE_CAP", 2):
        with pytest.raises(CapExceeded):
            per_start_tv(k3, 1)
