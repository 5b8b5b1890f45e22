"""
Unit tests for transition powers and mixing times.
"""
import numpy as np
import pytest
from unittest.mock import patch

from src.core.errors import CapExceeded
from src.oracle import (
    greens_function,
    greens_to_set,
    mixing_decay_check,
    mixing_time,
    stationary_distribution,
    transition_matrix,
    tv_at,
    tv_curve,
    uniform_curve,
    uniform_mixing_time,
)


def test_transition_matrix_k3(k3):
    expected = np.array([[0.5, 0.25, 0.25], [0.25, 0.5, 0.25], [0.25, 0.25, 0.5]])
    assert np.allclose(transition_matrix(k3), expected)


def test_rows_stochastic_and_pi_fixed(torus2_4):
    kernel = transition_matrix(torus2_4)
    pi = stationary_distribution(torus2_4)
    assert np.allclose(kernel.sum(axis=1), 1.0)
    assert np.allclose(pi @ kernel, pi)


def test_mixing_times_complete_graphs(k2, k3):
    assert mixing_time(k2) == 1
    assert mixing_time(k3) == 1
    assert uniform_mixing_time(k2) == 1
    assert uniform_mixing_time(k3) == 2


def test_k3_curves_match_eigenvalue(k3):
    """Test P^t(x,x) = 1/3 + 2/3 * 4^-t on K_3 through both curves."""
    t = np.arange(6)
    diagonal = 1 / 3 + (2 / 3) * 0.25**t
    assert np.allclose(tv_curve(k3, 5), diagonal - 1 / 3)
    assert np.allclose(uniform_curve(k3, 5), 3 * diagonal - 1)


def test_tv_curve_nonincreasing(cycle20):
    curve = tv_curve(cycle20, 200)
    assert curve[0] == pytest.approx(1 - 1 / 20)
    assert np.all(np.diff(curve) <= 1e-12)


def test_tv_at(k3):
    assert tv_at(k3, 1) == pytest.approx(1 / 6)
    assert tv_at(k3, 0) == pytest.approx(2 / 3)


def test_greens_complete_two(k2):
    assert np.allclose(greens_function(k2), 0.5)


def test_greens_rows_sum_to_horizon(torus2_4):
    horizon = uniform_mixing_time(torus2_4)
    greens = greens_function(torus2_4)
    assert np.allclose(greens.sum(axis=1), horizon)
    assert greens_to_set(greens, 0, range(16)) == pytest.approx(horizon)


def test_mixing_decay_holds(torus2_4):
    report = mixing_decay_check(torus2_4, pairs=30, seed=1)
    assert report.holds
    assert len(report.pairs) == 30


def test_dense_cap(k3):
    with patch("src.oracle.kernel.settings.DENSE_CAP", 2):
        with pytest.raises(CapExceeded):
            transition_matrix(k3)
