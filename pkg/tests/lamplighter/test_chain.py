"""
Unit tests for the lamplighter chain and its ensemble simulator.
"""
import numpy as np
import pytest
from unittest.mock import patch

from src.core.errors import CapExceeded
from src.core.rng import replica_rng
from src.lamplighter import (
    LampState,
    empirical_tv_curve,
    lamp_marginals,
    lamplighter_step,
    simulate_ensemble,
    stationary_law,
    wreath_graph,
)
from src.lamplighter.exact import per_start_tv


def test_wreath_state_counts(k2, k3):
    small = wreath_graph(k2)
    large = wreath_graph(k3)
    assert small.vertex_count == 8
    assert large.vertex_count == 24
    assert np.all(small.degrees == 4)
    assert np.all(large.degrees == 8)
    assert small.family.kind == "lamplighter"


def test_wreath_cap(k3):
    with patch("src.lamplighter.chain.settings.WREATH_CAP", 2):
        with pytest.raises(CapExceeded):
            wreath_graph(k3)


def test_lamp_state_encoding():
    state = LampState(lamps=np.array([1, 0, 1], dtype=np.uint8), position=2)
    assert state.mask == 5
    assert state.encode() == "2:5"
    assert state.state_id() == 17
    decoded = LampState.decode("2:5", 3)
    assert np.array_equal(decoded.lamps, state.lamps)
    assert decoded.position == 2
    with pytest.raises(ValueError):
        LampState.decode("0:f", 3)


def test_step_touches_only_current_and_next(torus2_4):
    rng = replica_rng(1)
    state = LampState(lamps=rng.integers(0, 2, size=16).astype(np.uint8), position=0)
    for _ in range(500):
        nxt = lamplighter_step(torus2_4, state, rng)
        changed = set(np.flatnonzero(nxt.lamps != state.lamps).tolist())
        assert changed <= {state.position, nxt.position}
        assert nxt.position == state.position or nxt.position in torus2_4.neighbors(state.position).tolist()
        state = nxt


def test_stationary_law_sums_to_one(k3):
    law = stationary_law(k3)
    assert law.shape == (8, 3)
    assert law.sum() == pytest.approx(1.0)


def test_ensemble_starts_all_off(torus2_4):
    lamps, positions = simulate_ensemble(torus2_4, 0, 50, seed=2, start=3)
    assert not lamps.any()
    assert np.all(positions == 3)


def test_lamp_marginals_become_fair(torus2_4):
    early = lamp_marginals(torus2_4, 0, 200, seed=3)
    late = lamp_marginals(torus2_4, 2000, 4000, seed=3)
    assert not early.any()
    assert np.all(np.abs(late.mean(axis=0) - 0.5) < 0.05)


def test_empirical_curve_matches_exact(k2):
    exact = per_start_tv(k2, 6)[:, 0]
    empirical = empirical_tv_curve(k2, 6, replicas=100_000, seed=4, start=0)
    assert empirical[0] == pytest.approx(exact[0])
    assert np.all(np.abs(empirical - exact) < 0.02)
