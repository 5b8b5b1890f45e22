"""
Unit tests for the excursion decomposition.
"""
import itertools

import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError
from unittest.mock import patch

from src.core.errors import CapExceeded, GeometryDegenerate, TargetsTooClose
from src.core.rng import replica_rng
from src.excursions import decompose, excursion_count, excursion_geometry, resolve_t_mix_uniform, write_trace_csv
from src.schemas.excursions import ExcursionParams
from src.walker import sample_stationary, trajectory


def _params(**kwargs) -> ExcursionParams:
    return ExcursionParams(**{"r": 1, "R": 3, "beta": 0.0, "alpha_window": 0.0, "t_mix_uniform": 2, **kwargs})


def test_decompose_without_windows(cycle20):
    path = [0, 1, 2, 3, 4, 3, 2, 1, 0, 19, 18, 17, 16]
    trace = decompose(cycle20, [0], _params(), path)
    assert len(trace) == 2
    assert trace.taus.tolist() == [1, 7]
    assert trace.hits.tolist() == [False, True]
    first, second = trace.excursions
    assert (first.entry, first.exit, first.sigma) == (1, 4, 4)
    assert (second.entry, second.exit, second.sigma) == (1, 16, 12)
    assert second.time_on_target == 1
    assert trace.cycle_lengths().tolist() == [6]


def test_hit_in_post_exit_window(cycle20):
    """Test a return to the target after exit counts as a hit but not an inner hit."""
    path = [1, 2, 3, 4, 3, 2, 1, 0, 1]
    trace = decompose(cycle20, [0], _params(beta=2.0, alpha_window=2.0), path)
    assert (trace.gap, trace.window) == (4, 4)
    assert len(trace) == 1
    excursion = trace.excursions[0]
    assert excursion.hit
    assert not excursion.hit_inner


def test_remix_gap_delays_next_entry(cycle20):
    path = [1, 2, 3, 4, 3, 2, 1, 0, 1, 2, 1, 2, 3, 4, 5, 6]
    trace = decompose(cycle20, [0], _params(beta=3.0, alpha_window=1.0), path)
    assert (trace.gap, trace.window) == (6, 2)
    assert trace.taus.tolist() == [0, 10]


def test_open_excursion_dropped(cycle20):
    trace = decompose(cycle20, [0], _params(), [1, 2, 1, 0, 1, 2])
    assert len(trace) == 0


def test_excursion_count(cycle20):
    path = [0, 1, 2, 3, 4, 3, 2, 1, 0, 19, 18, 17, 16]
    trace = decompose(cycle20, [0], _params(), path)
    assert excursion_count(trace, 7) == 1
    assert excursion_count(trace, 8) == 2


def test_targets_too_close(torus2_6):
    with pytest.raises(TargetsTooClose):
        excursion_geometry(torus2_6, [0, 1], _params(R=2))


def test_geometry_degenerate(torus2_4):
    with pytest.raises(GeometryDegenerate):
        excursion_geometry(torus2_4, [0], _params(R=4))


def test_params_ordering():
    with pytest.raises(ValidationError):
        ExcursionParams(r=3, R=3)
    with pytest.raises(ValidationError):
        ExcursionParams(beta=1.0, alpha_window=2.0)


def test_resolve_t_mix_uniform(k3, torus2_4):
    assert resolve_t_mix_uniform(torus2_4, _params(t_mix_uniform=17)) == 17
    assert resolve_t_mix_uniform(k3, ExcursionParams(r=1, R=2)) == 2
    with patch("src.excursions.trace.settings.DENSE_CAP", 2):
        with pytest.raises(CapExceeded):
            resolve_t_mix_uniform(k3, ExcursionParams(r=1, R=2))


def test_write_trace_csv(tmp_path, cycle20):
    trace = decompose(cycle20, [0], _params(), [0, 1, 2, 3, 4, 3, 2, 1, 0, 19, 18, 17, 16])
    frame = pd.read_csv(write_trace_csv(trace, tmp_path / "trace.csv"))
    assert list(frame.columns) == ["k", "tau", "sigma", "entry", "exit", "hit", "time_on_target"]
    assert frame["hit"].tolist() == [0, 1]

    tagged = pd.read_csv(write_trace_csv(trace, tmp_path / "tagged.csv", seed=3, replica=0))
    assert list(tagged.columns[:3]) == ["seed", "replica", "k"]
    assert tagged["seed"].tolist() == [3, 3]


def _stopping_times(d, r, R, gap, window):
    """(tau, sigma, steps on target) per completed excursion, scanning d(X_t, E) directly."""
    n = len(d)
    found = []
    earliest = 0
    while True:
        tau = next((t for t in range(earliest, n) if d[t] == r), None)
        if tau is None:
            return found
        sigma = next((t for t in range(tau + 1, n) if d[t] > R), None)
        if sigma is None or sigma + window > n - 1:
            return found
        found.append((tau, sigma, sum(1 for t in range(tau, sigma + window + 1) if d[t] == 0)))
        earliest = sigma + gap


FUZZ_CASES = [
    ("torus2_6", [0], 1, 2),
    ("cycle20", [0], 1, 3),
    ("cycle20", [0], 2, 5),
    ("cycle20", [0, 10], 1, 3),
]
FUZZ_TIMINGS = [(0.0, 0.0), (0.5, 0.0), (0.5, 0.5), (1.5, 0.7), (3.0, 3.0)]


@pytest.mark.parametrize("name,targets,r,R", FUZZ_CASES)
def test_decompose_agrees_with_direct_scan(request, name, targets, r, R):
    """Test random stationary-start walks against stopping times read straight off the distance sequence."""
    g = request.getfixturevalue(name)
    timings = itertools.cycle(FUZZ_TIMINGS)
    for replica in range(250):
        beta, alpha_window = next(timings)
        params = ExcursionParams(r=r, R=R, beta=beta, alpha_window=alpha_window, t_mix_uniform=10)
        rng = replica_rng(99, replica)
        path = trajectory(g, sample_stationary(g, rng), 300, rng)
        trace = decompose(g, targets, params, path)
        d = excursion_geometry(g, targets, params)[path]

        want = _stopping_times(d.tolist(), r, R, trace.gap, trace.window)
        assert [(e.tau, e.sigma, e.time_on_target) for e in trace.excursions] == want
        for k, e in enumerate(trace.excursions):
            assert d[e.tau] == r and e.entry == path[e.tau]
            assert d[e.sigma] > R and e.exit == path[e.sigma]
            assert np.all(d[e.tau + 1:e.sigma] <= R)
            assert e.sigma + trace.window <= len(path) - 1
            assert e.hit == (e.time_on_target > 0)
            assert e.hit_inner == bool(np.any(d[e.tau:e.sigma + 1] == 0))
            if k + 1 < len(trace):
                following = trace.excursions[k + 1]
                assert e.tau <= e.sigma < following.tau
                assert following.tau >= e.sigma + trace.gap
