"""
Unit tests for the exact range and marking laws.
"""
import math

import numpy as np
import pytest
from unittest.mock import patch

from src.core.errors import CapExceeded
from src.latepoints import exact_marking_law, exp_moment_estimate, range_state_law, tv_upper_from_moment
from src.schemas.estimate import Estimate
from src.schemas.latepoints import DistinguisherConfig


def test_range_law_is_distribution(k3):
    law = range_state_law(k3, 3)
    assert law.shape == (8, 3)
    assert law.sum() == pytest.approx(1.0)
    assert law[0].sum() == 0.0


def test_range_law_k3_one_step(k3):
    masses = range_state_law(k3, 1).sum(axis=1)
    singletons = masses[[1, 2, 4]].sum()
    assert singletons == pytest.approx(0.5)


def test_marking_law_complete_two_at_time_zero(k2):
    law = exact_marking_law(k2, 0)
    assert np.allclose(law.mu, [0.5, 0.25, 0.25, 0.0])
    assert law.tv == pytest.approx(0.25)
    assert law.second_moment == pytest.approx(1.5)


def test_moment_bound_dominates_exact_tv(cycle6):
    for horizon in (0, 4, 16, 64):
        law = exact_marking_law(cycle6, horizon)
        assert law.mu.sum() == pytest.approx(1.0)
        assert tv_upper_from_moment(law.second_moment) >= law.tv - 1e-12


def test_monte_carlo_moment_matches_exact(k3):
    """Test E 2^{|L cap L'|} from simulated pairs against the exact chi-square integral."""
    exact = exact_marking_law(k3, 2)
    config = DistinguisherConfig(zeta=math.log(2.0), pairs=8000, seed=5)
    result = exp_moment_estimate(k3, 1.0, Estimate(mean=2.0), config)
    assert result.horizon == 2
    assert not result.overflow
    assert abs(result.m_hat - exact.second_moment) <= 4 * result.m_stderr


def test_exact_state_cap(k3):
    with patch("src.latepoints.exact.settings.EXACT_STATE_CAP", 2):
        with pytest.raises(CapExceeded):
            range_state_law(k3, 1)
