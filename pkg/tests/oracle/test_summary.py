"""
Unit tests for SpectralSummary building, self-checks and the disk cache.
"""
import numpy as np
import pytest
from unittest.mock import patch

from src.oracle import build_summary, cached_summary, load_summary, save_summary, transience_profile, verify_summary


def test_summary_k3(k3):
    summary = build_summary(k3)
    assert summary.t_mix[0.25] == 1
    assert summary.t_mix_uniform[0.25] == 2
    assert summary.t_hit == pytest.approx(4.0)
    assert np.allclose(summary.greens.sum(axis=1), 2)
    assert verify_summary(summary, k3) == []


def test_summary_saved_and_loaded(tmp_path, torus2_4):
    summary = build_summary(torus2_4, epsilons=(0.25, 0.1))
    save_summary(summary, tmp_path / "torus")
    loaded = load_summary(tmp_path / "torus")
    assert loaded.family == summary.family
    assert loaded.t_mix == summary.t_mix
    assert np.allclose(loaded.hitting, summary.hitting)
    assert np.allclose(loaded.tv_curve, summary.tv_curve)


def test_cached_summary_hits_cache(tmp_path, k3):
    first = cached_summary(k3, tmp_path)
    with patch("src.oracle.summary.build_summary") as mock_build:
        second = cached_summary(k3, tmp_path)
        mock_build.assert_not_called()
    assert second.t_mix_uniform == first.t_mix_uniform


def test_transience_profile_monotone(torus2_6):
    profile = transience_profile(torus2_6, r_max=3, s_max=2)
    assert profile.shape == (4, 3)
    assert np.all(np.diff(profile, axis=0) <= 1e-12)
