"""
Unit tests for seeded streams and the replica pool.
"""
import numpy as np
import pytest

from src.core.parallel import map_replicas
from src.core.rng import Stream, attempt_rng, replica_rng


def test_same_triple_same_stream():
    a = replica_rng(42, 3, Stream.COINS).random(5)
    b = replica_rng(42, 3, Stream.COINS).random(5)
    assert np.array_equal(a, b)


def test_streams_differ():
    walk = replica_rng(42, 3, Stream.WALK).random(5)
    coins = replica_rng(42, 3, Stream.COINS).random(5)
    other_replica = replica_rng(42, 4, Stream.WALK).random(5)
    assert not np.array_equal(walk, coins)
    assert not np.array_equal(walk, other_replica)


def test_attempt_rng_is_aux_stream():
    assert np.array_equal(attempt_rng(7, 2).random(3), replica_rng(7, 2, Stream.AUX).random(3))


def test_negative_seed_rejected():
    with pytest.raises(ValueError):
        replica_rng(-1)


def test_map_replicas_serial_order():
    assert map_replicas(abs, [-3, 1, -2], threads=1) == [3, 1, 2]
