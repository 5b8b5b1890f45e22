"""
Seeded random streams.

Every replica owns its generators. A stream is identified by the master seed,
the replica index and a stream tag; the mapping to bits is numpy's
SeedSequence hash, so the same triple always yields the same stream.
"""
from enum import IntEnum

import numpy as np


class Stream(IntEnum):
    """Independent streams available to one replica."""

    WALK = 0
    COINS = 1
    PARTNER_WALK = 2
    AUX = 3


def replica_rng(seed: int, replica: int = 0, stream: Stream = Stream.WALK) -> np.random.Generator:
    """
    Build the generator for one (seed, replica, stream) triple.

    Args:
        seed: Master 64-bit seed
        replica: Replica index
        stream: Which of the replica's streams to open

    Returns:
        A PCG64-backed numpy Generator
    """
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(replica), int(stream)))
    return np.random.Generator(np.random.PCG64(sequence))


def attempt_rng(seed: int, attempt: int) -> np.random.Generator:
    """Generator for the attempt-th try of a rejection sampler."""
    return replica_rng(seed, attempt, Stream.AUX)
