"""
Tests separating Mu markings from uniform ones.

Replica i draws its range from stream (seed, i, WALK) and its coins from
(seed, i, COINS); the partner walk of an exponential-moment pair uses
(seed, i, PARTNER_WALK). Ranges are nested in the horizon for a fixed replica,
so results on an alpha grid share common random numbers.
"""
import logging
import math
from functools import partial
from typing import List, Tuple

import numpy as np

from src.core.config import settings
from src.core.parallel import map_replicas
from src.core.rng import Stream, replica_rng
from src.graphs.topology import GraphTopology
from src.latepoints.marking import horizon_for, mu_marking, replica_range, sample_marking_uniform, zero_count_statistic
from src.schemas.estimate import Estimate
from src.schemas.latepoints import DistinguisherConfig, DistinguisherResult, ExpMomentResult

logger = logging.getLogger(__name__)


def _mu_replica(replica: int, g: GraphTopology, seed: int, horizon: int) -> Tuple[float, int]:
    visited = replica_range(g, seed, replica, horizon)
    marking = mu_marking(visited, replica_rng(seed, replica, Stream.COINS), horizon=horizon)
    return zero_count_statistic(marking), int(visited.size - visited.sum())


def _rejection(z_values: List[float], threshold: float) -> Estimate:
    return Estimate.from_samples([1.0 if z > threshold else 0.0 for z in z_values])


def distinguisher_power(g: GraphTopology, alpha: float, t_cov_ref: Estimate, config: DistinguisherConfig) -> DistinguisherResult:
    """
    Fraction of Mu markings whose zero-count statistic exceeds the threshold.

    Args:
        g: Graph
        alpha: Fraction of the cover time reference
        t_cov_ref: Cover time reference
        config: Threshold, replica count and seed

    Returns:
        DistinguisherResult with the rejection frequency and per-replica z values
    """
    horizon = horizon_for(alpha, t_cov_ref)
    func = partial(_mu_replica, g=g, seed=config.seed, horizon=horizon)
    outcomes = map_replicas(func, range(config.replicas), threads=config.threads)
    z_values = [z for z, _ in outcomes]
    result = DistinguisherResult(
        alpha=alpha,
        horizon=horizon,
        rejection=_rejection(z_values, config.z_threshold),
        z_values=z_values,
        late_sizes=[size for _, size in outcomes],
    )
    logger.info(f"Distinguisher on {g.family.label()} at alpha={alpha}: rejection {result.rejection}")
    return result


def uniform_z_values(g: GraphTopology, samples: int, seed: int) -> List[float]:
    """Zero-count statistics of uniform markings, replica i on (seed, i, AUX)."""
    return [
        zero_count_statistic(sample_marking_uniform(g, replica_rng(seed, i, Stream.AUX)))
        for i in range(samples)
    ]


def uniform_rejection(g: GraphTopology, config: DistinguisherConfig) -> Estimate:
    """False-rejection frequency of the zero-count test on uniform markings."""
    return _rejection(uniform_z_values(g, config.replicas, config.seed), config.z_threshold)


def _pair_replica(replica: int, g: GraphTopology, seed: int, horizon: int) -> int:
    late = ~replica_range(g, seed, replica, horizon, Stream.WALK)
    partner = ~replica_range(g, seed, replica, horizon, Stream.PARTNER_WALK)
    return int(np.count_nonzero(late & partner))


def exponential_moment(counts: List[int], zeta: float) -> Tuple[float, float, bool]:
    """
    Mean and standard error of exp(zeta * k) over intersection counts.

    Returns:
        Tuple of (mean, stderr, overflow); mean and stderr are inf on overflow
    """
    values = np.asarray(counts, dtype=float)
    if values.size and zeta * values.max() > settings.EXP_MOMENT_OVERFLOW_LOG2 * math.log(2.0):
        return math.inf, math.inf, True
    estimate = Estimate.from_samples(np.exp(zeta * values))
    return estimate.mean, estimate.stderr, False


def tv_upper_from_moment(m_hat: float) -> float:
    """Cauchy-Schwarz bound 1/2 sqrt(m - 1), clamped to [0, 1]."""
    return min(0.5 * math.sqrt(max(m_hat - 1.0, 0.0)), 1.0)


def exp_moment_estimate(g: GraphTopology, alpha: float, t_cov_ref: Estimate, config: DistinguisherConfig) -> ExpMomentResult:
    """
    Estimate E exp(zeta |L cap L'|) over independent late-set pairs.

    The total variation upper bound always uses base 2 (zeta = ln 2), where
    the moment equals the chi-square integral of the Mu marking against the
    uniform one. Overflow is reported with tv_upper = 1.
    """
    horizon = horizon_for(alpha, t_cov_ref)
    func = partial(_pair_replica, g=g, seed=config.seed, horizon=horizon)
    counts = map_replicas(func, range(config.pairs), threads=config.threads)

    m_hat, m_stderr, overflow = exponential_moment(counts, config.zeta)
    base_two, _, base_two_overflow = exponential_moment(counts, math.log(2.0))
    tv_upper = 1.0 if base_two_overflow else tv_upper_from_moment(base_two)
    if overflow or base_two_overflow:
        logger.warning(
            f"Exponential moment overflow on {g.family.label()} at alpha={alpha}: max intersection {max(counts)}"
        )
    result = ExpMomentResult(
        alpha=alpha,
        horizon=horizon,
        zeta=config.zeta,
        m_hat=None if overflow else m_hat,
        m_stderr=None if overflow else m_stderr,
        tv_upper=tv_upper,
        overflow=overflow or base_two_overflow,
        intersections=counts,
    )
    logger.info(f"Exp moment on {g.family.label()} at alpha={alpha}: m_hat={result.m_hat}, tv_upper={tv_upper:.4g}")
    return result
