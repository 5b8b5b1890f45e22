"""
Monte Carlo estimators built on excursion decompositions.

Replica i walks on stream (seed, i, WALK) from a stationary start.
"""
import logging
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.core.config import settings
from src.core.errors import HorizonExceeded
from src.core.parallel import map_replicas
from src.core.rng import Stream, replica_rng
from src.excursions.trace import ExcursionTracker, decompose, excursion_count, excursion_geometry, excursion_windows
from src.graphs.topology import GraphTopology
from src.oracle.hitting import hitting_times_to
from src.oracle.kernel import stationary_distribution
from src.schemas.estimate import Estimate
from src.schemas.excursions import ConcentrationResult, ExcursionParams, HittingPrediction, OccupationResult
from src.walker.walk import iter_trajectory, safety_horizon, sample_stationary, trajectory

logger = logging.getLogger(__name__)


def _run_tracker(
    g: GraphTopology,
    tracker: ExcursionTracker,
    rng: np.random.Generator,
    done: Callable[[ExcursionTracker], bool],
) -> ExcursionTracker:
    cap = safety_horizon(g)
    for t, x in enumerate(iter_trajectory(g, sample_stationary(g, rng), rng)):
        tracker.feed(t, x)
        if done(tracker):
            return tracker
        if t >= cap:
            raise HorizonExceeded(f"{g!r}: excursion not completed within {cap} steps")


def _first_cycle(
    replica: int, g: GraphTopology, dist: List[int], params: ExcursionParams, gap: int, window: int, seed: int
) -> Tuple[bool, int]:
    """Hit flag of excursion 0 and the cycle length tau_1 - tau_0."""
    tracker = ExcursionTracker(dist=dist, r=params.r, R=params.R, gap=gap, window=window)
    _run_tracker(g, tracker, replica_rng(seed, replica, Stream.WALK), lambda tr: len(tr.entry_times) >= 2)
    return tracker.completed[0].hit, tracker.entry_times[1] - tracker.entry_times[0]


def _cycles(
    g: GraphTopology,
    targets: Sequence[int],
    params: ExcursionParams,
    replicas: int,
    seed: int,
    threads: Optional[int],
    windows: Optional[Tuple[int, int]] = None,
) -> List[Tuple[bool, int]]:
    dist = excursion_geometry(g, targets, params).tolist()
    gap, window = windows if windows is not None else excursion_windows(g, params)
    func = partial(_first_cycle, g=g, dist=dist, params=params, gap=gap, window=window, seed=seed)
    return map_replicas(func, range(replicas), threads=threads)


def estimate_success_prob(
    g: GraphTopology, x: int, params: ExcursionParams, replicas: int, seed: int, threads: Optional[int] = None
) -> Estimate:
    """
    Frequency, over stationary starts, that the first excursion around x hits x
    within its window.

    Raises:
        GeometryDegenerate: If R reaches the eccentricity of x
    """
    outcomes = _cycles(g, [x], params, replicas, seed, threads)
    estimate = Estimate.from_samples([float(hit) for hit, _ in outcomes])
    logger.info(f"Success probability at {x} on {g.family.label()} (r={params.r}, R={params.R}): {estimate}")
    return estimate


def mean_excursion_length(
    g: GraphTopology, targets: Sequence[int], params: ExcursionParams, replicas: int, seed: int, threads: Optional[int] = None
) -> Estimate:
    """Mean of tau_1 - tau_0 with no remix gap and no post-exit window."""
    outcomes = _cycles(g, targets, params, replicas, seed, threads, windows=(0, 0))
    estimate = Estimate.from_samples([cycle for _, cycle in outcomes])
    logger.info(f"Mean excursion length around {list(targets)} on {g.family.label()}: {estimate}")
    return estimate


def occupation_ratio(g: GraphTopology, x: int, params: ExcursionParams, horizon: int, seed: int) -> OccupationResult:
    """
    Mean time at x per excursion window over the mean cycle length, against pi(x).

    Both means come from a single stationary-start trajectory of the given length.
    """
    rng = replica_rng(seed, 0, Stream.WALK)
    path = trajectory(g, sample_stationary(g, rng), horizon, rng)
    trace = decompose(g, [x], params, path)
    if len(trace) < 2:
        raise HorizonExceeded(f"only {len(trace)} excursions around {x} in {horizon} steps")
    on_target = Estimate.from_samples([e.time_on_target for e in trace.excursions])
    cycle = Estimate.from_samples(trace.cycle_lengths())
    occupation = on_target.mean / cycle.mean
    pi_x = float(stationary_distribution(g)[x])
    result = OccupationResult(
        x=x,
        occupation=occupation,
        stationary=pi_x,
        ratio=occupation / pi_x,
        mean_time_on_target=on_target,
        mean_cycle=cycle,
        excursions=len(trace),
    )
    logger.info(f"Occupation at {x} on {g.family.label()}: ratio {result.ratio:.4g} over {len(trace)} excursions")
    return result


def hitting_prediction(
    g: GraphTopology, x: int, params: ExcursionParams, replicas: int, seed: int, threads: Optional[int] = None
) -> HittingPrediction:
    """
    Predict E_pi tau(x) as mean cycle length over first-excursion success frequency.

    The exact side is the single-target absorbing solve; above the dense cap
    only the prediction is returned.
    """
    outcomes = _cycles(g, [x], params, replicas, seed, threads)
    success = Estimate.from_samples([float(hit) for hit, _ in outcomes])
    cycle = Estimate.from_samples([c for _, c in outcomes])
    predicted = cycle.mean / success.mean if success.mean > 0 else float("inf")
    result = HittingPrediction(x=x, predicted=predicted, mean_cycle=cycle, success=success)
    if g.vertex_count > settings.DENSE_CAP:
        logger.warning(f"{g!r} is above the dense cap; hitting prediction at {x} left unvalidated")
        return result
    exact = float(stationary_distribution(g) @ hitting_times_to(g, x))
    result.exact = exact
    result.relative_error = abs(predicted - exact) / exact
    logger.info(f"Hitting prediction at {x} on {g.family.label()}: {predicted:.6g} vs exact {exact:.6g}")
    return result


def excursion_concentration(
    g: GraphTopology, x: int, params: ExcursionParams, horizon: int, seed: int, mean_cycle: Optional[float] = None
) -> ConcentrationResult:
    """
    N(x, T) * (mean cycle) / T for one trajectory of length T.

    The mean cycle defaults to an independent estimate from 64 first cycles
    under master seed seed + 1.
    """
    rng = replica_rng(seed, 0, Stream.WALK)
    path = trajectory(g, sample_stationary(g, rng), horizon, rng)
    trace = decompose(g, [x], params, path)
    if mean_cycle is None:
        reference = _cycles(g, [x], params, 64, seed + 1, threads=None)
        mean_cycle = float(np.mean([c for _, c in reference]))
    count = excursion_count(trace, horizon)
    return ConcentrationResult(x=x, horizon=horizon, count=count, mean_cycle=mean_cycle, ratio=count * mean_cycle / horizon)


def _hit_prefix(replica: int, g: GraphTopology, dist: List[int], params: ExcursionParams, gap: int, window: int, seed: int, k: int) -> List[bool]:
    tracker = ExcursionTracker(dist=dist, r=params.r, R=params.R, gap=gap, window=window)
    _run_tracker(g, tracker, replica_rng(seed, replica, Stream.WALK), lambda tr: len(tr.completed) >= k)
    return [e.hit for e in tracker.completed[:k]]


def success_variance(
    g: GraphTopology,
    x: int,
    params: ExcursionParams,
    ks: Sequence[int],
    batches: int,
    seed: int,
    threads: Optional[int] = None,
) -> Dict[int, float]:
    """
    Across independent batches, the variance of the mean hit indicator over the
    first k excursions, for each k.

    Returns:
        Mapping k -> variance
    """
    dist = excursion_geometry(g, [x], params).tolist()
    gap, window = excursion_windows(g, params)
    k_max = max(ks)
    func = partial(_hit_prefix, g=g, dist=dist, params=params, gap=gap, window=window, seed=seed, k=k_max)
    hits = np.asarray(map_replicas(func, range(batches), threads=threads), dtype=float)
    return {k: float(hits[:, :k].mean(axis=1).var(ddof=1)) for k in ks}
