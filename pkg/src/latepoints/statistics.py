"""Late-set sizes, coverage frequencies and correlation of late points."""
import logging
import math
from functools import partial
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.stats import binomtest

from src.core.config import settings
from src.core.errors import InsufficientEvents
from src.core.parallel import map_replicas
from src.graphs.topology import GraphTopology
from src.latepoints.marking import horizon_for, replica_range
from src.schemas.estimate import Estimate
from src.schemas.latepoints import CorrelationResult, LateExponentResult

logger = logging.getLogger(__name__)


def _visited_replica(replica: int, g: GraphTopology, seed: int, horizon: int) -> np.ndarray:
    return replica_range(g, seed, replica, horizon)


def sample_ranges(
    g: GraphTopology, horizon: int, replicas: int, seed: int, threads: Optional[int] = None
) -> np.ndarray:
    """Stack of visited vectors, shape (replicas, |V|)."""
    func = partial(_visited_replica, g=g, seed=seed, horizon=horizon)
    return np.vstack(map_replicas(func, range(replicas), threads=threads))


def late_exponent(
    g: GraphTopology, alpha: float, t_cov_ref: Estimate, replicas: int, seed: int, threads: Optional[int] = None
) -> LateExponentResult:
    """log E|L(alpha)| / log|V|; exponent is None when no late point was seen."""
    horizon = horizon_for(alpha, t_cov_ref)
    visited = sample_ranges(g, horizon, replicas, seed, threads)
    sizes = (g.vertex_count - visited.sum(axis=1)).astype(int).tolist()
    mean_size = Estimate.from_samples(sizes)
    exponent = math.log(mean_size.mean) / math.log(g.vertex_count) if mean_size.mean > 0 else None
    logger.info(f"Late set on {g.family.label()} at alpha={alpha}: mean size {mean_size}, exponent {exponent}")
    return LateExponentResult(alpha=alpha, horizon=horizon, mean_size=mean_size, exponent=exponent, sizes=sizes)


def coverage_frequency(
    g: GraphTopology, alpha: float, t_cov_ref: Estimate, replicas: int, seed: int, threads: Optional[int] = None
) -> np.ndarray:
    """Per-vertex frequency of lying in the range at floor(alpha * T_cov)."""
    visited = sample_ranges(g, horizon_for(alpha, t_cov_ref), replicas, seed, threads)
    return visited.mean(axis=0)


def correlation_ratio(
    g: GraphTopology,
    alpha: float,
    t_cov_ref: Estimate,
    points: Sequence[int],
    replicas: int,
    seed: int,
    threads: Optional[int] = None,
) -> CorrelationResult:
    """
    Joint late probability of the given points against the product of marginals.

    Below MIN_JOINT_EVENTS joint events the ratio is withheld and a Wilson
    interval for it is reported instead.

    Raises:
        InsufficientEvents: If some point was never late, so the ratio is undefined
    """
    points = list(points)
    if len(set(points)) != len(points):
        raise ValueError(f"points must be distinct, got {points}")
    horizon = horizon_for(alpha, t_cov_ref)
    late = ~sample_ranges(g, horizon, replicas, seed, threads)[:, points]
    single_counts = late.sum(axis=0)
    if np.any(single_counts == 0):
        raise InsufficientEvents(f"some of {points} never late in {replicas} replicas at alpha={alpha}")
    joint_count = int(np.all(late, axis=1).sum())
    p_single = (single_counts / replicas).tolist()
    product = float(np.prod(p_single))
    p_joint = joint_count / replicas
    reference = g.vertex_count ** (-len(points) * alpha)

    result = CorrelationResult(
        alpha=alpha,
        horizon=horizon,
        points=points,
        replicas=replicas,
        p_joint=p_joint,
        p_single=p_single,
        product=product,
        joint_count=joint_count,
        reference=reference,
    )
    if len(points) == 1:
        result.ratio = 1.0
    elif joint_count < settings.MIN_JOINT_EVENTS:
        ci = binomtest(joint_count, replicas).proportion_ci(confidence_level=0.95, method="wilson")
        result.insufficient = True
        result.ratio_interval = (ci.low / product, ci.high / product)
        logger.warning(
            f"Only {joint_count} joint late events for {points}; reporting interval {result.ratio_interval}"
        )
    else:
        result.ratio = p_joint / product
    return result


def write_late_csv(columns: Dict[str, List], path: Union[str, Path], seed: Optional[int] = None) -> Path:
    """
    Per-replica artifact (late-set sizes, z statistics, intersection counts).

    Rows are numbered as replicas 0.. unless a ``replica`` column is given.
    When ``seed`` is set it leads the row so each value names its stream.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(columns)
    if "replica" not in frame.columns:
        frame.insert(0, "replica", range(len(frame)))
    if seed is not None:
        frame.insert(0, "seed", seed)
    frame.to_csv(path, index=False, float_format=settings.FLOAT_FORMAT)
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path
