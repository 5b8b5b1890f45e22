"""Replica ensembles of cover runs."""
import logging
from functools import partial
from pathlib import Path
from typing import List, Optional, Union

import pandas as pd

from src.core.config import settings
from src.core.parallel import map_replicas
from src.graphs.topology import GraphTopology
from src.schemas.estimate import Estimate
from src.walker.walk import RangeRecord, WalkConfig, run_until_cover

logger = logging.getLogger(__name__)


def _cover_replica(replica: int, g: GraphTopology, seed: int, start) -> RangeRecord:
    return run_until_cover(g, WalkConfig(seed=seed, replica_index=replica, start=start))


def cover_times(
    g: GraphTopology,
    replicas: int,
    seed: int,
    threads: Optional[int] = None,
    start: Union[int, str] = "stationary",
) -> List[RangeRecord]:
    """Independent cover runs for replicas 0..replicas-1, in replica order."""
    func = partial(_cover_replica, g=g, seed=seed, start=start)
    return map_replicas(func, range(replicas), threads=threads)


def estimate_cover_time(
    g: GraphTopology, replicas: int, seed: int, threads: Optional[int] = None
) -> Estimate:
    """
    Monte Carlo estimate of the expected cover time from stationarity.

    Args:
        g: Connected graph
        replicas: Number of independent runs (at least 2)
        seed: Master seed
        threads: Worker processes, defaults to settings.THREADS

    Returns:
        Estimate with the sample mean and standard error of the cover time
    """
    if replicas < 2:
        raise ValueError(f"need at least 2 replicas, got {replicas}")
    records = cover_times(g, replicas, seed, threads=threads)
    estimate = Estimate.from_samples([r.cover_time for r in records])
    logger.info(f"Cover time of {g.family.label()}: {estimate}")
    return estimate


def reference_cover_time(g: GraphTopology, seed: int, replicas: Optional[int] = None, threads: Optional[int] = None) -> Estimate:
    """The T_cov reference every alpha is converted through."""
    return estimate_cover_time(g, replicas or settings.T_COV_REPLICAS, seed, threads=threads)


def write_replicas_csv(
    records: List[RangeRecord], path: Union[str, Path], first_hit: bool = False, seed: Optional[int] = None
) -> Path:
    """One row per replica: [seed,] replica, start, cover_time and optionally first_hit_<v> columns."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(
        {
            "replica": range(len(records)),
            "start": [r.start for r in records],
            "cover_time": [r.cover_time for r in records],
        }
    )
    if first_hit and records:
        hits = pd.DataFrame(
            [r.first_hit for r in records],
            columns=[f"first_hit_{v}" for v in range(records[0].first_hit.size)],
        )
        frame = pd.concat([frame, hits], axis=1)
    if seed is not None:
        frame.insert(0, "seed", seed)
    frame.to_csv(path, index=False, float_format=settings.FLOAT_FORMAT)
    logger.info(f"Wrote {len(records)} replica rows to {path}")
    return path
