"""Replica fan-out."""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from src.core.config import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def map_replicas(func: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """
    Apply a per-replica function to every item, preserving item order.

    Args:
        func: Module-level (picklable) function run once per replica
        items: Per-replica arguments
        threads: Worker processes; one or fewer runs in-process

    Returns:
        Results in the same order as items
    """
    workers = settings.THREADS if threads is None else threads
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [func(item) for item in items]

    chunksize = max(1, len(items) // (4 * workers))
    logger.debug(f"Dispatching {len(items)} replicas to {workers} workers (chunksize {chunksize})")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=chunksize))
