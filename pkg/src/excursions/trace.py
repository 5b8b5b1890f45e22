"""
Excursion decomposition of a trajectory around a target set E.

With d = d(., E): excursion k enters at tau_k, the first time at or after
sigma_{k-1} + gap with d = r (tau_0 is the first such time at all), and exits
at sigma_k, the first time after tau_k with d > R. Its window runs to
sigma_k + window. Excursions still open when the trajectory ends are dropped.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from src.core.config import settings
from src.core.errors import CapExceeded, GeometryDegenerate, TargetsTooClose
from src.graphs.queries import distances_from, distances_to_set
from src.graphs.topology import GraphTopology
from src.oracle.kernel import uniform_mixing_time
from src.schemas.excursions import ExcursionParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Excursion:
    tau: int
    sigma: int
    entry: int
    exit: int
    hit: bool           # E visited in [tau, sigma + window]
    hit_inner: bool     # E visited in [tau, sigma]
    time_on_target: int


@dataclass(frozen=True)
class ExcursionTrace:
    targets: Tuple[int, ...]
    params: ExcursionParams
    gap: int
    window: int
    excursions: Tuple[Excursion, ...]

    def __len__(self) -> int:
        return len(self.excursions)

    @property
    def taus(self) -> np.ndarray:
        return np.array([e.tau for e in self.excursions], dtype=np.int64)

    @property
    def hits(self) -> np.ndarray:
        return np.array([e.hit for e in self.excursions], dtype=bool)

    def cycle_lengths(self) -> np.ndarray:
        """tau_{k+1} - tau_k over consecutive recorded excursions."""
        return np.diff(self.taus)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "k": range(len(self.excursions)),
                "tau": [e.tau for e in self.excursions],
                "sigma": [e.sigma for e in self.excursions],
                "entry": [e.entry for e in self.excursions],
                "exit": [e.exit for e in self.excursions],
                "hit": [int(e.hit) for e in self.excursions],
                "time_on_target": [e.time_on_target for e in self.excursions],
            }
        )


class _Phase(Enum):
    SEEK = 0
    INSIDE = 1
    WINDOW = 2


@dataclass
class ExcursionTracker:
    """Streaming state machine; feed positions in time order."""

    dist: Sequence[int]
    r: int
    R: int
    gap: int
    window: int
    completed: List[Excursion] = field(default_factory=list)
    entry_times: List[int] = field(default_factory=list)
    _phase: _Phase = _Phase.SEEK
    _earliest: int = 0
    _tau: int = 0
    _entry: int = -1
    _sigma: int = 0
    _exit: int = -1
    _hit_inner: bool = False
    _hit_after: bool = False
    _on_target: int = 0

    def _start(self, t: int, x: int) -> None:
        self._phase = _Phase.INSIDE
        self._tau, self._entry = t, x
        self._hit_inner = self._hit_after = False
        self._on_target = 0
        self.entry_times.append(t)

    def _complete(self) -> None:
        self.completed.append(
            Excursion(
                tau=self._tau,
                sigma=self._sigma,
                entry=self._entry,
                exit=self._exit,
                hit=self._hit_inner or self._hit_after,
                hit_inner=self._hit_inner,
                time_on_target=self._on_target,
            )
        )
        self._phase = _Phase.SEEK
        self._earliest = self._sigma + self.gap

    def feed(self, t: int, x: int) -> bool:
        """Process X(t) = x; returns True when an excursion completed at t."""
        d = self.dist[x]
        if self._phase is _Phase.SEEK:
            if t >= self._earliest and d == self.r:
                self._start(t, x)
            return False
        if self._phase is _Phase.INSIDE:
            if d == 0:
                self._hit_inner = True
                self._on_target += 1
            if d > self.R:
                self._sigma, self._exit = t, x
                self._phase = _Phase.WINDOW
                if self.window == 0:
                    self._complete()
                    return True
            return False
        if d == 0:
            self._hit_after = True
            self._on_target += 1
        if t >= self._sigma + self.window:
            self._complete()
            if t >= self._earliest and d == self.r:
                self._start(t, x)
            return True
        return False


def resolve_t_mix_uniform(g: GraphTopology, params: ExcursionParams) -> int:
    """
    T_mix^U from the parameters, or from the oracle when the graph is small enough.

    Raises:
        CapExceeded: If T_mix^U is not supplied and the graph is above the dense cap
    """
    if params.t_mix_uniform is not None:
        return params.t_mix_uniform
    if g.vertex_count > settings.DENSE_CAP:
        raise CapExceeded(f"{g!r} is above the dense cap; supply t_mix_uniform in the excursion parameters")
    return uniform_mixing_time(g)


def excursion_windows(g: GraphTopology, params: ExcursionParams) -> Tuple[int, int]:
    """Resolve (gap, window) in steps."""
    t_mix_uniform = resolve_t_mix_uniform(g, params)
    return params.gap(t_mix_uniform), params.window(t_mix_uniform)


def excursion_geometry(g: GraphTopology, targets: Iterable[int], params: ExcursionParams) -> np.ndarray:
    """
    Distance vector d(., E) after validating the geometry.

    Raises:
        TargetsTooClose: If two targets are closer than 2R
        GeometryDegenerate: If no vertex lies beyond R or the r-sphere is empty
    """
    targets = sorted(set(targets))
    for i, e in enumerate(targets[:-1]):
        dist_e = distances_from(g, e)
        close = [f for f in targets[i + 1:] if dist_e[f] < 2 * params.R]
        if close:
            raise TargetsTooClose(f"targets {e} and {close[0]} are closer than 2R = {2 * params.R}")
    dist = distances_to_set(g, targets)
    if not np.any(dist > params.R):
        raise GeometryDegenerate(f"no vertex of {g!r} lies beyond distance {params.R} of {targets}")
    if not np.any(dist == params.r):
        raise GeometryDegenerate(f"sphere of radius {params.r} around {targets} is empty")
    return dist


def decompose(
    g: GraphTopology,
    targets: Iterable[int],
    params: ExcursionParams,
    trajectory: Sequence[int],
    windows: Optional[Tuple[int, int]] = None,
) -> ExcursionTrace:
    """
    Split a trajectory into excursions around the target set.

    Args:
        g: Graph the trajectory lives on
        targets: Target set E
        params: Radii and timing multipliers
        trajectory: Positions X(0), X(1), ...
        windows: Precomputed (gap, window), resolved from params if omitted

    Returns:
        ExcursionTrace with every excursion completed inside the trajectory
    """
    targets = tuple(sorted(set(targets)))
    dist = excursion_geometry(g, targets, params).tolist()
    gap, window = windows if windows is not None else excursion_windows(g, params)
    tracker = ExcursionTracker(dist=dist, r=params.r, R=params.R, gap=gap, window=window)
    for t, x in enumerate(np.asarray(trajectory).tolist()):
        tracker.feed(t, x)
    return ExcursionTrace(
        targets=targets, params=params, gap=gap, window=window, excursions=tuple(tracker.completed)
    )


def excursion_count(trace: ExcursionTrace, horizon: int) -> int:
    """N(x, T): number of recorded excursions entered before time T."""
    return int(np.count_nonzero(trace.taus < horizon))


def write_trace_csv(
    trace: ExcursionTrace, path: Union[str, Path], seed: Optional[int] = None, replica: Optional[int] = None
) -> Path:
    """One row per excursion, led by the (seed, replica) of the walk when given."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = trace.to_frame()
    if replica is not None:
        frame.insert(0, "replica", replica)
    if seed is not None:
        frame.insert(0, "seed", seed)
    frame.to_csv(path, index=False)
    logger.info(f"Wrote {len(trace)} excursions to {path}")
    return path
