"""
Exact transition powers of the lazy walk and the mixing quantities built on them.

Powers are computed iteratively, p^{t+1} = p^t P, with the sparse kernel on
the right so one step costs O(|V|^2 * max degree). Only running summaries are
retained.
"""
import logging
from typing import Iterator, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy.sparse import csr_matrix, diags, identity

from src.core.config import settings
from src.core.errors import CapExceeded, HorizonExceeded
from src.core.rng import Stream, replica_rng
from src.graphs.topology import GraphTopology

logger = logging.getLogger(__name__)


def check_dense_cap(g: GraphTopology) -> None:
    if g.vertex_count > settings.DENSE_CAP:
        raise CapExceeded(f"exact computation needs |V| <= {settings.DENSE_CAP}, got {g.vertex_count}")


def sparse_kernel(g: GraphTopology) -> csr_matrix:
    """Lazy kernel as a sparse matrix."""
    adjacency = g.to_csr().astype(float)
    inv_degree = diags(1.0 / g.degrees.astype(float))
    return (0.5 * identity(g.vertex_count, format="csr") + 0.5 * (inv_degree @ adjacency)).tocsr()


def transition_matrix(g: GraphTopology) -> np.ndarray:
    """
    Dense row-stochastic lazy kernel: 1/2 on the diagonal, 1/(2 deg x) to each neighbor.

    Raises:
        CapExceeded: If |V| exceeds the dense cap
    """
    check_dense_cap(g)
    return sparse_kernel(g).toarray()


def stationary_distribution(g: GraphTopology) -> np.ndarray:
    degrees = g.degrees.astype(float)
    return degrees / degrees.sum()


def iter_powers(g: GraphTopology) -> Iterator[Tuple[int, np.ndarray]]:
    """Yield (t, P^t) for t = 0, 1, 2, ..."""
    check_dense_cap(g)
    kernel_t = sparse_kernel(g).T.tocsr()
    power = np.eye(g.vertex_count)
    t = 0
    while True:
        yield t, power
        power = np.ascontiguousarray((kernel_t @ power.T).T)
        t += 1


def tv_distance_rows(power: np.ndarray, pi: np.ndarray) -> np.ndarray:
    """Per-start total variation distance of each row to pi."""
    return 0.5 * np.abs(power - pi).sum(axis=1)


def uniform_deviation(power: np.ndarray, pi: np.ndarray) -> float:
    return float(np.abs(power / pi - 1.0).max())


def _curve(g: GraphTopology, t_max: int, measure) -> np.ndarray:
    pi = stationary_distribution(g)
    values = np.empty(t_max + 1)
    for t, power in iter_powers(g):
        values[t] = measure(power, pi)
        if t == t_max:
            return values


def tv_curve(g: GraphTopology, t_max: int) -> np.ndarray:
    """Worst-start total variation distance d(t) for t = 0..t_max."""
    return _curve(g, t_max, lambda p, pi: float(tv_distance_rows(p, pi).max()))


def uniform_curve(g: GraphTopology, t_max: int) -> np.ndarray:
    """max_{x,y} |p^t(x,y)/pi(y) - 1| for t = 0..t_max."""
    return _curve(g, t_max, uniform_deviation)


def tv_at(g: GraphTopology, t: int, floor: float = 1e-12) -> float:
    """d(t), stopping early once the distance is below floor (d is nonincreasing)."""
    pi = stationary_distribution(g)
    for s, power in iter_powers(g):
        value = float(tv_distance_rows(power, pi).max())
        if s >= t or value <= floor:
            return value


def _first_time(g: GraphTopology, eps: float, measure) -> int:
    pi = stationary_distribution(g)
    for t, power in iter_powers(g):
        if measure(power, pi) <= eps:
            return t
        if t >= settings.ORACLE_MAX_STEPS:
            raise HorizonExceeded(f"{g!r}: distance above {eps} after {t} steps")


def mixing_time(g: GraphTopology, eps: float = 0.25) -> int:
    """Smallest t with worst-start total variation distance at most eps."""
    return _first_time(g, eps, lambda p, pi: float(tv_distance_rows(p, pi).max()))


def uniform_mixing_time(g: GraphTopology, eps: float = 0.25) -> int:
    """Smallest t with every ratio p^t(x,y)/pi(y) within eps of 1."""
    return _first_time(g, eps, uniform_deviation)


def greens_function(g: GraphTopology, horizon: Optional[int] = None) -> np.ndarray:
    """
    Partial sums g(x,y) = sum_{t=1}^{horizon} p^t(x,y).

    Args:
        g: Graph within the dense cap
        horizon: Truncation time, defaults to the uniform mixing time at 1/4

    Returns:
        |V| x |V| matrix whose rows each sum to the horizon
    """
    if horizon is None:
        horizon = uniform_mixing_time(g)
    total = np.zeros((g.vertex_count, g.vertex_count))
    for t, power in iter_powers(g):
        if t > horizon:
            break
        if t >= 1:
            total += power
    return total


def greens_to_set(greens: np.ndarray, x: int, targets) -> float:
    """g(x, A) = sum over y in A of g(x, y)."""
    return float(greens[x, list(targets)].sum())


class DecayPair(BaseModel):
    t: int
    s: int
    tv_lhs: float
    tv_rhs: float
    uniform_lhs: float
    uniform_rhs: float


class DecayReport(BaseModel):
    pairs: List[DecayPair] = Field(default_factory=list)
    holds: bool = True


def mixing_decay_check(g: GraphTopology, pairs: int = 20, seed: int = 0, t_max: Optional[int] = None) -> DecayReport:
    """
    Check sub-multiplicative decay of the mixing distances on sampled (t, s).

    For every pair: d(t+s) <= 4 d(t) d(s) and u(t+s) <= 2 d(t) u(s), where d is
    the worst-start total variation distance and u the uniform deviation.
    """
    if t_max is None:
        t_max = 2 * uniform_mixing_time(g) + 2
    tv = tv_curve(g, 2 * t_max)
    uniform = uniform_curve(g, 2 * t_max)
    rng = replica_rng(seed, 0, Stream.AUX)
    report = DecayReport()
    tol = settings.ROW_SUM_TOL
    for t, s in rng.integers(0, t_max + 1, size=(pairs, 2)).tolist():
        pair = DecayPair(
            t=t,
            s=s,
            tv_lhs=float(tv[t + s]),
            tv_rhs=float(4.0 * tv[t] * tv[s]),
            uniform_lhs=float(uniform[t + s]),
            uniform_rhs=float(2.0 * tv[t] * uniform[s]),
        )
        if pair.tv_lhs > pair.tv_rhs + tol or pair.uniform_lhs > pair.uniform_rhs + tol:
            logger.warning(f"Decay bound violated on {g.family.label()} at t={t}, s={s}")
            report.holds = False
        report.pairs.append(pair)
    return report
