"""
SpectralSummary: the exact per-graph quantities, with disk persistence.

On disk a summary is a directory holding ``summary.txt`` (YAML key-value
header) and CSV matrices ``greens.csv``, ``hitting.csv``, ``stationary.csv``
and ``curves.csv``.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
import yaml

from src.core.config import settings
from src.core.errors import HorizonExceeded
from src.graphs.queries import all_pairs_distances
from src.graphs.topology import GraphTopology
from src.oracle.hitting import expected_hitting_times
from src.oracle.kernel import iter_powers, stationary_distribution, transition_matrix, tv_distance_rows, uniform_deviation
from src.schemas.family import FamilySpec, family_digest, parse_family

logger = logging.getLogger(__name__)

DEFAULT_EPSILONS = (0.25, 0.125)


@dataclass(frozen=True)
class SpectralSummary:
    """
    Exact quantities for one graph.

    Attributes:
        family: Specification of the summarized graph
        t_mix: eps -> total variation mixing time
        t_mix_uniform: eps -> uniform mixing time
        greens: Green's matrix truncated at t_mix_uniform[0.25]
        hitting: Matrix of E_x tau(y)
        t_hit: Largest entry of hitting
        stationary: Stationary distribution
        tv_curve: Worst-start total variation distance per t
        uniform_curve: Worst uniform deviation per t
    """

    family: FamilySpec
    t_mix: Dict[float, int]
    t_mix_uniform: Dict[float, int]
    greens: np.ndarray
    hitting: np.ndarray
    t_hit: float
    stationary: np.ndarray
    tv_curve: np.ndarray
    uniform_curve: np.ndarray

    @property
    def greens_horizon(self) -> int:
        return self.t_mix_uniform[0.25]


def build_summary(g: GraphTopology, epsilons: Sequence[float] = DEFAULT_EPSILONS) -> SpectralSummary:
    """
    Compute every exact quantity in one sweep over transition powers.

    Raises:
        CapExceeded: Above the dense cap
        HorizonExceeded: If the uniform deviation has not dropped below every
            eps within ORACLE_MAX_STEPS
    """
    epsilons = sorted(set(epsilons) | {0.25})
    target = min(epsilons)
    pi = stationary_distribution(g)
    n = g.vertex_count
    tv_values: List[float] = []
    uniform_values: List[float] = []
    running = np.zeros((n, n))
    greens = None
    for t, power in iter_powers(g):
        tv_values.append(float(tv_distance_rows(power, pi).max()))
        uniform_values.append(uniform_deviation(power, pi))
        if t >= 1:
            running += power
        if greens is None and uniform_values[-1] <= 0.25:
            greens = running.copy()
        if uniform_values[-1] <= target:
            break
        if t >= settings.ORACLE_MAX_STEPS:
            raise HorizonExceeded(f"{g!r}: uniform deviation above {target} after {t} steps")

    tv = np.asarray(tv_values)
    uniform = np.asarray(uniform_values)
    t_mix = {eps: int(np.argmax(tv <= eps)) for eps in epsilons}
    t_mix_uniform = {eps: int(np.argmax(uniform <= eps)) for eps in epsilons}
    hitting = expected_hitting_times(g)
    summary = SpectralSummary(
        family=g.family,
        t_mix=t_mix,
        t_mix_uniform=t_mix_uniform,
        greens=greens,
        hitting=hitting,
        t_hit=float(hitting.max()),
        stationary=pi,
        tv_curve=tv,
        uniform_curve=uniform,
    )
    for problem in verify_summary(summary, g):
        logger.warning(f"Oracle self-check on {g.family.label()}: {problem}")
    logger.info(
        f"Summary of {g.family.label()}: t_mix={t_mix[0.25]}, t_mix_uniform={t_mix_uniform[0.25]}, t_hit={summary.t_hit:.6g}"
    )
    return summary


def verify_summary(summary: SpectralSummary, g: GraphTopology) -> List[str]:
    """
    Self-checks of a summary against its graph.

    Returns:
        Human-readable descriptions of every violated identity (empty if all hold)
    """
    problems = []
    kernel = transition_matrix(g)
    pi = summary.stationary

    if not np.array_equal(pi, stationary_distribution(g)):
        problems.append("stationary vector differs from deg/sum(deg)")
    row_drift = float(np.abs(kernel.sum(axis=1) - 1.0).max())
    if row_drift > settings.ROW_SUM_TOL:
        problems.append(f"kernel row sums drift by {row_drift:.3g}")
    fixed_drift = float(np.abs(pi @ kernel - pi).max())
    if fixed_drift > settings.STATIONARY_TOL:
        problems.append(f"pi is not fixed by the kernel (drift {fixed_drift:.3g})")
    flow = pi[:, None] * kernel
    if float(np.abs(flow - flow.T).max()) > settings.ROW_SUM_TOL:
        problems.append("kernel is not reversible with respect to pi")

    greens_drift = float(np.abs(summary.greens.sum(axis=1) - summary.greens_horizon).max())
    if greens_drift > settings.ROW_SUM_TOL * max(summary.greens_horizon, 1):
        problems.append(f"Green's rows do not sum to the horizon (drift {greens_drift:.3g})")

    off = summary.hitting.copy()
    np.fill_diagonal(off, 0.0)
    returns = 1.0 + (kernel * off.T).sum(axis=1)
    return_drift = float(np.abs(returns * pi - 1.0).max())
    if return_drift > settings.RETURN_TIME_TOL:
        problems.append(f"return times differ from 1/pi (relative drift {return_drift:.3g})")

    if np.any(np.diff(summary.tv_curve) > settings.ROW_SUM_TOL):
        problems.append("total variation curve increases")
    for eps, t in summary.t_mix.items():
        if t > summary.t_mix_uniform[eps]:
            problems.append(f"t_mix({eps}) = {t} exceeds t_mix_uniform({eps}) = {summary.t_mix_uniform[eps]}")
    if np.any(summary.hitting + settings.RETURN_TIME_TOL < all_pairs_distances(g)):
        problems.append("some expected hitting time is below the graph distance")
    return problems


def _matrix_csv(matrix: np.ndarray, path: Path) -> None:
    pd.DataFrame(matrix).to_csv(path, index=False, float_format=settings.FLOAT_FORMAT)


def save_summary(summary: SpectralSummary, directory: Union[str, Path]) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    header = {
        "family": summary.family.model_dump(mode="json"),
        "digest": family_digest(summary.family),
        "t_hit": summary.t_hit,
        "t_mix": summary.t_mix,
        "t_mix_uniform": summary.t_mix_uniform,
        "greens_horizon": summary.greens_horizon,
        "version": settings.VERSION,
    }
    with open(directory / "summary.txt", "w", encoding="utf-8") as f:
        yaml.safe_dump(header, f, sort_keys=True)
    _matrix_csv(summary.greens, directory / "greens.csv")
    _matrix_csv(summary.hitting, directory / "hitting.csv")
    pd.DataFrame({"stationary": summary.stationary}).to_csv(
        directory / "stationary.csv", index=False, float_format=settings.FLOAT_FORMAT
    )
    pd.DataFrame(
        {"t": np.arange(summary.tv_curve.size), "tv": summary.tv_curve, "uniform": summary.uniform_curve}
    ).to_csv(directory / "curves.csv", index=False, float_format=settings.FLOAT_FORMAT)
    logger.info(f"Saved summary of {summary.family.label()} to {directory}")
    return directory


def load_summary(directory: Union[str, Path]) -> SpectralSummary:
    directory = Path(directory)
    with open(directory / "summary.txt", "r", encoding="utf-8") as f:
        header = yaml.safe_load(f)
    curves = pd.read_csv(directory / "curves.csv")
    return SpectralSummary(
        family=parse_family(header["family"]),
        t_mix={float(k): int(v) for k, v in header["t_mix"].items()},
        t_mix_uniform={float(k): int(v) for k, v in header["t_mix_uniform"].items()},
        greens=pd.read_csv(directory / "greens.csv").to_numpy(dtype=float),
        hitting=pd.read_csv(directory / "hitting.csv").to_numpy(dtype=float),
        t_hit=float(header["t_hit"]),
        stationary=pd.read_csv(directory / "stationary.csv")["stationary"].to_numpy(dtype=float),
        tv_curve=curves["tv"].to_numpy(dtype=float),
        uniform_curve=curves["uniform"].to_numpy(dtype=float),
    )


def cached_summary(g: GraphTopology, cache_dir: Optional[Union[str, Path]] = None) -> SpectralSummary:
    """Load the summary keyed by the family digest, building and saving it on a miss."""
    directory = Path(cache_dir or settings.CACHE_DIR) / family_digest(g.family)
    if (directory / "summary.txt").exists():
        logger.debug(f"Oracle cache hit for {g.family.label()}")
        return load_summary(directory)
    summary = build_summary(g)
    save_summary(summary, directory)
    return summary
