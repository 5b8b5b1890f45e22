"""
Exact law of the range and of the Mu marking on tiny graphs.

The range law is propagated over (visited set, position) states, with the
visited set encoded as a bit mask over vertices.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from src.core.config import settings
from src.core.errors import CapExceeded
from src.graphs.topology import GraphTopology
from src.oracle.kernel import stationary_distribution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExactMarkingLaw:
    """
    Attributes:
        horizon: Time T of the range
        range_law: P[range = mask], indexed by mask
        mu: Mu marking law indexed by the mask of 1-bits
        tv: Exact total variation distance between Mu and uniform markings
        second_moment: sum over markings of mu^2 / nu, equal to E 2^{|L cap L'|}
    """

    horizon: int
    range_law: np.ndarray
    mu: np.ndarray
    tv: float
    second_moment: float

    @property
    def tv_upper(self) -> float:
        return 0.5 * math.sqrt(max(self.second_moment - 1.0, 0.0))


def popcounts(n: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    counts = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        counts += (masks >> i) & 1
    return counts


def range_state_law(g: GraphTopology, horizon: int) -> np.ndarray:
    """
    Joint law of (range mask, position) at time horizon from stationarity.

    Returns:
        Array of shape (2^|V|, |V|)
    """
    n = g.vertex_count
    if n > settings.EXACT_STATE_CAP:
        raise CapExceeded(f"exact range law needs |V| <= {settings.EXACT_STATE_CAP}, got {n}")
    masks = np.arange(1 << n, dtype=np.int64)
    law = np.zeros((1 << n, n))
    pi = stationary_distribution(g)
    for x in range(n):
        law[1 << x, x] = pi[x]
    indptr, indices, degrees = g.walk_tables
    for _ in range(horizon):
        nxt = 0.5 * law
        for x in range(n):
            weight = 0.5 / degrees[x]
            for k in range(indptr[x], indptr[x + 1]):
                y = indices[k]
                np.add.at(nxt[:, y], masks | (1 << y), weight * law[:, x])
        law = nxt
    return law


def exact_marking_law(g: GraphTopology, horizon: int) -> ExactMarkingLaw:
    """
    Exact Mu law at time horizon, its distance to uniform and its second moment.

    Raises:
        CapExceeded: If |V| exceeds EXACT_STATE_CAP
    """
    n = g.vertex_count
    range_law = range_state_law(g, horizon).sum(axis=1)
    weights = range_law * np.power(0.5, popcounts(n))

    # mu(f) = sum over ranges R containing f of P(R) 2^{-|R|}
    mu = weights.copy()
    masks = np.arange(1 << n, dtype=np.int64)
    for i in range(n):
        lacking = (masks >> i) & 1 == 0
        mu[lacking] += mu[masks[lacking] | (1 << i)]

    uniform = 0.5 ** n
    tv = 0.5 * float(np.abs(mu - uniform).sum())
    second_moment = float((mu ** 2).sum() / uniform)
    logger.debug(f"Exact marking law on {g.family.label()} at T={horizon}: tv={tv:.6g}, moment={second_moment:.6g}")
    return ExactMarkingLaw(horizon=horizon, range_law=range_law, mu=mu, tv=tv, second_moment=second_moment)
