"""Per-excursion hit probabilities conditioned on entry and exit vertices."""
import logging
from collections import defaultdict
from typing import Dict, Sequence, Tuple

import numpy as np

from src.core.config import settings
from src.excursions.trace import ExcursionTrace, decompose
from src.graphs.topology import GraphTopology
from src.oracle.hitting import excursion_pair_probabilities
from src.schemas.excursions import ExcursionParams, QReport

logger = logging.getLogger(__name__)

CERTAIN = 1.0 - 1e-12


def _exact_pairs(g: GraphTopology, x: int, params: ExcursionParams) -> Tuple[Dict[Tuple[int, int], float], list]:
    entries, exits, q = excursion_pair_probabilities(g, x, params.r, params.R)
    table = {}
    certain = []
    for i, entry in enumerate(entries):
        for j, exit_ in enumerate(exits):
            if not np.isnan(q[i, j]):
                table[(entry, exit_)] = float(q[i, j])
                if q[i, j] >= CERTAIN:
                    certain.append((entry, exit_))
    return table, certain


def _empirical_pairs(trace: ExcursionTrace) -> Dict[Tuple[int, int], float]:
    hits: Dict[Tuple[int, int], int] = defaultdict(int)
    counts: Dict[Tuple[int, int], int] = defaultdict(int)
    for e in trace.excursions:
        counts[(e.entry, e.exit)] += 1
        hits[(e.entry, e.exit)] += int(e.hit_inner)
    return {pair: hits[pair] / counts[pair] for pair in counts}


def q_statistics(g: GraphTopology, x: int, params: ExcursionParams, trajectory: Sequence[int]) -> QReport:
    """
    q_j for each excursion around x in the trajectory and the running product of (1 - q_j).

    q(entry, exit) is exact from absorbing solves on the R-ball up to the dense
    cap. Above it, q is the empirical hit frequency per (entry, exit) pair in
    the same trajectory and the report is flagged as empirical.
    """
    trace = decompose(g, [x], params, trajectory)
    report = QReport(x=x)
    if g.vertex_count <= settings.DENSE_CAP:
        table, report.certain_pairs = _exact_pairs(g, x, params)
    else:
        logger.warning(f"{g!r} is above the dense cap; q statistics at {x} are empirical")
        table = _empirical_pairs(trace)
        report.empirical = True
        report.certain_pairs = [pair for pair, q in table.items() if q >= CERTAIN]

    product = 1.0
    for e in trace.excursions:
        q = table[(e.entry, e.exit)]
        product *= 1.0 - q
        report.q.append(q)
        report.running_product.append(product)
    report.max_q = max(report.q, default=0.0)
    logger.info(
        f"q statistics at {x} on {g.family.label()}: {len(report.q)} excursions, max q {report.max_q:.4g}, "
        f"{len(report.certain_pairs)} certain pairs"
    )
    return report
