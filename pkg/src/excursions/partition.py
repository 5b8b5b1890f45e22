"""
Partition of the vertices by success-rate-per-step and the cover time predictor.

Vertex x falls in class k when p(x)/T(x), in units of min_degree * eps / |V|,
lies in the half-open interval (k, k + 1]. Class k predicts the cover time
|V| log|V| d_k / (min_degree k eps), with d_k = log|class k| / log|V|.
"""
import logging
import math
from collections import defaultdict
from typing import Dict, List, Optional

from src.core.config import settings
from src.core.errors import InsufficientSamples
from src.core.rng import Stream, replica_rng
from src.excursions.estimators import estimate_success_prob, mean_excursion_length
from src.excursions.trace import resolve_t_mix_uniform
from src.graphs.queries import degree_stats
from src.graphs.topology import GraphTopology
from src.schemas.excursions import ExcursionParams, PartitionReport

logger = logging.getLogger(__name__)


def _vertex_ratio(g: GraphTopology, x: int, params: ExcursionParams, replicas: int, seed: int, threads: Optional[int]) -> float:
    success = estimate_success_prob(g, x, params, replicas, seed, threads)
    if success.mean <= 0 or success.stderr > settings.PARTITION_MAX_REL_STDERR * success.mean:
        raise InsufficientSamples(f"vertex {x}: success estimate {success} too noisy to bucket")
    length = mean_excursion_length(g, [x], params, replicas, seed, threads)
    return success.mean / length.mean


def partition_H(
    g: GraphTopology,
    epsilon: float,
    params: ExcursionParams,
    replicas: int,
    seed: int,
    threads: Optional[int] = None,
) -> PartitionReport:
    """
    Bucket vertices by estimated success rate per step and predict the cover time.

    Vertex-transitive graphs estimate one vertex and share the value. Otherwise
    every vertex is estimated up to the dense cap; above it a uniform sample of
    PARTITION_SAMPLE vertices is estimated and class sizes are scaled up.

    Raises:
        InsufficientSamples: If some vertex's estimate is too noisy, listing the vertices
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    n = g.vertex_count
    params = params.model_copy(update={"t_mix_uniform": resolve_t_mix_uniform(g, params)})
    min_degree = degree_stats(g).min_degree

    extrapolated = False
    if g.vertex_transitive:
        sample = [0]
    elif n <= settings.DENSE_CAP:
        sample = list(range(n))
    else:
        rng = replica_rng(seed, 0, Stream.AUX)
        sample = sorted(rng.choice(n, size=settings.PARTITION_SAMPLE, replace=False).tolist())
        extrapolated = True

    ratios: Dict[int, float] = {}
    noisy: List[int] = []
    for x in sample:
        try:
            ratios[x] = _vertex_ratio(g, x, params, replicas, seed, threads)
        except InsufficientSamples:
            noisy.append(x)
    if noisy:
        raise InsufficientSamples(f"{len(noisy)} vertices too noisy to bucket: {noisy[:20]}")

    classes: Dict[int, List[int]] = defaultdict(list)
    for x, ratio in ratios.items():
        scaled = ratio * n / (min_degree * epsilon)
        k = max(int(math.ceil(scaled)) - 1, 0)
        classes[k].append(x)
    if g.vertex_transitive:
        classes = {k: list(range(n)) for k in classes}

    report = PartitionReport(epsilon=epsilon, extrapolated=extrapolated, ratios=ratios)
    scale = n / len(sample) if extrapolated else 1.0
    for k, members in sorted(classes.items()):
        size = len(members) * scale
        d_k = math.log(size) / math.log(n) if size > 1 else 0.0
        report.classes[k] = sorted(members)
        report.sizes[k] = size
        report.d_k[k] = d_k
        if k == 0:
            logger.warning(f"Class 0 on {g.family.label()} has an unbounded prediction; reduce epsilon")
            report.C_k[k] = math.inf
        else:
            report.C_k[k] = n * math.log(n) * d_k / (min_degree * k * epsilon)
    report.C = max(report.C_k.values())
    logger.info(f"Partition of {g.family.label()}: {len(report.classes)} classes, C = {report.C:.6g}")
    return report
