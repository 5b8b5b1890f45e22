"""
Desk-scale acceptance suite run by ``--check``.

Each check returns a CheckResult; a check that raises is recorded as failed
with the exception text. ``scale`` multiplies every replica count so a quick
pass can trade power for time.
"""
import logging
import math
import tempfile
from pathlib import Path
from typing import Callable, List

import numpy as np
from pydantic import BaseModel

from src.cli.runner import replay, run
from src.core.rng import Stream, replica_rng
from src.excursions import excursion_concentration, hitting_prediction, occupation_ratio, partition_H
from src.graphs import distances_from, generate
from src.lamplighter import cutoff_probe, empirical_tv_curve, exact_tv_curve, lamp_marginals
from src.latepoints import (
    bitwise_means,
    correlation_ratio,
    distinguisher_power,
    exp_moment_estimate,
    horizon_for,
    late_exponent,
    sample_marking_mu,
    uniform_rejection,
)
from src.oracle import (
    expected_hitting_times,
    greens_function,
    hitting_times_to,
    matthews_bounds,
    mixing_time,
    uniform_mixing_time,
)
from src.schemas.estimate import Estimate
from src.schemas.excursions import ExcursionParams
from src.schemas.experiment import ExperimentConfig
from src.schemas.family import CompleteSpec, CycleSpec, HypercubeSpec, RandomRegularSpec, TorusSpec
from src.schemas.lamplighter import CutoffConfig
from src.schemas.latepoints import DistinguisherConfig
from src.walker import hitting_sample, reference_cover_time, trajectory

logger = logging.getLogger(__name__)

SEED = 20240601


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str = ""


def _count(n: int, scale: float, floor: int = 50) -> int:
    return max(floor, int(round(n * scale)))


def _target_ladder(g) -> List[int]:
    """A neighbor of vertex 0, a vertex at half the eccentricity, and a farthest vertex."""
    dist = distances_from(g, 0)
    far = int(dist.max())
    picks = {int(np.flatnonzero(dist == d)[0]) for d in (1, max(1, far // 2), far)}
    return sorted(picks)


def check_oracle_equivalence(scale: float) -> CheckResult:
    details = []
    passed = True
    replicas = _count(10_000, scale)
    for spec in (CompleteSpec(n=5), CycleSpec(n=6), TorusSpec(d=2, n=4)):
        g = generate(spec)
        targets = _target_ladder(g)
        horizon = uniform_mixing_time(g)
        greens = greens_function(g, horizon)
        paths = [trajectory(g, 0, horizon, replica_rng(SEED, i, Stream.AUX))[1:] for i in range(replicas)]
        for target in targets:
            exact = hitting_times_to(g, target)[0]
            samples = [hitting_sample(g, 0, target, replica_rng(SEED, i, Stream.WALK)) for i in range(replicas)]
            estimate = Estimate.from_samples(samples)
            occupation = Estimate.from_samples([np.count_nonzero(path == target) for path in paths])
            ok = estimate.within(exact, 4.0) and occupation.within(greens[0, target], 4.0)
            passed = passed and ok
            details.append(
                f"{spec.label()} -> {target}: hit {estimate} vs {exact:.4f}, "
                f"visits to T={horizon} {occupation} vs {greens[0, target]:.4f}"
            )
    return CheckResult(name="oracle equivalence", passed=passed, detail="; ".join(details))


def check_analytic_fixtures(scale: float) -> CheckResult:
    k3 = generate(CompleteSpec(n=3))
    k2 = generate(CompleteSpec(n=2))
    exact = expected_hitting_times(k3)[0, 1]
    replicas = _count(100_000, scale)
    hit = Estimate.from_samples([hitting_sample(k3, 0, 1, replica_rng(SEED, i, Stream.WALK)) for i in range(replicas)])
    cover = reference_cover_time(k2, SEED, replicas=replicas)
    checks = [
        abs(exact - 4.0) < 1e-9,
        abs(hit.mean - 4.0) <= 0.02 * 4.0,
        abs(cover.mean - 2.0) <= 0.02 * 2.0,
        mixing_time(k2, 0.25) == 1,
        mixing_time(k3, 0.25) == 1,
    ]
    return CheckResult(
        name="analytic fixtures",
        passed=all(checks),
        detail=f"E tau = {exact:.12g}, MC {hit}, T_cov(K2) {cover}, flags {checks}",
    )


def check_matthews_bracketing(scale: float) -> CheckResult:
    specs = [
        CompleteSpec(n=5),
        CycleSpec(n=20),
        TorusSpec(d=2, n=6),
        TorusSpec(d=3, n=6),
        HypercubeSpec(n=6),
        RandomRegularSpec(d=3, n=50),
    ]
    details = []
    passed = True
    for spec in specs:
        g = generate(spec)
        bounds = matthews_bounds(g, expected_hitting_times(g))
        t_cov = reference_cover_time(g, SEED, replicas=_count(200, scale, floor=20))
        ok = bounds.lower <= t_cov.mean <= bounds.upper
        passed = passed and ok
        details.append(f"{spec.label()}: {bounds.lower:.1f} <= {t_cov.mean:.1f} <= {bounds.upper:.1f}")
    return CheckResult(name="matthews bracketing", passed=passed, detail="; ".join(details))


def check_late_exponent(scale: float) -> CheckResult:
    g = generate(TorusSpec(d=3, n=8))
    t_cov = reference_cover_time(g, SEED)
    details = []
    passed = True
    for alpha in (0.25, 0.5, 0.75):
        result = late_exponent(g, alpha, t_cov, _count(500, scale), SEED)
        ok = result.exponent is not None and abs(result.exponent - (1 - alpha)) <= 0.15
        passed = passed and ok
        details.append(f"alpha={alpha}: {result.exponent}")
    return CheckResult(name="late-set exponent", passed=passed, detail="; ".join(details))


def check_threshold_separation(scale: float) -> CheckResult:
    g = generate(TorusSpec(d=3, n=8))
    t_cov = reference_cover_time(g, SEED)
    config = DistinguisherConfig(replicas=_count(1000, scale), pairs=_count(2000, scale), seed=SEED)
    power = distinguisher_power(g, 0.3, t_cov, config)
    moment = exp_moment_estimate(g, 0.9, t_cov, config)
    false_rejection = uniform_rejection(g, config)
    passed = power.rejection.mean >= 0.9 and moment.tv_upper <= 0.3 and false_rejection.mean <= 0.01
    return CheckResult(
        name="threshold separation",
        passed=passed,
        detail=f"power {power.rejection}, tv_upper {moment.tv_upper:.4g}, false rejection {false_rejection}",
    )


def check_correlation_decay(scale: float) -> CheckResult:
    g = generate(TorusSpec(d=3, n=10))
    t_cov = reference_cover_time(g, SEED)
    far = int(np.flatnonzero(distances_from(g, 0) == 5)[0])
    result = correlation_ratio(g, 0.5, t_cov, [0, far], _count(20_000, scale), SEED)
    marginal_ok = all(gap <= 0.7 for gap in result.log_marginal_gap)
    ratio_ok = result.ratio is not None and 0.5 <= result.ratio <= 2.0
    return CheckResult(
        name="correlation decay",
        passed=marginal_ok and ratio_ok,
        detail=f"ratio {result.ratio}, interval {result.ratio_interval}, marginal gaps {result.log_marginal_gap}",
    )


def check_excursions(scale: float) -> CheckResult:
    g = generate(TorusSpec(d=3, n=10))
    params = ExcursionParams(r=1, R=3)
    occupation = occupation_ratio(g, 0, params, _count(2_000_000, scale, floor=200_000), SEED)
    prediction = hitting_prediction(g, 0, params, _count(2000, scale), SEED)
    horizon = int(max(50 * occupation.mean_cycle.mean, 1))
    concentration = excursion_concentration(g, 0, params, horizon, SEED, mean_cycle=occupation.mean_cycle.mean)
    checks = [
        0.85 <= occupation.ratio <= 1.15,
        prediction.ratio is not None and 0.8 <= prediction.ratio <= 1.2,
        0.75 <= concentration.ratio <= 1.25,
    ]
    return CheckResult(
        name="excursion machinery",
        passed=all(checks),
        detail=f"occupation {occupation.ratio:.4g}, hitting {prediction.ratio}, concentration {concentration.ratio:.4g}",
    )


def check_partition(scale: float) -> CheckResult:
    g = generate(TorusSpec(d=3, n=8))
    t_cov = reference_cover_time(g, SEED)
    report = partition_H(g, 0.001, ExcursionParams(r=1, R=3), _count(2000, scale), SEED)
    passed = len(report.classes) == 1 and 0.5 <= report.C / t_cov.mean <= 2.0
    return CheckResult(
        name="cover-time predictor", passed=passed, detail=f"C = {report.C:.6g}, T_cov {t_cov}, classes {list(report.classes)}"
    )


def check_lamplighter_exactness(scale: float) -> CheckResult:
    k3 = generate(CompleteSpec(n=3))
    exact = exact_tv_curve(k3, 20)
    empirical = empirical_tv_curve(k3, 20, _count(100_000, scale, floor=10_000), SEED)
    monotone = bool(np.all(np.diff(exact) <= 1e-12))
    gap = float(np.abs(exact - empirical).max())

    torus = generate(TorusSpec(d=2, n=5))
    t_cov = reference_cover_time(torus, SEED)
    alpha = 0.5
    horizon = horizon_for(alpha, t_cov)
    samples = _count(10_000, scale, floor=1000)
    lamps = lamp_marginals(torus, horizon, samples, SEED)
    mu = np.array(
        [sample_marking_mu(torus, alpha, t_cov, replica_rng(SEED, i, Stream.AUX)).bits for i in range(samples)]
    )
    lamp_means, mu_means = bitwise_means(lamps), bitwise_means(mu)
    spread = np.sqrt((lamp_means * (1 - lamp_means) + mu_means * (1 - mu_means)) / samples)
    bitwise_ok = bool(np.all(np.abs(lamp_means - mu_means) <= 3 * spread + 1e-12))
    pair_lamps = (lamps[:, 0] & lamps[:, 1]).mean()
    pair_mu = (mu[:, 0] & mu[:, 1]).mean()
    pair_spread = math.sqrt((pair_lamps * (1 - pair_lamps) + pair_mu * (1 - pair_mu)) / samples)
    pair_ok = abs(pair_lamps - pair_mu) <= 3 * pair_spread + 1e-12
    return CheckResult(
        name="lamplighter exactness",
        passed=monotone and gap <= 0.05 and bitwise_ok and pair_ok,
        detail=f"monotone {monotone}, max gap {gap:.4g}, bitwise {bitwise_ok}, pairwise {pair_ok}",
    )


def check_cutoff(scale: float) -> CheckResult:
    g = generate(TorusSpec(d=3, n=8))
    t_cov = reference_cover_time(g, SEED)
    grid = [0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9]
    config = CutoffConfig(samples=_count(2000, scale), pairs=_count(2000, scale), seed=SEED)
    report = cutoff_probe(g, grid, t_cov, config)
    lower_ok = report.tv_lower[grid.index(0.35)] >= 0.9
    upper_ok = report.tv_upper[grid.index(0.9)] <= 0.3
    crossing_ok = report.crossing_estimate is not None and 0.35 <= report.crossing_estimate <= 0.75
    return CheckResult(
        name="cutoff probe",
        passed=lower_ok and upper_ok and crossing_ok,
        detail=f"lower {report.tv_lower}, upper {report.tv_upper}, crossing {report.crossing_estimate}",
    )


def check_determinism(scale: float) -> CheckResult:
    config = ExperimentConfig.model_validate(
        {
            "experiment": {"kind": "cover", "name": "determinism", "seed": SEED},
            "graph": {"kind": "torus", "d": 2, "n": 4},
            "cover": {"replicas": _count(200, scale, floor=20)},
        }
    )
    with tempfile.TemporaryDirectory() as tmp:
        record = run(config, Path(tmp) / "run")
        replay(record, Path(tmp) / "replay")
    return CheckResult(name="determinism", passed=True, detail=f"{len(record.estimates)} estimates replayed")


CHECKS: List[Callable[[float], CheckResult]] = [
    check_oracle_equivalence,
    check_analytic_fixtures,
    check_matthews_bracketing,
    check_late_exponent,
    check_threshold_separation,
    check_correlation_decay,
    check_excursions,
    check_partition,
    check_lamplighter_exactness,
    check_cutoff,
    check_determinism,
]


def run_acceptance(scale: float = 1.0, checks: List[Callable[[float], CheckResult]] = None) -> List[CheckResult]:
    """Run every check, catching failures so one broken check does not hide the rest."""
    results = []
    for check in checks or CHECKS:
        try:
            result = check(scale)
        except Exception as e:
            logger.error(f"{check.__name__} raised {type(e).__name__}: {e}")
            result = CheckResult(name=check.__name__, passed=False, detail=f"{type(e).__name__}: {e}")
        level = logging.INFO if result.passed else logging.WARNING
        logger.log(level, f"[{'PASS' if result.passed else 'FAIL'}] {result.name}: {result.detail}")
        results.append(result)
    return results
