"""
Experiment orchestration: one runner per experiment kind, records and replay.

Each runner reads its section of the configuration, calls the library, writes
CSV artifacts under ``<out>/<name>/`` and stores every estimate in the
record under ``<operation>.<field>``.
"""
import json
import logging
import math
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Optional, Union

import numpy as np
import pandas as pd

from src.core.config import settings
from src.core.errors import ConfigInvalid, DriftDetected
from src.core.rng import Stream, replica_rng
from src.excursions import (
    decompose,
    excursion_concentration,
    hitting_prediction,
    occupation_ratio,
    partition_H,
    q_statistics,
    write_trace_csv,
)
from src.graphs import degree_stats, diameter, generate, write_edge_list
from src.graphs.topology import GraphTopology
from src.lamplighter import cutoff_probe, empirical_tv_curve, exact_tv_report
from src.latepoints import (
    correlation_ratio,
    distinguisher_power,
    exact_marking_law,
    exp_moment_estimate,
    horizon_for,
    late_exponent,
    uniform_z_values,
    write_late_csv,
)
from src.oracle import build_summary, cached_summary, expected_hitting_times, matthews_bounds, save_summary, verify_summary
from src.schemas.estimate import Estimate
from src.schemas.excursions import ExcursionParams
from src.schemas.experiment import ExperimentConfig, ExperimentRecord, config_digest
from src.schemas.lamplighter import CutoffConfig
from src.schemas.latepoints import DistinguisherConfig
from src.walker import cover_times, reference_cover_time, sample_stationary, trajectory, write_replicas_csv

logger = logging.getLogger(__name__)

RECORD_FILE = "record.json"


def _clean(value: Any) -> Any:
    """JSON-stable form: builtin scalars, lists for sequences, strings for non-finite floats."""
    if isinstance(value, (np.integer, np.bool_)):
        value = value.item()
    if isinstance(value, np.floating):
        value = float(value)
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_clean(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    return value


class Recorder:
    """Collects estimates, timings and artifacts for one run."""

    def __init__(self, config: ExperimentConfig, directory: Path):
        self.config = config
        self.directory = directory
        self.record = ExperimentRecord(
            kind=config.experiment.kind,
            config=config.snapshot(),
            config_digest=config.digest(),
            seed=config.experiment.seed,
        )

    def put(self, key: str, value: Any) -> None:
        self.record.estimates[key] = _clean(value)

    def put_estimate(self, key: str, estimate: Estimate) -> None:
        self.put(f"{key}.mean", estimate.mean)
        self.put(f"{key}.stderr", estimate.stderr)

    @contextmanager
    def timed(self, operation: str) -> Iterator[None]:
        started = time.perf_counter()
        yield
        self.record.timings[operation] = time.perf_counter() - started

    def write_frame(self, frame: pd.DataFrame, name: str) -> Path:
        """Write a summary table; every row carries the master seed it was computed under."""
        if "seed" not in frame.columns:
            frame = frame.copy()
            frame.insert(0, "seed", self.config.experiment.seed)
        path = self.directory / name
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format=settings.FLOAT_FORMAT)
        self.artifact(path)
        return path

    def artifact(self, path: Path) -> None:
        self.record.artifacts.append(str(path.relative_to(self.directory)))

    def t_cov_ref(self, g: GraphTopology) -> Estimate:
        if self.record.t_cov_ref is None:
            experiment = self.config.experiment
            with self.timed("t_cov_ref"):
                self.record.t_cov_ref = reference_cover_time(
                    g, experiment.seed, replicas=experiment.t_cov_replicas, threads=experiment.threads
                )
            self.put_estimate("t_cov_ref", self.record.t_cov_ref)
        return self.record.t_cov_ref


def _write_replica_frames(rec: Recorder, frames: List[pd.DataFrame], name: str) -> None:
    """Stack per-replica frames into one (seed, operation, alpha, replica, ...) artifact."""
    frame = pd.concat(frames, ignore_index=True)
    rec.artifact(write_late_csv(frame.to_dict("list"), rec.directory / name, seed=rec.config.experiment.seed))


def _run_gen(g: GraphTopology, rec: Recorder) -> None:
    section = rec.config.gen
    stats = degree_stats(g)
    rec.put("gen.vertex_count", g.vertex_count)
    rec.put("gen.edge_count", g.edge_count)
    rec.put("gen.min_degree", stats.min_degree)
    rec.put("gen.max_degree", stats.max_degree)
    rec.put("gen.connected", g.is_connected)
    if section.edge_list:
        path = write_edge_list(g, rec.directory / "graph.edges")
        rec.artifact(path)
    if section.distances:
        with rec.timed("distances"):
            rec.put("gen.diameter", diameter(g))


def _run_cover(g: GraphTopology, rec: Recorder) -> None:
    section = rec.config.cover
    experiment = rec.config.experiment
    with rec.timed("cover_times"):
        records = cover_times(g, section.replicas, experiment.seed, threads=experiment.threads)
    estimate = Estimate.from_samples([r.cover_time for r in records])
    rec.record.t_cov_ref = estimate
    rec.put_estimate("cover", estimate)
    path = write_replicas_csv(
        records, rec.directory / "replicas.csv", first_hit=section.first_hit, seed=experiment.seed
    )
    rec.artifact(path)
    if section.matthews and g.vertex_count <= settings.DENSE_CAP:
        with rec.timed("matthews"):
            bounds = matthews_bounds(g, expected_hitting_times(g))
        rec.put("matthews.lower", bounds.lower)
        rec.put("matthews.upper", bounds.upper)


def _run_late(g: GraphTopology, rec: Recorder) -> None:
    section = rec.config.late
    experiment = rec.config.experiment
    t_cov_ref = rec.t_cov_ref(g)
    rows = []
    per_replica = []
    for alpha in section.alphas:
        with rec.timed(f"late_exponent[{alpha}]"):
            result = late_exponent(g, alpha, t_cov_ref, section.replicas, experiment.seed, experiment.threads)
        per_replica.append(
            pd.DataFrame(
                {
                    "operation": "late_exponent",
                    "alpha": alpha,
                    "replica": range(len(result.sizes)),
                    "late_size": result.sizes,
                }
            )
        )
        rec.put(f"late[{alpha}].exponent", result.exponent)
        rec.put_estimate(f"late[{alpha}].size", result.mean_size)
        row = {
            "alpha": alpha,
            "horizon": result.horizon,
            "mean_size": result.mean_size.mean,
            "stderr": result.mean_size.stderr,
            "exponent": result.exponent,
        }
        if len(section.points) >= 2:
            correlation = correlation_ratio(
                g, alpha, t_cov_ref, section.points, section.replicas, experiment.seed, experiment.threads
            )
            rec.put(f"correlation[{alpha}].ratio", correlation.ratio)
            rec.put(f"correlation[{alpha}].interval", correlation.ratio_interval)
            rec.put(f"correlation[{alpha}].joint_count", correlation.joint_count)
            row["correlation_ratio"] = correlation.ratio
        if section.exact and g.vertex_count <= settings.EXACT_STATE_CAP:
            law = exact_marking_law(g, horizon_for(alpha, t_cov_ref))
            rec.put(f"exact[{alpha}].tv", law.tv)
            rec.put(f"exact[{alpha}].tv_upper", law.tv_upper)
            row["exact_tv"] = law.tv
        rows.append(row)
    rec.write_frame(pd.DataFrame(rows), "late.csv")
    _write_replica_frames(rec, per_replica, "late_replicas.csv")


def _run_distinguish(g: GraphTopology, rec: Recorder) -> None:
    section = rec.config.distinguish
    experiment = rec.config.experiment
    t_cov_ref = rec.t_cov_ref(g)
    config = DistinguisherConfig(
        zeta=section.zeta,
        z_threshold=section.z_threshold,
        replicas=section.replicas,
        pairs=section.pairs,
        seed=experiment.seed,
        threads=experiment.threads,
    )
    uniform_z = uniform_z_values(g, config.replicas, config.seed)
    rec.put_estimate("uniform_rejection", Estimate.from_samples([float(z > config.z_threshold) for z in uniform_z]))
    rows = []
    per_replica = [
        pd.DataFrame(
            {"operation": "uniform_rejection", "alpha": np.nan, "replica": range(len(uniform_z)), "z": uniform_z}
        )
    ]
    for alpha in section.alphas:
        with rec.timed(f"distinguish[{alpha}]"):
            power = distinguisher_power(g, alpha, t_cov_ref, config)
            moment = exp_moment_estimate(g, alpha, t_cov_ref, config)
        rec.put_estimate(f"power[{alpha}]", power.rejection)
        rec.put(f"exp_moment[{alpha}].m_hat", moment.m_hat)
        rec.put(f"exp_moment[{alpha}].tv_upper", moment.tv_upper)
        per_replica.append(
            pd.DataFrame(
                {
                    "operation": "distinguisher_power",
                    "alpha": alpha,
                    "replica": range(len(power.z_values)),
                    "z": power.z_values,
                    "late_size": power.late_sizes,
                }
            )
        )
        per_replica.append(
            pd.DataFrame(
                {
                    "operation": "exp_moment_estimate",
                    "alpha": alpha,
                    "replica": range(len(moment.intersections)),
                    "intersection": moment.intersections,
                }
            )
        )
        rows.append(
            {
                "alpha": alpha,
                "horizon": power.horizon,
                "rejection": power.rejection.mean,
                "rejection_stderr": power.rejection.stderr,
                "m_hat": moment.m_hat,
                "tv_upper": moment.tv_upper,
                "overflow": moment.overflow,
            }
        )
    rec.write_frame(pd.DataFrame(rows), "distinguish.csv")
    _write_replica_frames(rec, per_replica, "distinguish_replicas.csv")


def _run_excursion(g: GraphTopology, rec: Recorder) -> None:
    section = rec.config.excursion
    experiment = rec.config.experiment
    params = ExcursionParams(
        r=section.r,
        R=section.R,
        beta=section.beta,
        alpha_window=section.alpha_window,
        t_mix_uniform=section.t_mix_uniform,
    )
    x = section.target
    with rec.timed("hitting_prediction"):
        prediction = hitting_prediction(g, x, params, section.replicas, experiment.seed, experiment.threads)
    rec.put("hitting.predicted", prediction.predicted)
    rec.put("hitting.exact", prediction.exact)
    with rec.timed("occupation_ratio"):
        occupation = occupation_ratio(g, x, params, section.horizon, experiment.seed)
    rec.put("occupation.ratio", occupation.ratio)
    rec.put("occupation.excursions", occupation.excursions)
    with rec.timed("concentration"):
        concentration = excursion_concentration(
            g, x, params, section.horizon, experiment.seed, mean_cycle=occupation.mean_cycle.mean
        )
    rec.put("concentration.count", concentration.count)
    rec.put("concentration.ratio", concentration.ratio)

    if section.q_statistics:
        rng = replica_rng(experiment.seed, 0, Stream.AUX)
        path = trajectory(g, sample_stationary(g, rng), section.horizon, rng)
        trace = decompose(g, [x], params, path)
        rec.artifact(write_trace_csv(trace, rec.directory / "excursions.csv", seed=experiment.seed, replica=0))
        report = q_statistics(g, x, params, path)
        rec.put("q.max", report.max_q)
        rec.put("q.product", report.product_after(len(report.q)))
        rec.put("q.empirical", report.empirical)
    if section.epsilon is not None:
        with rec.timed("partition"):
            partition = partition_H(g, section.epsilon, params, section.replicas, experiment.seed, experiment.threads)
        rec.put("partition.C", partition.C)
        rec.put("partition.classes", sorted(partition.classes))
        rec.write_frame(
            pd.DataFrame(
                {
                    "k": list(partition.classes),
                    "size": [partition.sizes[k] for k in partition.classes],
                    "d_k": [partition.d_k[k] for k in partition.classes],
                    "C_k": [partition.C_k[k] for k in partition.classes],
                }
            ),
            "partition.csv",
        )
        path = rec.directory / "partition.json"
        path.write_text(partition.model_dump_json(indent=2), encoding="utf-8")
        rec.artifact(path)


def _run_lamplighter(g: GraphTopology, rec: Recorder) -> None:
    section = rec.config.lamplighter
    experiment = rec.config.experiment
    if section.exact:
        with rec.timed("exact_tv"):
            exact = exact_tv_report(g, section.t_max)
        with rec.timed("empirical_tv"):
            empirical = empirical_tv_curve(g, section.t_max, section.replicas, experiment.seed, start=exact.worst_start)
        gap = np.abs(np.asarray(exact.tv) - empirical)
        rec.put("lamplighter.mixing_time", exact.mixing_time)
        rec.put("lamplighter.max_gap", float(gap.max()))
        rec.write_frame(
            pd.DataFrame({"t": range(section.t_max + 1), "exact": exact.tv, "empirical": empirical}), "tv_curve.csv"
        )
    if section.cutoff:
        config = CutoffConfig(
            samples=section.samples,
            pairs=section.pairs,
            bins=section.bins,
            seed=experiment.seed,
            threads=experiment.threads,
        )
        with rec.timed("cutoff_probe"):
            report = cutoff_probe(g, section.alphas, rec.t_cov_ref(g), config)
        rec.put("cutoff.tv_lower", report.tv_lower)
        rec.put("cutoff.tv_upper", report.tv_upper)
        rec.put("cutoff.crossing_estimate", report.crossing_estimate)
        rec.write_frame(
            pd.DataFrame(
                {
                    "alpha": report.alpha_grid,
                    "horizon": report.horizons,
                    "tv_lower": report.tv_lower,
                    "tv_upper": report.tv_upper,
                    "base_residual": report.base_residual,
                }
            ),
            "cutoff.csv",
        )
        path = rec.directory / "cutoff.json"
        path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
        rec.artifact(path)


def _run_oracle(g: GraphTopology, rec: Recorder) -> None:
    section = rec.config.oracle
    with rec.timed("summary"):
        summary = cached_summary(g) if section.use_cache else build_summary(g, section.epsilons)
    save_summary(summary, rec.directory / "oracle")
    rec.artifact(rec.directory / "oracle" / "summary.txt")
    for eps, t in sorted(summary.t_mix.items()):
        rec.put(f"oracle.t_mix[{eps}]", t)
    for eps, t in sorted(summary.t_mix_uniform.items()):
        rec.put(f"oracle.t_mix_uniform[{eps}]", t)
    rec.put("oracle.t_hit", summary.t_hit)
    rec.put("oracle.violations", verify_summary(summary, g))


RUNNERS: Dict[str, Callable[[GraphTopology, Recorder], None]] = {
    "gen": _run_gen,
    "cover": _run_cover,
    "late": _run_late,
    "distinguish": _run_distinguish,
    "excursion": _run_excursion,
    "lamplighter": _run_lamplighter,
    "oracle": _run_oracle,
}


def run_directory(config: ExperimentConfig) -> Path:
    return Path(config.experiment.out) / config.experiment.name


def run(config: ExperimentConfig, directory: Optional[Path] = None) -> ExperimentRecord:
    """
    Execute the configured experiment and persist its record.

    Args:
        config: Validated configuration
        directory: Output directory, defaults to <out>/<name>

    Returns:
        The ExperimentRecord written to record.json
    """
    directory = Path(directory) if directory is not None else run_directory(config)
    directory.mkdir(parents=True, exist_ok=True)
    rec = Recorder(config, directory)
    kind = config.experiment.kind
    logger.info(f"Running {kind} on {config.graph.label()} with seed {config.experiment.seed}")
    with rec.timed("generate"):
        g = generate(config.graph)
    with rec.timed(kind):
        RUNNERS[kind](g, rec)
    save_record(rec.record, directory / RECORD_FILE)
    return rec.record


def save_record(record: ExperimentRecord, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(record.model_dump_json(indent=2), encoding="utf-8")
    logger.info(f"Wrote record to {path}")
    return path


def load_record(path: Union[str, Path]) -> ExperimentRecord:
    path = Path(path)
    if path.is_dir():
        path = path / RECORD_FILE
    return ExperimentRecord.model_validate_json(path.read_text(encoding="utf-8"))


def replay(record: ExperimentRecord, directory: Path, seed: Optional[int] = None) -> ExperimentRecord:
    """
    Re-run a record's configuration and compare every estimate exactly.

    Args:
        record: Record to verify
        directory: Where the replay writes its artifacts
        seed: Optional replacement master seed

    Raises:
        ConfigInvalid: If the record's config no longer matches its digest or
            was produced by another version
        DriftDetected: On the first estimate that differs
    """
    if config_digest(record.config) != record.config_digest:
        raise ConfigInvalid("record config was modified after the run", field="config_digest")
    if record.version != settings.VERSION:
        raise ConfigInvalid(f"record from version {record.version}, running {settings.VERSION}", field="version")
    config = ExperimentConfig.model_validate(record.config)
    if seed is not None:
        config.experiment.seed = seed
    replayed = run(config, directory)

    for key, recorded_value in record.estimates.items():
        replayed_value = replayed.estimates.get(key)
        # compare through JSON so both sides went through the same encoding
        if json.dumps(recorded_value) != json.dumps(replayed_value):
            raise DriftDetected(key, recorded_value, replayed_value)
    extra = sorted(set(replayed.estimates) - set(record.estimates))
    if extra:
        raise DriftDetected(extra[0], None, replayed.estimates[extra[0]])
    logger.info(f"Replay of {record.kind} matched {len(record.estimates)} estimates")
    return replayed
