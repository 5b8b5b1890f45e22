from src.walker.ensemble import cover_times, estimate_cover_time, reference_cover_time, write_replicas_csv
from src.walker.walk import (
    RangeRecord,
    WalkConfig,
    hitting_sample,
    iter_trajectory,
    occupation_frequencies,
    run_range,
    run_until_cover,
    safety_horizon,
    sample_stationary,
    step,
    trajectory,
    walk_range,
)
