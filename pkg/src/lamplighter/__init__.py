from src.lamplighter.chain import (
    LampState,
    empirical_tv_curve,
    lamp_marginals,
    lamplighter_step,
    simulate_ensemble,
    stationary_law,
    wreath_graph,
)
from src.lamplighter.cutoff import binned_tv, crossing, cutoff_probe
from src.lamplighter.exact import exact_tv_curve, exact_tv_report, per_start_tv
