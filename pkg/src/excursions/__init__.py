from src.excursions.estimators import (
    estimate_success_prob,
    excursion_concentration,
    hitting_prediction,
    mean_excursion_length,
    occupation_ratio,
    success_variance,
)
from src.excursions.partition import partition_H
from src.excursions.qstats import q_statistics
from src.excursions.trace import (
    Excursion,
    ExcursionTrace,
    ExcursionTracker,
    decompose,
    excursion_count,
    excursion_geometry,
    excursion_windows,
    resolve_t_mix_uniform,
    write_trace_csv,
)
