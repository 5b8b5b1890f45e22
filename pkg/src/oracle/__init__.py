from src.oracle.hitting import (
    MatthewsBounds,
    excursion_pair_probabilities,
    expected_hitting_times,
    first_excursion_hit_probability,
    harmonic,
    hitting_times_to,
    matthews_bounds,
)
from src.oracle.kernel import (
    DecayReport,
    greens_function,
    greens_to_set,
    mixing_decay_check,
    mixing_time,
    stationary_distribution,
    transition_matrix,
    tv_at,
    tv_curve,
    uniform_curve,
    uniform_mixing_time,
)
from src.oracle.summary import SpectralSummary, build_summary, cached_summary, load_summary, save_summary, verify_summary
from src.oracle.transience import transience_profile
