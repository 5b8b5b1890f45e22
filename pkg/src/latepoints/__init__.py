from src.latepoints.distinguisher import (
    distinguisher_power,
    exp_moment_estimate,
    tv_upper_from_moment,
    uniform_rejection,
    uniform_z_values,
)
from src.latepoints.exact import ExactMarkingLaw, exact_marking_law, range_state_law
from src.latepoints.marking import (
    LateSet,
    Marking,
    bitwise_means,
    horizon_for,
    late_set,
    pair_correlation,
    sample_marking_mu,
    sample_marking_uniform,
    zero_count_statistic,
)
from src.latepoints.statistics import correlation_ratio, coverage_frequency, late_exponent, sample_ranges, write_late_csv
