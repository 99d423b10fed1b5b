"""Distribution learning for fields sampled at unknown renewal locations.

Thin re-export of the compiled core: field models, renewal-trial
simulation, empirical CDF estimation, and the analytic error bounds.
"""

from ._core import (  # noqa: F401
    BoundParams,
    EmpiricalCdf,
    FieldRealization,
    FieldSpec,
    IntersampleDistribution,
    LocationSequence,
    TimingModel,
    TrialRecord,
    avg_pointwise_diff,
    cdf_pointwise_error_bound,
    cdf_shift_bound,
    cdf_sup_error_bound,
    dkw_epsilon,
    estimate_field_at,
    estimate_lipschitz,
    estimate_max_pdf,
    eval_field,
    generate_locations,
    is_vacuous,
    location_mse_bound,
    make_metric_grid,
    max_pointwise_diff,
    mean_sample_count,
    minimize_pointwise_bound,
    realize_field,
    run_trial,
    select_index,
    select_index_fraction,
    simulate_csv,
    value_deviation_prob_bound,
    value_deviation_prob_sup_bound,
    verify_bounded,
)

__version__ = "0.1.0"
