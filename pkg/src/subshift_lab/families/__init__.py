from .alpha_beta import (
    AlphaBetaCoding,
    AlphaBetaParams,
    alpha_beta_coding,
    alpha_beta_forbidden,
    betaent_check,
    forbidden_from_params,
    hardbeta_certificate,
    hardbeta_search,
)
from .bounded_density import (
    BoundedDensityParams,
    WindowSumRule,
    bddthm_certify,
    bfact_value,
    bounded_density_counts,
    bounded_density_forbidden,
    count_growth,
    count_sum_above,
    dense_count_bound,
)
from .nonsupport import nonsupport_example, nonsupport_forbidden

__all__ = [
    "AlphaBetaCoding", "AlphaBetaParams", "alpha_beta_coding", "alpha_beta_forbidden", "betaent_check",
    "forbidden_from_params", "hardbeta_certificate", "hardbeta_search",
    "BoundedDensityParams", "WindowSumRule", "bddthm_certify", "bfact_value", "bounded_density_counts",
    "bounded_density_forbidden", "count_growth", "count_sum_above", "dense_count_bound",
    "nonsupport_example", "nonsupport_forbidden",
]
