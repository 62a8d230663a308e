"""Erasure-robustness certificates for random matrices, checked by simulation.

The package computes three families of guarantees: sparse-isometry and
distance-preservation certificates for sign matrices that survive
adversarial row erasures, and condition-number certificates for Gaussian
frames under the same erasure model. Each certificate comes with seeded
Monte Carlo machinery that estimates the certified quantity empirically
and scores the bound with confidence intervals.
"""

from .errors import (
    ComputationError,
    ConvergenceError,
    DomainError,
    ErasureLabError,
    SideConditionError,
)
from .gauss_frame_bounds import (
    FrameShape,
    NerfCertificate,
    SquareNerfCertificate,
    chi2_tail_bound,
    mu_eps,
    nerf_certificate,
    p_small,
    q_small,
    r_large,
    square_nerf_certificate,
)
from .matrix_lab import (
    ErasureSet,
    MatrixSample,
    SingularExtremes,
    enumerate_erasures,
    erase_rows,
    extreme_singular_values,
    generate,
    sample_sparse_unit_vector,
)
from .monte_carlo import (
    VERIFY_FAMILIES,
    BoundCheck,
    QuantileEstimate,
    SimConfig,
    SimSummary,
    SripExtremes,
    clopper_pearson_lower,
    clopper_pearson_upper,
    default_verification_suite,
    frequency_check,
    mean_check,
    mp_edge_cond,
    quantile_with_ci,
    run_nerf_sim,
    run_square_sim,
    square_cond_q90_estimate,
    verify_concentration,
    verify_jl,
    verify_khinchine,
    verify_order_stats,
    verify_srip,
    verify_tail,
    worker_count,
)
from .pm1_bounds import (
    ErasureLevel,
    JlCertificate,
    KhinchineConstants,
    SripCertificate,
    ThetaOmegaEstimates,
    admissible_alpha_max,
    concentration_bound_pm1,
    concentration_bound_subgaussian,
    jl_certificate,
    khb_tail_bound,
    khinchine_constants,
    order_stat_expectation_bound,
    p0_khinchine,
    q_beta,
    srip_certificate,
    t_pm1,
    t_threshold,
    theta_estimates,
)
from .specfun import Interval, lambert_w0, maximize_1d

__version__ = "0.1.0"

__all__ = [
    "VERIFY_FAMILIES",
    "BoundCheck",
    "ComputationError",
    "ConvergenceError",
    "DomainError",
    "ErasureLabError",
    "ErasureLevel",
    "ErasureSet",
    "FrameShape",
    "Interval",
    "JlCertificate",
    "KhinchineConstants",
    "MatrixSample",
    "NerfCertificate",
    "QuantileEstimate",
    "SideConditionError",
    "SimConfig",
    "SimSummary",
    "SingularExtremes",
    "SquareNerfCertificate",
    "SripCertificate",
    "SripExtremes",
    "ThetaOmegaEstimates",
    "admissible_alpha_max",
    "chi2_tail_bound",
    "clopper_pearson_lower",
    "clopper_pearson_upper",
    "concentration_bound_pm1",
    "concentration_bound_subgaussian",
    "default_verification_suite",
    "enumerate_erasures",
    "erase_rows",
    "extreme_singular_values",
    "frequency_check",
    "generate",
    "jl_certificate",
    "khb_tail_bound",
    "khinchine_constants",
    "lambert_w0",
    "maximize_1d",
    "mean_check",
    "mp_edge_cond",
    "mu_eps",
    "nerf_certificate",
    "order_stat_expectation_bound",
    "p0_khinchine",
    "p_small",
    "q_beta",
    "q_small",
    "quantile_with_ci",
    "r_large",
    "run_nerf_sim",
    "run_square_sim",
    "sample_sparse_unit_vector",
    "square_cond_q90_estimate",
    "square_nerf_certificate",
    "srip_certificate",
    "t_pm1",
    "t_threshold",
    "theta_estimates",
    "verify_concentration",
    "verify_jl",
    "verify_khinchine",
    "verify_order_stats",
    "verify_srip",
    "verify_tail",
    "worker_count",
]
