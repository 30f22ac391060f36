"""Desk-scale numerics for comparing classical and quantum Gromov-Hausdorff
distance on l^p unit balls."""

from .balancing import BalanceResult, balance_certificate_check, balance_signs
from .bounds import (
    CertificateChain,
    SeparationRow,
    certificate_chain_check,
    homogeneous_extension,
    min_dimension_for_separation,
    qgh_lower_bound,
    separation_table,
    simulated_embedding_experiment,
)
from .gh_metric import (
    Correspondence,
    DistortionReport,
    FiniteMetricSpace,
    brute_force_gh,
    correspondence_distortion,
    gh_upper_from_correspondence,
    hausdorff_distance,
    mazur_correspondence_experiment,
    metric_from_points,
)
from .lp_core import (
    BallPoint,
    LpSpace,
    clarkson_slack,
    conjugate_exponent,
    f_gap,
    mazur_map,
    mazur_map_inverse,
    p_norm,
    scalar_gap_bound_check,
)
from .sampling import SampleConfig, SampleMode, grid_points, sample_ball, sample_sphere

__version__ = "0.1.0"
