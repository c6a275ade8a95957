"""First passage percolation on Z^2 with unit vertical weights and i.i.d.
random horizontal weights: exact solvers, shear calculus and estimators."""

from .dist import (
    Dirac,
    Empirical,
    Exponential,
    TwoPoint,
    Truncated,
    Uniform,
    WeightDist,
    bernoulli_reduction,
    inv_cdf,
    parse_dist,
    summary,
    truncate,
)
from .env import Environment, detour, horizontal_weight
from .estimators import (
    classify_flat_edge,
    derivative_bounds_report,
    estimate_lambda,
    estimate_lambda_sweep,
    limit_shape_curve,
    sheared_lambda_check,
    tail_estimates,
)
from .exact import exact_lambda_directed_twopoint
from .combinatorics import count_jump_tuples, count_paths_bound
from .path import (
    LatticePath,
    PioneerVector,
    normalize_to_semidirected,
    passage_time_A,
    path_from_pioneer,
    pioneer_vector,
    strip_slope_stats,
    target_height,
    turn_stats,
)
from .shear import ShearSeq, apply_shear_path, delta_V, permutation_shear, sample_shear
from .solver import (
    GeodesicResult,
    brute_force_passage,
    passage_time_directed,
    passage_time_semidirected,
    passage_time_site,
    sheared_passage,
)

__version__ = "0.1.0"
