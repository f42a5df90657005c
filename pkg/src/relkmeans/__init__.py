"""Relational k-means: Lloyd-style clustering driven only by a squared dissimilarity matrix."""

from .distance import ClusterStats, centroid_coefficients, coefficient_norm_sq, quadratic_form_distance
from .errors import *  # noqa: F401,F403
from .matrix import SquaredDissimilarityMatrix, from_points, validate_matrix
from .solver import (
    EmptyClusterPolicy,
    InitMethod,
    RunReport,
    SolverConfig,
    init_plusplus,
    init_random_partition,
    lloyd_iterate,
    solve,
    vector_kmeans_reference,
)
from .spectral import (
    BetaMode,
    BetaState,
    apply_beta_spread,
    beta_star,
    gower_center,
    is_euclidean,
    lazy_beta_increment,
    min_restricted_eigenvalue,
    shifted_distance,
)

__version__ = "0.1.0"
