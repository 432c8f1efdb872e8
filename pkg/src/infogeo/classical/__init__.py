"""Finite-sample-space statistical manifold: states, metric, connections,
estimation."""

from .distributions import (
    EXPONENTIAL,
    FAITHFULNESS_FLOOR,
    MIXTURE,
    ClassicalTangent,
    FiniteDistribution,
    alpha_embed,
    as_score,
    bhattacharyya_angle,
    entropy,
    fisher_metric,
    hellinger_distance,
    mixture_tangent,
    parallel_transport,
    score_tangent,
    tangent_convert,
    uniform,
)
from .families import (
    CanonicalPoint,
    ExponentialFamily,
    LegendreReport,
    covariance,
    entropy_relative_to_base,
    fit_mixture_coords,
    full_simplex_family,
    legendre_check,
    massieu,
    mixture_coords,
)
from .connections import (
    GeodesicPath,
    christoffel,
    geodesic,
    geodesic_mixture_coords,
    skewness_tensor,
)
from .estimation import (
    CANONICAL,
    MIXTURE_COORDS,
    CramerRaoReport,
    EmpiricalDistribution,
    ParametricFamily,
    check_unbiased,
    cramer_rao_report,
    empirical_distribution,
    estimate_from_data,
    fisher_information_matrix,
    maxent_fit,
    sample,
)

__all__ = [
    "EXPONENTIAL",
    "FAITHFULNESS_FLOOR",
    "MIXTURE",
    "CANONICAL",
    "MIXTURE_COORDS",
    "ClassicalTangent",
    "FiniteDistribution",
    "CanonicalPoint",
    "ExponentialFamily",
    "LegendreReport",
    "GeodesicPath",
    "CramerRaoReport",
    "EmpiricalDistribution",
    "ParametricFamily",
    "alpha_embed",
    "as_score",
    "bhattacharyya_angle",
    "check_unbiased",
    "christoffel",
    "covariance",
    "cramer_rao_report",
    "empirical_distribution",
    "entropy",
    "entropy_relative_to_base",
    "estimate_from_data",
    "fisher_information_matrix",
    "fisher_metric",
    "fit_mixture_coords",
    "full_simplex_family",
    "geodesic",
    "geodesic_mixture_coords",
    "hellinger_distance",
    "legendre_check",
    "massieu",
    "maxent_fit",
    "mixture_coords",
    "mixture_tangent",
    "parallel_transport",
    "sample",
    "score_tangent",
    "skewness_tensor",
    "tangent_convert",
    "uniform",
]
