"""Finite-dimensional quantum information manifold."""

from .states import (
    EIGENVALUE_FLOOR,
    DensityMatrix,
    MixtureEntropyReport,
    QuantumTangent,
    binary_entropy,
    gauge_fix_score,
    maximally_mixed,
    mixture_entropy_bound,
    mixture_qtangent,
    project_traceless,
    quantum_tangent_convert,
    score_qtangent,
    von_neumann_entropy,
)
from .families import (
    QuantumExponentialFamily,
    QuantumFitResult,
    mean_parametrized_path,
    mean_path_derivative,
    quantum_entropy_relative_to_base,
    quantum_legendre_residual,
    quantum_massieu,
    quantum_maxent_fit,
    quantum_mixture_coords,
    state_from_score,
)
from .metrics import (
    BKM,
    GNS_SLD,
    RIGHT,
    LogDerivatives,
    QuantumCramerRaoReport,
    bkm_gram,
    bkm_metric,
    gns_metric,
    log_derivatives,
    path_derivative,
    quantum_cramer_rao,
    quantum_fisher_info,
)

__all__ = [
    "BKM",
    "EIGENVALUE_FLOOR",
    "GNS_SLD",
    "RIGHT",
    "DensityMatrix",
    "LogDerivatives",
    "MixtureEntropyReport",
    "QuantumCramerRaoReport",
    "QuantumExponentialFamily",
    "QuantumFitResult",
    "QuantumTangent",
    "binary_entropy",
    "bkm_gram",
    "bkm_metric",
    "gauge_fix_score",
    "gns_metric",
    "log_derivatives",
    "maximally_mixed",
    "mean_parametrized_path",
    "mean_path_derivative",
    "mixture_entropy_bound",
    "mixture_qtangent",
    "path_derivative",
    "project_traceless",
    "quantum_cramer_rao",
    "quantum_entropy_relative_to_base",
    "quantum_fisher_info",
    "quantum_legendre_residual",
    "quantum_massieu",
    "quantum_maxent_fit",
    "quantum_mixture_coords",
    "quantum_tangent_convert",
    "score_qtangent",
    "state_from_score",
    "von_neumann_entropy",
]
