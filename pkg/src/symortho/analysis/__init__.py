"""Stability bounds and applications of the symmetric orthonormalizer."""

from .bounds import (
    BoundCheck,
    BoundReport,
    PerturbationReport,
    perturbation_delta,
    sqrt_sum_bound_check,
    stability_check,
    verify_inverse_bounds,
    verify_invsqrt_bound,
    verify_sandwich_bound,
)
from .distance import (
    DistanceResult,
    InconsistentGramError,
    distance_limit,
    distance_projection_oracle,
    distance_to_span,
)
from .orthogonality import OrthogonalityReport, mutual_orthogonality, orthogonality_report

__all__ = [
    "BoundCheck",
    "BoundReport",
    "DistanceResult",
    "InconsistentGramError",
    "OrthogonalityReport",
    "PerturbationReport",
    "distance_limit",
    "distance_projection_oracle",
    "distance_to_span",
    "mutual_orthogonality",
    "orthogonality_report",
    "perturbation_delta",
    "sqrt_sum_bound_check",
    "stability_check",
    "verify_inverse_bounds",
    "verify_invsqrt_bound",
    "verify_sandwich_bound",
]
