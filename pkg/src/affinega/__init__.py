"""Affine point-set registration with a real-coded GA and a noisy matching objective."""

from .estimator import AffineGARegistration
from .ga import ConfigError, GaConfig, Individual, RunRecord, run
from .geometry import IDENTITY, AffineParams, apply_affine, compose, from_elementary, warp
from .matching import (
    MatchOrder,
    MatchResult,
    distance_matrix,
    evaluate,
    evaluate_population,
    fresh_match_order,
    greedy_assign,
)
from .validation import bbox_diagonal, check_pointset

__version__ = "0.1.0"

__all__ = [
    "AffineGARegistration",
    "AffineParams",
    "ConfigError",
    "GaConfig",
    "IDENTITY",
    "Individual",
    "MatchOrder",
    "MatchResult",
    "RunRecord",
    "apply_affine",
    "bbox_diagonal",
    "check_pointset",
    "compose",
    "distance_matrix",
    "evaluate",
    "evaluate_population",
    "fresh_match_order",
    "from_elementary",
    "greedy_assign",
    "run",
    "warp",
]
