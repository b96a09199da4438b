"""Distributionally-robust competitive ratios for ski rental with
hierarchical prediction intervals."""

from .analysis import (
    CurveSeries,
    ShapeReport,
    check_shape,
    critical_accuracy,
    critical_accuracy_bisection,
    drcr_curve,
)
from .evaluate import (
    AdversaryDistribution,
    DrcrBreakdown,
    adversary_value,
    algorithm_cost,
    consistency,
    drcr,
    opt_cost,
    robustness,
    worst_case_distribution,
)
from .model import PredictionProfile, ProblemSpec, PurchaseDistribution, shell_index, validate_profile
from .skirental import (
    SupportSets,
    build_accuracy_system,
    build_critical_lp,
    build_dense_oracle,
    build_dual,
    build_primal,
    canonicalize_distribution,
    optimal_drcr,
    robustness_optimum,
    support_sets,
)

__version__ = "0.1.0"
