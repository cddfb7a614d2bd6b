"""Analytic continuation of power series through coefficient interpolants."""

__version__ = "0.1.0"

from .branches import BranchCut, arg_branch, log_branch, power_cut0
from .catalog import builtin_registry, get_entry
from .contours import Arc, Contour, Ray, Segment, deformed_boundary, gamma_m_contour, interpolant_contour
from .continuation import (
    CompactParams,
    ContinuationConfig,
    SeriesContinuation,
    SeriesSpec,
    continue_at,
    residue_partial_sum,
    select_theta,
    tail_integral,
)
from .expr import FunctionExpr, parse_expr, render
from .growth import (
    GrowthEstimator,
    GrowthReport,
    RadialSchedule,
    exp_type,
    indicator,
    inner_exp_type,
    order_estimate,
)
from .interpolant import (
    CoefficientInterpolant,
    DecayCertificate,
    DeformedInterpolant,
    InterpolantConfig,
    check_r_independence,
    phi_deformed,
    phi_interpolant,
    stirling_gamma_bound,
)
from .kernel import (
    KernelBoundConstants,
    epsilon_of,
    integrand_bound,
    kernel_g,
    reciprocal_bound_constant,
    truncation_radius,
)
from .special import dilog

__all__ = [
    "Arc", "BranchCut", "CoefficientInterpolant", "CompactParams", "ContinuationConfig", "Contour",
    "DecayCertificate", "DeformedInterpolant", "FunctionExpr", "GrowthEstimator", "GrowthReport",
    "InterpolantConfig", "KernelBoundConstants", "RadialSchedule", "Ray", "Segment", "SeriesContinuation",
    "SeriesSpec", "arg_branch", "builtin_registry", "check_r_independence", "continue_at", "deformed_boundary",
    "dilog", "epsilon_of", "exp_type", "gamma_m_contour", "get_entry", "indicator", "inner_exp_type",
    "integrand_bound", "interpolant_contour", "kernel_g", "log_branch", "order_estimate", "parse_expr",
    "phi_deformed", "phi_interpolant", "power_cut0", "reciprocal_bound_constant", "render",
    "residue_partial_sum", "select_theta", "stirling_gamma_bound", "tail_integral", "truncation_radius",
]
