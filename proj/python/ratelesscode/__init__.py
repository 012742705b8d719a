"""Layered rateless code design and validation toolkit."""

from ._core import (
    CodeSpec,
    DimensionError,
    GainMatrix,
    OptimizeResult,
    PowerAllocation,
    RateTooHighError,
    ShortfallReport,
    SimReport,
    accumulated_layer_mi,
    allocate_powers,
    asymptotic_layering_loss,
    conservative_rate,
    design_2x2,
    design_3x3,
    efficiency_lower_bound,
    ideal_threshold_gain_sq,
    layered_threshold_gain_sq,
    layering_loss_db,
    max_rate_3x3,
    optimize_gain_matrix,
    simulate,
    validate_perfect,
    verify_allocation,
)

__version__ = "0.1.0"

__all__ = [
    "CodeSpec",
    "DimensionError",
    "GainMatrix",
    "OptimizeResult",
    "PowerAllocation",
    "RateTooHighError",
    "ShortfallReport",
    "SimReport",
    "accumulated_layer_mi",
    "allocate_powers",
    "asymptotic_layering_loss",
    "conservative_rate",
    "design_2x2",
    "design_3x3",
    "efficiency_lower_bound",
    "ideal_threshold_gain_sq",
    "layered_threshold_gain_sq",
    "layering_loss_db",
    "max_rate_3x3",
    "optimize_gain_matrix",
    "simulate",
    "validate_perfect",
    "verify_allocation",
]
