"""Mittag-Leffler E_a(-x), 0 < a < 1: direct summation, optimally truncated
inverse-power expansion, and the erfc-smoothed exponentially small remainder."""

from .algebraic import (
    TruncationData,
    algebraic_partial_sum,
    algebraic_term,
    optimal_truncation,
    script_E,
    script_E_detail,
)
from .errors import (
    DomainError,
    GammaPole,
    MLStokesError,
    PoleTooCloseToSaddle,
    PrecisionBudgetExceeded,
    TableOrderUnavailable,
    TruncationOverflow,
    ValidityWarning,
)
from .near_one import b_tables_near_one
from .oracle import MLParams, eval_ml_series, recursion_check, remainder_direct
from .precision import PiMultiple, PrecisionContext, TruncatedSeries
from .specfun import erfc_complex, gamma_hp, rgamma_hp
from .stokes import (
    ExpansionReport,
    alpha_closed_forms,
    exp_small_general_theta,
    exp_small_remainder,
    exp_small_two_sided,
    f_coefficients,
    leading_order_estimate,
    make_geometry,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError", "ExpansionReport", "GammaPole", "MLParams", "MLStokesError", "PiMultiple",
    "PoleTooCloseToSaddle", "PrecisionBudgetExceeded", "PrecisionContext",
    "TableOrderUnavailable", "TruncatedSeries", "TruncationData", "TruncationOverflow",
    "ValidityWarning", "algebraic_partial_sum", "algebraic_term", "alpha_closed_forms",
    "b_tables_near_one", "erfc_complex", "eval_ml_series", "exp_small_general_theta",
    "exp_small_remainder", "exp_small_two_sided", "f_coefficients", "gamma_hp",
    "leading_order_estimate", "make_geometry", "optimal_truncation", "recursion_check",
    "remainder_direct", "rgamma_hp", "script_E", "script_E_detail",
]
