"""Exact high-temperature expansion for s = 1."""

from .expansion import (
    ANSATZ_SHIFTS, HTEResult, contour_residue_rhs, match_ansatz, matched_identity_residual,
    numeric_rhs_order, run_hte, shift_laurent, specific_heat_coefficients, t0_exponent,
)
from .gauss import Gauss
from .laurent import LaurentAtPoint
from .pade import PadeApproximant, pade
from .polerational import PoleRational
from .series import BetaSeries

__all__ = [
    "ANSATZ_SHIFTS", "BetaSeries", "Gauss", "HTEResult", "LaurentAtPoint", "PadeApproximant",
    "PoleRational", "contour_residue_rhs", "match_ansatz", "matched_identity_residual",
    "numeric_rhs_order", "pade", "run_hte", "shift_laurent", "specific_heat_coefficients",
    "t0_exponent",
]
