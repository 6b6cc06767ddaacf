"""Assumption checks, CF oracles, normality and tail diagnostics."""

from .report import SCHEMA_VERSION, DiagnosticsReport, TailEstimate, Verdict
from .assumptions import check_assumptions
from .cf import (
    CFDistance,
    CFEstimate,
    cf_distance,
    cf_distance_check,
    empirical_cf,
    theoretical_cf,
    theoretical_cf_estimate,
)
from .normality import NormalityResult, mardia_skewness, normality_test
from .tails import stochastic_order_test, tail_exponent

__all__ = [
    "SCHEMA_VERSION",
    "DiagnosticsReport",
    "TailEstimate",
    "Verdict",
    "check_assumptions",
    "CFDistance",
    "CFEstimate",
    "cf_distance",
    "cf_distance_check",
    "empirical_cf",
    "theoretical_cf",
    "theoretical_cf_estimate",
    "NormalityResult",
    "mardia_skewness",
    "normality_test",
    "stochastic_order_test",
    "tail_exponent",
]
