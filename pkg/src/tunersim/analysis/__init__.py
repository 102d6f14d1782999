"""Excitation measurement, Lyapunov evaluation and convergence certificates."""

from tunersim.analysis.excitation import PEReport, pe_epsilon, pe_sensitivity
from tunersim.analysis.lyapunov import (
    EnvelopeReport,
    MonotoneReport,
    check_envelope,
    check_monotone,
    lyapunov,
    parameter_error,
)
from tunersim.analysis.rates import (
    RateReport,
    hb_rate_terms,
    na_rate_terms,
    na_xi,
    rate_bound_hb,
    rate_bound_na,
)

__all__ = [
    # Lyapunov
    "lyapunov",
    "parameter_error",
    "check_envelope",
    "check_monotone",
    "EnvelopeReport",
    "MonotoneReport",
    # Persistent excitation
    "pe_epsilon",
    "pe_sensitivity",
    "PEReport",
    # Rate bounds
    "rate_bound_hb",
    "rate_bound_na",
    "hb_rate_terms",
    "na_rate_terms",
    "na_xi",
    "RateReport",
]
