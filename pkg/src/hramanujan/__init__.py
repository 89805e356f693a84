"""Computational lab for the higher Ramanujan equations."""

from .series import TruncatedLaurentSeries, eisenstein_series, laurent_arith, monomial_substitute, theta_derive
from .charts import gauss_manin_matrix, ramanujan_field, verify_series_solution
from .symplectic import SiegelPoint, SymplecticElement, mobius_act, symplectic_check
from .periods import PolarizedTorus, period_matrices, phi_point, standard_bases
from .hilbert import QuadFieldElement, field_context

__version__ = "0.1.0"

__all__ = [
    "TruncatedLaurentSeries", "eisenstein_series", "laurent_arith", "monomial_substitute",
    "theta_derive", "gauss_manin_matrix", "ramanujan_field", "verify_series_solution",
    "SiegelPoint", "SymplecticElement", "mobius_act", "symplectic_check",
    "PolarizedTorus", "period_matrices", "phi_point", "standard_bases",
    "QuadFieldElement", "field_context",
]
