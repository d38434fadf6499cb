"""Exact enumeration and heuristic prediction of rational points on
missing-digit Cantor sets."""

from .digitsys import TERNARY, DigitSystem, expansion_of_rational, rational_in_set
from .enumerator import DenominatorRecord, enumerate_denominator
from .errors import BudgetError, CoverageError, DomainError, IntegrityError
from .numtheory import ell, euler_phi, mlo

__all__ = [
    "TERNARY",
    "DigitSystem",
    "expansion_of_rational",
    "rational_in_set",
    "DenominatorRecord",
    "enumerate_denominator",
    "BudgetError",
    "CoverageError",
    "DomainError",
    "IntegrityError",
    "ell",
    "euler_phi",
    "mlo",
]
