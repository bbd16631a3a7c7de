"""Rigorous bounds and infeasibility certificates for conic programs.

Approximate solutions from any floating-point solver go in; provable
enclosures of the optimal value (or verified infeasibility rays) come out.
"""

from .bounds import BoundReport, ConicProblem, lower_bound, upper_bound, weak_duality_check
from .certificates import Certificate, check_dual_infeasible, check_primal_infeasible
from .cones import BlockVector, ConeSpec, UpperBoundX, UpperBoundY
from .errors import IntervalDivisionError, ParseError, ShapeError, VerificationError
from .interval import Interval, from_decimal
from .sdpmat import SymMatrix

__version__ = "0.1.0"

__all__ = [
    "BlockVector", "BoundReport", "Certificate", "ConeSpec", "ConicProblem", "Interval",
    "IntervalDivisionError", "ParseError", "ShapeError", "SymMatrix", "UpperBoundX",
    "UpperBoundY", "VerificationError", "check_dual_infeasible", "check_primal_infeasible",
    "from_decimal", "lower_bound", "upper_bound", "weak_duality_check",
]
