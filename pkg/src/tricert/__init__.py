"""Validated numerics for the anti-quadratic family f_c(z) = conj(z)^2 + c.

Interval-certified predicates over parameter rectangles: quadratic-like
restriction, argument-principle fixed-point counting, attracting-cycle
and parabolic-exclusion certification, plus exact angle combinatorics,
escape-time rendering, and a line-oriented certificate format.
"""

from .intervals import ComplexBox, EmptyIntervalError, Interval, ZeroDivisionBoxError
from .scan import Leaf, ParamCertificate, ScanTree, adaptive_scan, component_rollup
from .verify import ClaimResult, Status

__version__ = "0.1.0"

__all__ = [
    "Interval",
    "ComplexBox",
    "EmptyIntervalError",
    "ZeroDivisionBoxError",
    "Status",
    "ClaimResult",
    "Leaf",
    "ScanTree",
    "ParamCertificate",
    "adaptive_scan",
    "component_rollup",
    "__version__",
]
