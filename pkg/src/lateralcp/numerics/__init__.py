"""Special functions, quadrature and root finding used throughout the package."""

from .bessel import (
    UNDERFLOW_ARG,
    bessel_k,
    bessel_k_all_scaled,
    bessel_k_flagged,
    bessel_k_scaled,
)
from .quadrature import Rectangle, Tolerance, TruncatedPlane, integrate, integrate_2d, integrate_semi_infinite
from .roots import Bracket, find_root, scan_brackets

__all__ = [
    "UNDERFLOW_ARG",
    "Bracket",
    "Rectangle",
    "Tolerance",
    "TruncatedPlane",
    "bessel_k",
    "bessel_k_all_scaled",
    "bessel_k_flagged",
    "bessel_k_scaled",
    "find_root",
    "integrate",
    "integrate_2d",
    "integrate_semi_infinite",
    "scan_brackets",
]
