"""Bracketing root finder and a log-grid bracket scanner."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from ..errors import ConvergenceError, DomainError, NoSignChange
from .quadrature import Tolerance

_MACH = np.finfo(float).eps


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise DomainError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")


def find_root(
    f: Callable[[float], float],
    bracket: Bracket,
    tol: Tolerance = Tolerance(rel=4 * _MACH, abs=1e-300, max_evals=200),
) -> float:
    """Root of f inside ``bracket`` by Brent's method.

    The bracket is kept valid at every step, so the result always lies in
    [lo, hi].  Stops when the bracket half-width falls below
    ``tol.abs + tol.rel * |x|`` or f(x) == 0.

    Raises:
        NoSignChange: f(lo) and f(hi) have the same strict sign.
        ConvergenceError: ``tol.max_evals`` evaluations were not enough.
    """
    a, b = float(bracket.lo), float(bracket.hi)
    fa, fb = float(f(a)), float(f(b))
    evals = 2
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if math.copysign(1.0, fa) == math.copysign(1.0, fb):
        raise NoSignChange(f"f({a:g}) = {fa:g} and f({b:g}) = {fb:g} have the same sign")

    c, fc = a, fa
    d = e = b - a
    while True:
        if math.copysign(1.0, fb) == math.copysign(1.0, fc):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        xtol = 2.0 * _MACH * abs(b) + 0.5 * (tol.abs + tol.rel * abs(b))
        m = 0.5 * (c - b)
        if abs(m) <= xtol or fb == 0.0:
            return b
        if evals >= tol.max_evals:
            raise ConvergenceError(f"find_root: no convergence after {evals} evaluations (x = {b!r})")
        if abs(e) >= xtol and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * m * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            else:
                p = -p
            if 2.0 * p < min(3.0 * m * q - abs(xtol * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = m
        else:
            d = e = m
        a, fa = b, fb
        b += d if abs(d) > xtol else math.copysign(xtol, m)
        fb = float(f(b))
        evals += 1


def scan_brackets(f: Callable[[float], float], grid: Iterable[float]) -> list[Bracket]:
    """Adjacent grid pairs across which f changes sign, in grid order."""
    pts = [float(x) for x in grid]
    out = []
    prev_x, prev_f = pts[0], float(f(pts[0]))
    for x in pts[1:]:
        fx = float(f(x))
        if prev_f == 0.0:
            out.append(Bracket(min(prev_x, x), max(prev_x, x)))
        elif fx != 0.0 and math.copysign(1.0, fx) != math.copysign(1.0, prev_f):
            out.append(Bracket(min(prev_x, x), max(prev_x, x)))
        prev_x, prev_f = x, fx
    return out
