"""Globally adaptive Gauss-Kronrod quadrature in one and two dimensions.

Integrands are called with numpy arrays and must be vectorized.  Every
routine keeps a running count of integrand evaluations and raises
:class:`ConvergenceError` once ``Tolerance.max_evals`` would be exceeded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import ConvergenceError, DomainError

# 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
_XK = np.array([
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144845693013,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144845693013,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
])
# Gauss weights live on the odd Kronrod nodes.
_WG = np.zeros(15)
_WG[1::2] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
]


@dataclass(frozen=True)
class Tolerance:
    """Stopping criteria: |error| <= max(abs, rel * |estimate|) within max_evals calls."""

    rel: float = 1e-10
    abs: float = 0.0
    max_evals: int = 2_000_000

    def __post_init__(self) -> None:
        if self.rel < 0 or self.abs < 0:
            raise DomainError("tolerances must be non-negative")
        if not (self.rel > 0 or self.abs > 0):
            raise DomainError("at least one of rel/abs must be strictly positive")
        if self.max_evals < 1:
            raise DomainError("max_evals must be >= 1")

    def target(self, estimate: float) -> float:
        return max(self.abs, self.rel * abs(estimate))


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned integration box [x0, x1] x [y0, y1]."""

    x0: float
    x1: float
    y0: float
    y1: float


@dataclass(frozen=True)
class TruncatedPlane:
    """The whole plane, cut to a square around ``center``.

    The caller guarantees |f(r)| <= decay_coeff * |r - center|**(-decay_power)
    outside radius ``scale``.  The half-width is then chosen so that the
    analytic bound on the discarded tail is at most half of ``tol.abs``.
    """

    center: tuple[float, float]
    scale: float
    decay_coeff: float
    decay_power: float = 4.0

    def tail_bound(self, radius: float) -> float:
        p = self.decay_power
        return 2.0 * math.pi * self.decay_coeff * radius ** (2.0 - p) / (p - 2.0)

    def truncation_radius(self, budget: float) -> float:
        if self.decay_power < 4.0:
            raise DomainError("plane integrands must decay at least as |r|^-4")
        p = self.decay_power
        if self.decay_coeff <= 0.0:
            return self.scale
        radius = (2.0 * math.pi * self.decay_coeff / ((p - 2.0) * budget)) ** (1.0 / (p - 2.0))
        return max(radius, self.scale)


def _gk_panels(f: Callable, lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _XK[None, :]
    y = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    kron = half * (y @ _WK)
    gauss = half * (y @ _WG)
    return kron, np.abs(kron - gauss), x.size


def integrate(f: Callable, a: float, b: float, tol: Tolerance = Tolerance(), breakpoints=()) -> float:
    """Integrate a vectorized f over the finite interval [a, b]."""
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("integrate() needs finite limits; use integrate_semi_infinite")
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    edges = np.unique(np.clip(np.concatenate(([a], np.asarray(breakpoints, float), [b])), a, b))
    lo, hi = edges[:-1], edges[1:]
    vals, errs, evals = _gk_panels(f, lo, hi)
    while True:
        total = vals.sum()
        err = errs.sum()
        if err <= tol.target(total):
            return sign * float(total)
        # Bisect the panels carrying the largest errors, enough to cover half the excess.
        order = np.argsort(errs)[::-1]
        cum = np.cumsum(errs[order])
        need = err - 0.5 * tol.target(total)
        nsplit = int(np.searchsorted(cum, need) + 1)
        split = order[:nsplit]
        if evals + 2 * 15 * nsplit > tol.max_evals:
            raise ConvergenceError(
                f"integrate: error {err:.3g} above target {tol.target(total):.3g} after {evals} evaluations"
            )
        keep = np.ones(len(lo), bool)
        keep[split] = False
        m = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate((lo[split], m))
        new_hi = np.concatenate((m, hi[split]))
        nv, ne, n = _gk_panels(f, new_lo, new_hi)
        evals += n
        lo = np.concatenate((lo[keep], new_lo))
        hi = np.concatenate((hi[keep], new_hi))
        vals = np.concatenate((vals[keep], nv))
        errs = np.concatenate((errs[keep], ne))


def integrate_semi_infinite(f: Callable, tol: Tolerance = Tolerance(), scale: float = 1.0) -> float:
    """Integrate f over [0, inf) through the map xi = scale * t / (1 - t), t in [0, 1).

    ``scale`` should sit near the region where f changes most (for a Lorentzian
    that is its width), which puts that region mid-interval.
    """
    if not scale > 0.0:
        raise DomainError("scale must be positive")

    def mapped(t: np.ndarray) -> np.ndarray:
        one_minus = 1.0 - t
        xi = scale * t / one_minus
        return f(xi) * scale / (one_minus * one_minus)

    return integrate(mapped, 0.0, 1.0, tol, breakpoints=(0.25, 0.5, 0.75))


def _tensor_panels(f: Callable, x0, x1, y0, y1):
    hx = 0.5 * (x1 - x0)
    hy = 0.5 * (y1 - y0)
    mx = 0.5 * (x1 + x0)
    my = 0.5 * (y1 + y0)
    xs = mx[:, None] + hx[:, None] * _XK[None, :]
    ys = my[:, None] + hy[:, None] * _XK[None, :]
    X = np.broadcast_to(xs[:, :, None], (len(x0), 15, 15))
    Y = np.broadcast_to(ys[:, None, :], (len(x0), 15, 15))
    F = np.asarray(f(X.ravel(), Y.ravel()), dtype=float).reshape(X.shape)
    jac = hx * hy
    kk = jac * np.einsum("nij,i,j->n", F, _WK, _WK)
    gk = jac * np.einsum("nij,i,j->n", F, _WG, _WK)
    kg = jac * np.einsum("nij,i,j->n", F, _WK, _WG)
    ex = np.abs(kk - gk)
    ey = np.abs(kk - kg)
    return kk, ex, ey, X.size


def _graded_edges(center: float, scale: float, half_width: float) -> np.ndarray:
    steps = [0.0]
    s = 0.5 * scale
    while s < half_width:
        steps.append(s)
        s *= 2.0
    steps.append(half_width)
    pos = np.array(steps)
    return np.concatenate((center - pos[:0:-1], center + pos))


def integrate_2d(f: Callable, domain: Rectangle | TruncatedPlane, tol: Tolerance = Tolerance()) -> float:
    """Integrate a vectorized f(x, y) over a rectangle or over the (truncated) plane.

    Tensor-product Gauss-Kronrod cells are bisected along the axis whose
    error estimate dominates.  For a :class:`TruncatedPlane` half of
    ``tol.abs`` is reserved for the discarded tail, so ``tol.abs`` must be
    positive in that case.
    """
    budget = tol
    if isinstance(domain, TruncatedPlane):
        if not tol.abs > 0.0:
            raise DomainError("plane integration needs tol.abs > 0 to size the truncation")
        cx, cy = domain.center
        radius = domain.truncation_radius(0.5 * tol.abs)
        xe = _graded_edges(cx, domain.scale, radius)
        ye = _graded_edges(cy, domain.scale, radius)
        budget = Tolerance(rel=tol.rel, abs=0.5 * tol.abs, max_evals=tol.max_evals)
    else:
        xe = np.array([domain.x0, domain.x1], float)
        ye = np.array([domain.y0, domain.y1], float)
        if not (xe[1] > xe[0] and ye[1] > ye[0]):
            raise DomainError("rectangle must have x0 < x1 and y0 < y1")
    gx, gy = np.meshgrid(np.arange(len(xe) - 1), np.arange(len(ye) - 1), indexing="ij")
    x0 = xe[gx.ravel()]
    x1 = xe[gx.ravel() + 1]
    y0 = ye[gy.ravel()]
    y1 = ye[gy.ravel() + 1]
    vals, ex, ey, evals = _tensor_panels(f, x0, x1, y0, y1)
    while True:
        errs = ex + ey
        total = vals.sum()
        err = errs.sum()
        if err <= budget.target(total):
            return float(total)
        order = np.argsort(errs)[::-1]
        cum = np.cumsum(errs[order])
        nsplit = int(np.searchsorted(cum, err - 0.5 * budget.target(total)) + 1)
        split = order[:nsplit]
        if evals + 2 * 225 * nsplit > tol.max_evals:
            raise ConvergenceError(
                f"integrate_2d: error {err:.3g} above target {budget.target(total):.3g} after {evals} evaluations"
            )
        keep = np.ones(len(x0), bool)
        keep[split] = False
        along_x = ex[split] >= ey[split]
        sx0, sx1, sy0, sy1 = x0[split], x1[split], y0[split], y1[split]
        mx = 0.5 * (sx0 + sx1)
        my = 0.5 * (sy0 + sy1)
        a_x1 = np.where(along_x, mx, sx1)
        a_y1 = np.where(along_x, sy1, my)
        b_x0 = np.where(along_x, mx, sx0)
        b_y0 = np.where(along_x, sy0, my)
        nx0 = np.concatenate((sx0, b_x0))
        nx1 = np.concatenate((a_x1, sx1))
        ny0 = np.concatenate((sy0, b_y0))
        ny1 = np.concatenate((a_y1, sy1))
        nv, nex, ney, n = _tensor_panels(f, nx0, nx1, ny0, ny1)
        evals += n
        x0 = np.concatenate((x0[keep], nx0))
        x1 = np.concatenate((x1[keep], nx1))
        y0 = np.concatenate((y0[keep], ny0))
        y1 = np.concatenate((y1[keep], ny1))
        vals = np.concatenate((vals[keep], nv))
        ex = np.concatenate((ex[keep], nex))
        ey = np.concatenate((ey[keep], ney))
