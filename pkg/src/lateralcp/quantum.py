"""Nonretarded Casimir-Polder energy of a polarizable spheroid over a corrugated conductor.

Energies reuse the classical formulas with d_i d_j replaced by the ground-state
moments <d_i d_j>.  On top of that this module locates regime borders (C = 0
at theta = pi/2), the null height, small-oscillation frequencies, and x_min maps
over orientations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import epsilon_0
from scipy.optimize import minimize_scalar

from .classical import (
    DipoleState,
    Geometry,
    Moments,
    Regime,
    _matrix,
    classify_regime,
    u0_classical,
    u1_classical_general,
    u1_classical_sinusoid,
)
from .errors import DomainError, NoSignChange, NullAmplitude
from .kernels import response_all_scaled
from .numerics.roots import find_root, scan_brackets
from .numerics.quadrature import Tolerance
from .polarizability import SpheroidParticle, moment_matrix, moments_for_axis, principal_moments
from .profiles import RoughnessProfile
from .sweep import Axis, SweepGrid

# lambda/z0 window scanned for C = 0, from large lambda/z0 (small u) downward.
BORDER_SCAN = (1e2, 1e-6)
BORDER_SCAN_POINTS = 801
_ROOT_TOL = Tolerance(rel=1e-14, abs=1e-300, max_evals=300)


@dataclass(frozen=True)
class CpScenario:
    particle: SpheroidParticle
    geom: Geometry

    @property
    def moments(self) -> DipoleState:
        return moment_matrix(self.particle)

    @property
    def nonretarded_note(self) -> str:
        return "nonretarded approximation assumed; not enforced"


def u0_cp(M: Moments, z0: float) -> float:
    """Flat-plane nonretarded Casimir-Polder energy (J)."""
    return u0_classical(M, z0)


def u1_cp_sinusoid(scenario: CpScenario, x0=None):
    """Corrugation correction above h = a cos(k x), at ``x0`` (default: scenario.geom.x0)."""
    return u1_classical_sinusoid(scenario.moments, scenario.geom, x0)


def u1_cp_general(
    particle: SpheroidParticle,
    profile: RoughnessProfile,
    z0: float,
    r0=(0.0, 0.0),
    allow_large_amplitude: bool = False,
) -> float:
    return u1_classical_general(moment_matrix(particle), profile, z0, r0, allow_large_amplitude)


def c_scaled(m: np.ndarray, u: float) -> float:
    """exp(u) * C(u) for a moment matrix; same sign as C, never underflows."""
    r = response_all_scaled(u)
    return m[0, 0] * r["xx"] + m[1, 1] * r["yy"] + m[2, 2] * r["zz"]


def c_zero_lambda_over_z0(D: Moments, scan: tuple[float, float] = BORDER_SCAN, points: int = BORDER_SCAN_POINTS) -> float:
    """Largest lambda/z0 in the scan window at which C changes sign.

    Small lambda/z0 is where C can turn negative, so the scan runs from the
    top of the window downward and the first crossing is the border above
    which only the peak regime exists.
    """
    m = _matrix(D)
    hi, lo = max(scan), min(scan)
    us = 2.0 * math.pi / np.geomspace(hi, lo, points)
    f = lambda u: c_scaled(m, u)  # noqa: E731
    brackets = scan_brackets(f, us)
    if not brackets:
        raise NoSignChange(f"C keeps one sign for lambda/z0 in [{lo:g}, {hi:g}]")
    u_star = find_root(f, brackets[0], _ROOT_TOL)
    return 2.0 * math.pi / u_star


def _axis_moments(particle: SpheroidParticle, phi: float, theta: float = math.pi / 2) -> np.ndarray:
    i_p, i_t = principal_moments(particle)
    return moments_for_axis(i_p, i_t, phi, theta)


def border_phi(particle: SpheroidParticle, phi: float, scan: tuple[float, float] = BORDER_SCAN) -> float:
    """lambda/z0 on the peak/valley border for the particle axis in-plane at azimuth phi."""
    if abs(math.cos(phi)) < 1e-12:
        raise DomainError("phi = pi/2 + n pi has no finite tan(phi) border")
    if particle.aspect == 1.0:
        raise NoSignChange("isotropic particle: C > 0 for every lambda/z0")
    return c_zero_lambda_over_z0(_axis_moments(particle, phi), scan)


def transition_g(particle: SpheroidParticle, scan: tuple[float, float] = BORDER_SCAN) -> float:
    """Transition value g: the lambda/z0 where C = 0 for the axis along x.  Sphere -> 0."""
    if particle.aspect == 1.0:
        return 0.0
    return border_phi(particle, 0.0, scan)


def classical_border_phi(phi: float, scan: tuple[float, float] = BORDER_SCAN) -> float:
    """Border lambda/z0 for a permanent dipole in-plane at azimuth phi."""
    if abs(math.cos(phi)) < 1e-12:
        raise DomainError("phi = pi/2 + n pi has no finite tan(phi) border")
    return c_zero_lambda_over_z0(DipoleState.from_angles(1.0, phi, math.pi / 2), scan)


def null_z0(particle: SpheroidParticle, lam: float, scan: tuple[float, float] = BORDER_SCAN) -> float:
    """Height z0 at which the lateral amplitude A vanishes for the oriented particle.

    A = 0 needs B = 0, so only orientations with <d_x d_z> = 0 can have one.
    """
    if not lam > 0:
        raise DomainError("lambda must be positive")
    m = moment_matrix(particle).matrix
    if abs(m[0, 2]) > 1e-12 * np.trace(m):
        raise NoSignChange("B != 0 at this orientation, so A > 0 at every height")
    return lam / c_zero_lambda_over_z0(m, scan)


def oscillation_frequency(scenario: CpScenario, mass: float | None = None) -> float:
    """Small-oscillation frequency (Hz) about the lateral energy minimum.

    Curvature of U1 at the minimum is 3 a pi A / (128 lam^2 z0^4 eps0).
    """
    g = scenario.geom
    m_p = scenario.particle.mass if mass is None else mass
    if not m_p > 0:
        raise DomainError("mass must be positive")
    res = classify_regime(scenario.moments, g.u, g.lam)
    if res.regime is Regime.NULL:
        raise NullAmplitude("lateral amplitude vanishes; no restoring force")
    curvature = 3.0 * g.a * math.pi * res.A / (128.0 * g.lam**2 * g.z0**4 * epsilon_0)
    return math.sqrt(curvature / m_p) / (2.0 * math.pi)


def frequency_curve(
    particle: SpheroidParticle, a: float, lam: float, z0s, mass: float | None = None, allow_large_amplitude: bool = False
) -> tuple[np.ndarray, np.ndarray]:
    """f(z0) on a grid plus a per-point regime label; null points report 0 Hz."""
    freqs = []
    labels = []
    for z0 in np.asarray(z0s, dtype=float):
        sc = CpScenario(particle, Geometry(float(z0), a, lam, allow_large_amplitude=allow_large_amplitude))
        res = classify_regime(sc.moments, sc.geom.u, lam)
        labels.append(res.regime.value)
        freqs.append(0.0 if res.regime is Regime.NULL else oscillation_frequency(sc, mass))
    return np.array(freqs), np.array(labels)


def locate_frequency_max(
    particle: SpheroidParticle,
    a: float,
    lam: float,
    z0_lo: float,
    z0_hi: float,
    mass: float | None = None,
    points: int = 400,
) -> tuple[float, float]:
    """(z0, f) of the largest frequency in [z0_lo, z0_hi]: dense scan, then bounded refinement."""
    z0s = np.linspace(z0_lo, z0_hi, points)
    fs, _ = frequency_curve(particle, a, lam, z0s, mass)
    i = int(np.argmax(fs))
    lo = z0s[max(i - 1, 0)]
    hi = z0s[min(i + 1, len(z0s) - 1)]

    def neg(z):
        return -oscillation_frequency(CpScenario(particle, Geometry(z, a, lam)), mass)

    res = minimize_scalar(neg, bounds=(lo, hi), method="bounded", options={"xatol": 1e-6 * (hi - lo)})
    return float(res.x), float(-res.fun)


def xmin_fractions(i_iso: float, i_axis: float, phis, thetas, u: float):
    """x_min / lambda on a (phi, theta) mesh for moments i_iso * Id + i_axis * n n^T.

    Returns (fraction, null_mask), both shaped (len(phis), len(thetas)).
    A permanent dipole is i_iso = 0, i_axis = |d|^2.
    """
    P, T = np.meshgrid(np.asarray(phis, float), np.asarray(thetas, float), indexing="ij")
    nx = np.sin(T) * np.cos(P)
    ny = np.sin(T) * np.sin(P)
    nz = np.cos(T)
    r = response_all_scaled(u)
    B = -2.0 * i_axis * nx * nz * r["xz"]
    C = (i_iso + i_axis * nx * nx) * r["xx"] + (i_iso + i_axis * ny * ny) * r["yy"] + (i_iso + i_axis * nz * nz) * r["zz"]
    A = np.hypot(B, C)
    trace = 3.0 * i_iso + i_axis
    rmax = max(abs(r["xx"]), r["yy"], r["zz"], abs(r["xz"]))
    null = A <= 1e-9 * trace * rmax
    delta = np.mod(np.arctan2(B, C), 2.0 * math.pi)
    frac = np.where(null, np.nan, delta / (2.0 * math.pi))
    frac = np.where(frac >= 1.0, 0.0, frac)
    return frac, null


def coverage_summary(fractions: np.ndarray, bins: int = 100) -> dict:
    """Share of [0, 1) hit by attained x_min/lambda values, and the peak-band half-width beta."""
    vals = fractions[np.isfinite(fractions)].ravel()
    if vals.size == 0:
        return {"coverage": 0.0, "beta": float("nan")}
    hit = np.zeros(bins, bool)
    hit[np.clip((vals * bins).astype(int), 0, bins - 1)] = True
    beta = float(np.max(np.minimum(vals, 1.0 - vals)))
    return {"coverage": float(hit.mean()), "beta": beta}


def _shape_moments(shape) -> tuple[float, float]:
    if isinstance(shape, SpheroidParticle):
        i_p, i_t = principal_moments(shape)
        return i_t, i_p - i_t
    if isinstance(shape, (int, float)):
        return 0.0, float(shape) ** 2
    raise DomainError("shape must be a SpheroidParticle or a dipole magnitude")


def xmin_map(shape, phis, thetas, lam_over_z0: float) -> SweepGrid:
    """x_min/lambda for every (phi, theta); null cells carry NaN and null=True.

    ``shape`` is a spheroid (its own orientation is ignored) or a permanent
    dipole magnitude for the classical map.
    """
    phis = np.asarray(phis, float)
    thetas = np.asarray(thetas, float)
    if phis.size == 0 or thetas.size == 0:
        raise DomainError("grid must be non-empty")
    i_iso, i_axis = _shape_moments(shape)
    u = 2.0 * math.pi / lam_over_z0
    frac, null = xmin_fractions(i_iso, i_axis, phis, thetas, u)
    records = []
    for i, p in enumerate(phis):
        for j, t in enumerate(thetas):
            records.append(
                {"phi_rad": float(p), "theta_rad": float(t), "xmin_over_lambda": float(frac[i, j]), "null": bool(null[i, j])}
            )
    axes = [
        Axis("phi_rad", float(phis[0]), float(phis[-1]), len(phis)),
        Axis("theta_rad", float(thetas[0]), float(thetas[-1]), len(thetas)),
    ]
    summary = coverage_summary(frac)
    return SweepGrid(axes, ["xmin_over_lambda", "null"], records, {"lambda_over_z0": lam_over_z0, **summary})
