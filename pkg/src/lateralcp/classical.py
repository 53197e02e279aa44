"""Electrostatic energy of a dipole above a grounded, corrugated conductor.

All quantities are SI.  The same code serves the quantum problem: every
function takes a symmetric 3x3 second-moment matrix, which is d d^T for a
permanent dipole and <d_i d_j> for a polarizable particle.

Energy pieces
-------------
flat plane   U0 = -(D_xx + D_yy + 2 D_zz) / (64 pi eps0 z0^3)
sinusoid     U1 = -3 a A / (512 pi eps0 z0^4) * cos(k x0 - delta)
             with B = -2 D_xz R_xz(u), C = D_xx R_xx + D_yy R_yy + D_zz R_zz,
             A = hypot(B, C), delta = atan2(B, C), u = k z0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.constants import epsilon_0

from .errors import DomainError, NullAmplitude, PerturbativityViolation
from .kernels import kernel_I, response_all_scaled
from .numerics.bessel import UNDERFLOW_ARG
from .profiles import RoughnessProfile, fourier_modes

MAX_AMPLITUDE_RATIO = 0.1
NULL_THRESHOLD = 1e-9
PHASE_TOL = 1e-9
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DipoleState:
    """Symmetric positive semidefinite second-moment matrix in C^2 m^2."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float)
        if m.shape != (3, 3):
            raise DomainError("second-moment matrix must be 3x3")
        scale = float(np.max(np.abs(m))) if m.size else 0.0
        if not np.allclose(m, m.T, rtol=1e-12, atol=1e-12 * scale):
            raise DomainError("second-moment matrix must be symmetric")
        m = 0.5 * (m + m.T)
        if scale > 0 and np.min(np.linalg.eigvalsh(m)) < -1e-10 * scale:
            raise DomainError("second-moment matrix must be positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_vector(cls, d) -> "DipoleState":
        d = np.asarray(d, dtype=float)
        return cls(np.outer(d, d))

    @classmethod
    def from_angles(cls, magnitude: float, phi: float, theta: float) -> "DipoleState":
        """Dipole |d| along (sin t cos p, sin t sin p, cos t)."""
        return cls.from_vector(magnitude * axis_vector(phi, theta))

    @classmethod
    def isotropic(cls, value: float) -> "DipoleState":
        return cls(value * np.eye(3))

    def scaled(self, factor: float) -> "DipoleState":
        return DipoleState(self.matrix * factor)

    @property
    def plane_weight(self) -> float:
        """D_xx + D_yy + 2 D_zz, the combination entering the flat-plane energy."""
        m = self.matrix
        return float(m[0, 0] + m[1, 1] + 2.0 * m[2, 2])


Moments = Union[DipoleState, np.ndarray]


def axis_vector(phi: float, theta: float) -> np.ndarray:
    return np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])


def _matrix(D: Moments) -> np.ndarray:
    return D.matrix if isinstance(D, DipoleState) else np.asarray(D, dtype=float)


@dataclass(frozen=True)
class Geometry:
    """Particle height z0, sinusoid amplitude a and period lam, lateral position x0 (meters)."""

    z0: float
    a: float
    lam: float
    x0: float = 0.0
    allow_large_amplitude: bool = False

    def __post_init__(self) -> None:
        if not self.z0 > 0:
            raise DomainError(f"z0 must be positive, got {self.z0!r}")
        if not self.lam > 0:
            raise DomainError(f"lambda must be positive, got {self.lam!r}")
        if self.a < 0:
            raise DomainError("amplitude must be non-negative")
        check_perturbative(self.a, self.z0, self.allow_large_amplitude)

    @property
    def k(self) -> float:
        return TWO_PI / self.lam

    @property
    def u(self) -> float:
        return self.k * self.z0

    @property
    def lam_over_z0(self) -> float:
        return self.lam / self.z0


def check_perturbative(height: float, z0: float, allow: bool = False) -> None:
    if not allow and height > MAX_AMPLITUDE_RATIO * z0:
        raise PerturbativityViolation(
            f"max corrugation height {height:g} exceeds {MAX_AMPLITUDE_RATIO} * z0 = {MAX_AMPLITUDE_RATIO * z0:g}"
        )


class Regime(str, enum.Enum):
    PEAK = "peak"
    VALLEY = "valley"
    INTERMEDIATE = "intermediate"
    NULL = "null"


@dataclass(frozen=True)
class RegimeResult:
    B: float
    C: float
    A: float
    delta: float
    regime: Regime
    xmin_over_lambda: float
    x_min: float | None = None


def u0_classical(D: Moments, z0: float) -> float:
    """Dipole energy above a flat grounded plane at distance z0 (J)."""
    if not z0 > 0:
        raise DomainError(f"z0 must be positive, got {z0!r}")
    m = _matrix(D)
    return -(m[0, 0] + m[1, 1] + 2.0 * m[2, 2]) / (64.0 * math.pi * epsilon_0 * z0**3)


def du0_dz0(D: Moments, z0: float) -> float:
    """Analytic derivative of the flat-plane energy with respect to z0 (J/m)."""
    return -3.0 * u0_classical(D, z0) / z0


def _bc_scaled(m: np.ndarray, u: float) -> tuple[float, float, float, dict[str, float]]:
    r = response_all_scaled(u)
    B = -2.0 * m[0, 2] * r["xz"]
    C = m[0, 0] * r["xx"] + m[1, 1] * r["yy"] + m[2, 2] * r["zz"]
    return B, C, math.hypot(B, C), r


def bc_coefficients(D: Moments, u: float) -> tuple[float, float, float]:
    """(B, C, A) at u = k z0.  D_xy and D_yz do not contribute.

    Beyond the Bessel underflow point all three are exactly 0.
    """
    if not u > 0:
        raise DomainError(f"u must be positive, got {u!r}")
    B, C, A, _ = _bc_scaled(_matrix(D), u)
    if u > UNDERFLOW_ARG:
        return 0.0, 0.0, 0.0
    damp = math.exp(-u)
    return B * damp, C * damp, A * damp


def phase_delta(B: float, C: float, null_level: float = 0.0) -> float:
    """delta in [0, 2 pi) with sin(delta) = B/A and cos(delta) = C/A."""
    if math.hypot(B, C) <= null_level:
        raise NullAmplitude(f"amplitude hypot({B:g}, {C:g}) is at or below {null_level:g}")
    d = math.atan2(B, C)
    if d < 0.0:
        d += TWO_PI
    if d >= TWO_PI:
        d = 0.0
    return d


def _null_level(m: np.ndarray, r: dict[str, float]) -> float:
    rmax = max(abs(r["xx"]), r["yy"], r["zz"], abs(r["xz"]))
    return NULL_THRESHOLD * float(np.trace(m)) * rmax


def _label(delta: float) -> Regime:
    if delta < PHASE_TOL or TWO_PI - delta < PHASE_TOL:
        return Regime.PEAK
    if abs(delta - math.pi) < PHASE_TOL:
        return Regime.VALLEY
    return Regime.INTERMEDIATE


def classify_regime(D: Moments, u: float, lam: float | None = None) -> RegimeResult:
    """Peak / valley / intermediate / null classification at u = 2 pi z0 / lambda.

    The minimum over one period sits at x_min = delta * lambda / (2 pi).
    The regime is decided from the exponentially scaled B and C, so it
    stays meaningful where the energies themselves underflow.
    """
    if not u > 0:
        raise DomainError(f"u must be positive, got {u!r}")
    m = _matrix(D)
    Bs, Cs, As, r = _bc_scaled(m, u)
    B, C, A = bc_coefficients(m, u)
    if As <= _null_level(m, r):
        return RegimeResult(B, C, A, float("nan"), Regime.NULL, float("nan"), None)
    delta = phase_delta(Bs, Cs)
    frac = delta / TWO_PI
    return RegimeResult(B, C, A, delta, _label(delta), frac, None if lam is None else frac * lam)


def xmin(D: Moments, u: float, lam: float) -> float:
    """Lateral position of the energy minimum in [0, lambda)."""
    res = classify_regime(D, u, lam)
    if res.regime is Regime.NULL:
        raise NullAmplitude("lateral amplitude vanishes; no preferred position")
    return res.x_min


def sinusoid_prefactor(a: float, z0: float) -> float:
    return 3.0 * a / (512.0 * math.pi * epsilon_0 * z0**4)


def u1_classical_sinusoid(D: Moments, geom: Geometry, x0=None):
    """First-order corrugation energy above h = a cos(k x) (J).

    ``x0`` defaults to ``geom.x0`` and may be an array for landscapes.
    """
    B, C, _ = bc_coefficients(D, geom.u)
    x = geom.x0 if x0 is None else np.asarray(x0, dtype=float)
    kx = geom.k * x
    # A cos(kx - delta) = C cos(kx) + B sin(kx)
    out = -sinusoid_prefactor(geom.a, geom.z0) * (C * np.cos(kx) + B * np.sin(kx))
    return float(out) if np.ndim(out) == 0 else out


def u1_classical_general(
    D: Moments,
    profile: RoughnessProfile,
    z0: float,
    r0=(0.0, 0.0),
    allow_large_amplitude: bool = False,
) -> float:
    """First-order corrugation energy for an arbitrary profile, summed over its spectral lines (J)."""
    if not z0 > 0:
        raise DomainError(f"z0 must be positive, got {z0!r}")
    check_perturbative(profile.max_height, z0, allow_large_amplitude)
    m = _matrix(D)
    x0, y0 = float(r0[0]), float(r0[1])
    total = 0j
    for line in fourier_modes(profile):
        q = line.wavevector
        phase = complex(math.cos(q.qx * x0 + q.qy * y0), math.sin(q.qx * x0 + q.qy * y0))
        total += line.amplitude * phase * kernel_I(z0, q).contract(m)
    return -total.real / (64.0 * math.pi * epsilon_0)


def pfa_u1(D: Moments, height: float, z0: float) -> float:
    """Proximity-force estimate of the corrugation energy: -h(x0) dU0/dz0."""
    return -height * du0_dz0(D, z0)
