"""Geometric response of a grounded conductor to a single corrugation Fourier mode.

Two families live here:

* ``kernel_I(z0, q)`` -- the 3x3 Fourier-space kernel weighting the dipole
  second moments for a wave vector q at height z0 (units 1/length^4).
* ``response_r(which, u)`` -- the dimensionless sinusoid response functions of
  u = k z0, related to the kernel by I_ij(z0, (k, 0)) = 3/(8 z0^4) R_ij(u),
  with an extra factor i for the xz entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics.bessel import UNDERFLOW_ARG, bessel_k_all_scaled

RESPONSE_NAMES = ("xx", "yy", "zz", "xz")


@dataclass(frozen=True)
class WaveVector:
    qx: float
    qy: float

    @property
    def norm(self) -> float:
        return math.hypot(self.qx, self.qy)

    def __neg__(self) -> "WaveVector":
        return WaveVector(-self.qx, -self.qy)


@dataclass(frozen=True)
class KernelMatrix:
    """Independent entries of the symmetric kernel; xz and yz are purely imaginary."""

    xx: float
    yy: float
    zz: float
    xy: float
    xz: complex
    yz: complex

    def as_array(self) -> np.ndarray:
        return np.array(
            [
                [self.xx, self.xy, self.xz],
                [self.xy, self.yy, self.yz],
                [self.xz, self.yz, self.zz],
            ],
            dtype=complex,
        )

    def contract(self, moments: np.ndarray) -> complex:
        """sum_ij D_ij I_ij over all nine ordered index pairs."""
        return complex(np.sum(np.asarray(moments) * self.as_array()))


def kernel_I(z0: float, q: WaveVector) -> KernelMatrix:
    """Fourier kernel I_ij(z0, q) = K2_ij K_2(z0|q|) + K3_ij K_3(z0|q|).

    q = 0 returns the finite analytic limit, diag(3, 3, 6) / z0^4.
    """
    if not z0 > 0.0:
        raise DomainError(f"z0 must be positive, got {z0!r}")
    qx, qy = float(q.qx), float(q.qy)
    qn = math.hypot(qx, qy)
    if qn == 0.0:
        inv4 = 1.0 / z0**4
        return KernelMatrix(3.0 * inv4, 3.0 * inv4, 6.0 * inv4, 0.0, 0j, 0j)
    u = z0 * qn
    if u > UNDERFLOW_ARG:
        return KernelMatrix(0.0, 0.0, 0.0, 0.0, 0j, 0j)
    _, k2s, k3s = bessel_k_all_scaled(u)
    damp = math.exp(-u)
    k2 = k2s * damp
    k3 = k3s * damp
    q2 = qn * qn
    q3 = q2 * qn
    xx = -0.375 * qx * qx * q2 * k2 + 0.375 * q3 / z0 * k3
    yy = -0.375 * qy * qy * q2 * k2 + 0.375 * q3 / z0 * k3
    zz = (2.0 + 0.375 * u * u) * q2 / (z0 * z0) * k2 + 0.25 * q3 / z0 * k3
    xy = -0.375 * qx * qy * q2 * k2
    xz = 1j * (qx * q2 / z0 * k2 - 0.375 * qx * q3 * k3)
    yz = 1j * (qy * q2 / z0 * k2 - 0.375 * qy * q3 * k3)
    return KernelMatrix(xx, yy, zz, xy, xz, yz)


def _fused(which: str, u: float, k2s: float, k3s: float) -> float:
    # u^3 * (polynomial combination of scaled K_2, K_3)
    if which == "xx":
        return u**3 * (k3s - u * k2s)
    if which == "yy":
        return u**3 * k3s
    if which == "zz":
        return u**3 * ((u + 16.0 / (3.0 * u)) * k2s + (2.0 / 3.0) * k3s)
    if which == "xz":
        return u**3 * ((8.0 / 3.0) * k2s - u * k3s)
    raise DomainError(f"unknown response function {which!r}; expected one of {RESPONSE_NAMES}")


_ZERO_LIMITS = {"xx": 8.0, "yy": 8.0, "zz": 16.0, "xz": 0.0}


def response_r_scaled(which: str, u: float) -> float:
    """exp(u) * R_which(u); never underflows, same sign as R."""
    if which not in RESPONSE_NAMES:
        raise DomainError(f"unknown response function {which!r}; expected one of {RESPONSE_NAMES}")
    if not u > 0.0:
        raise DomainError(f"response functions need u > 0, got {u!r}")
    _, k2s, k3s = bessel_k_all_scaled(u)
    return _fused(which, u, k2s, k3s)


def response_all_scaled(u: float) -> dict[str, float]:
    """All four scaled response functions at once (one Bessel evaluation)."""
    if not u > 0.0:
        raise DomainError(f"response functions need u > 0, got {u!r}")
    _, k2s, k3s = bessel_k_all_scaled(u)
    return {name: _fused(name, u, k2s, k3s) for name in RESPONSE_NAMES}


def response_r(which: str, u: float) -> float:
    """Sinusoid response function R_which(u) for which in {xx, yy, zz, xz}.

    Small u tends to 8, 8, 16, 0; for u beyond the Bessel underflow point the
    value is exactly 0.
    """
    scaled = response_r_scaled(which, u)
    if u > UNDERFLOW_ARG:
        return 0.0
    return scaled * math.exp(-u)


def response_limit_zero(which: str) -> float:
    """The u -> 0+ limit of R_which."""
    return _ZERO_LIMITS[which]
