"""Slow real-space evaluation of the first-order corrugation energy.

This path never touches Bessel functions or Fourier kernels; it integrates
the perturbed Green function directly over the surface plane and exists to
cross-check :func:`lateralcp.classical.u1_classical_general`.

Derivation (Green functions normalized as 1/|r - r'|; energies carry 1/(8 pi eps0)):

    G1(r, r') = -(1/4pi) Int d2s h(s) dG0(r, s)/dz_s dG0(s, r')/dz_s |_{z_s = 0}

and dG0(r, s)/dz_s at z_s = 0 equals 2 F(r - s) with F(v) = v_z / |v|^3.  So

    G1(r, r') = -(1/pi) Int d2s h(s) F(r - s) F(r' - s),

and applying (D_ij d_i d'_j) at r = r' = r0 gives a quadratic form of the
gradient g = grad F evaluated at v = r0 - s:

    U1 = -1/(8 pi^2 eps0) Int d2s h(s) g^T D g,
    g = (-3 v_z v_x, -3 v_z v_y, |v|^2 - 3 v_z^2) / |v|^5.

|g|^2 = (rho^2 + 4 z0^2) / |v|^8 <= 4 z0^-4 (z0 / rho)^6, which supplies the
tail bound for truncating the plane.  See docs/oracle_derivation.md.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.constants import epsilon_0

from .classical import Moments, _matrix, check_perturbative
from .errors import DomainError
from .numerics.quadrature import Tolerance, TruncatedPlane, integrate_2d
from .profiles import RoughnessProfile


def gradient_kernel(sx: np.ndarray, sy: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """grad F at v = (-sx, -sy, 1), i.e. in units where z0 = 1."""
    rho2 = sx * sx + sy * sy
    r2 = rho2 + 1.0
    inv5 = r2 ** -2.5
    return 3.0 * sx * inv5, 3.0 * sy * inv5, (rho2 - 2.0) * inv5


def oracle_integrand(m: np.ndarray, profile: RoughnessProfile, z0: float, r0):
    x0, y0 = float(r0[0]), float(r0[1])

    def f(sx, sy):
        gx, gy, gz = gradient_kernel(sx, sy)
        quad = (
            m[0, 0] * gx * gx + m[1, 1] * gy * gy + m[2, 2] * gz * gz
            + 2.0 * (m[0, 1] * gx * gy + m[0, 2] * gx * gz + m[1, 2] * gy * gz)
        )
        h = profile.evaluate(x0 + z0 * sx, y0 + z0 * sy, periodic=True)
        return h * quad

    return f


def oracle_u1_realspace(
    D: Moments,
    profile: RoughnessProfile,
    z0: float,
    r0=(0.0, 0.0),
    tol: Tolerance | None = None,
    allow_large_amplitude: bool = False,
) -> float:
    """First-order corrugation energy (J) from the plane integral of the perturbed Green function.

    ``tol`` applies to the dimensionless integral (lengths in units of z0);
    the default asks for 1e-13 of max|h| * trace(D) absolute and 1e-9
    relative accuracy.
    """
    if not z0 > 0:
        raise DomainError(f"z0 must be positive, got {z0!r}")
    check_perturbative(profile.max_height, z0, allow_large_amplitude)
    m = _matrix(D)
    hmax = profile.max_height
    trace = float(np.trace(m))
    if hmax == 0.0 or trace == 0.0:
        return 0.0
    if tol is None:
        tol = Tolerance(rel=1e-9, abs=1e-13 * hmax * trace, max_evals=60_000_000)
    lam_max = float(np.max(np.abs(np.linalg.eigvalsh(m))))
    domain = TruncatedPlane(center=(0.0, 0.0), scale=1.0, decay_coeff=4.0 * hmax * lam_max, decay_power=6.0)
    value = integrate_2d(oracle_integrand(m, profile, z0, r0), domain, tol)
    return -value / (8.0 * math.pi**2 * epsilon_0 * z0**4)
