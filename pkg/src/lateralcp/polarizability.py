"""Single-pole Lorentz dielectric model, prolate spheroid polarizability, and dipole second moments."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np
from scipy.constants import epsilon_0, hbar

from .classical import DipoleState, axis_vector
from .errors import DomainError
from .numerics.quadrature import Tolerance, integrate_semi_infinite

# Prefactor printed in the SI polarizability of the spheroid.  It cancels from
# every phase, regime boundary and minimum position; only absolute energies and
# frequencies scale with it.
POLARIZABILITY_FACTOR = 1e-6

MomentMatrix = DipoleState


@dataclass(frozen=True)
class LorentzOscillator:
    """eps(i xi) = 1 + B1 omega1^2 / (xi^2 + omega1^2); omega1 in rad/s."""

    B1: float
    omega1: float
    name: str = ""
    density: float | None = None

    def __post_init__(self) -> None:
        if not (self.B1 > 0 and self.omega1 > 0):
            raise DomainError("Lorentz oscillator needs B1 > 0 and omega1 > 0")


DIAMOND = LorentzOscillator(B1=4.91, omega1=1.777e16, name="diamond", density=3510.0)


def load_catalog(path: str | Path | None = None) -> dict[str, LorentzOscillator]:
    """Read a material catalog (bundled one by default), validated against its JSON schema."""
    pkg = resources.files("lateralcp") / "data"
    schema = json.loads((pkg / "materials.schema.json").read_text())
    text = Path(path).read_text() if path is not None else (pkg / "materials.json").read_text()
    data = json.loads(text)
    jsonschema.validate(data, schema)
    return {
        m["name"]: LorentzOscillator(m["B1"], m["omega1_rad_s"], m["name"], m.get("density_kg_m3"))
        for m in data["materials"]
    }


def epsilon_imag_axis(material: LorentzOscillator, xi):
    """Permittivity at imaginary frequency i*xi (xi >= 0, rad/s)."""
    x = np.asarray(xi, dtype=float)
    if np.any(x < 0):
        raise DomainError("xi must be >= 0")
    w2 = material.omega1**2
    out = 1.0 + material.B1 * w2 / (x * x + w2)
    return float(out) if out.ndim == 0 else out


def depolarization_factors(aspect: float) -> tuple[float, float]:
    """(n_p, n_t) for a prolate spheroid with semi-major/semi-minor ratio ``aspect``.

    n_p = (1 - e^2)/e^2 * (artanh(e)/e - 1), e = sqrt(1 - aspect^-2), and
    n_t = (1 - n_p)/2.  A series in e^2 is used near the sphere to avoid
    cancellation.
    """
    if not aspect >= 1.0:
        raise DomainError(f"prolate aspect ratio must be >= 1, got {aspect!r}")
    e2 = 1.0 - 1.0 / (aspect * aspect)
    if e2 < 1e-3:
        # (artanh(e)/e - 1) / e^2 = sum_{k>=1} e^{2(k-1)} / (2k + 1)
        s = sum(e2 ** (k - 1) / (2 * k + 1) for k in range(1, 12))
        n_p = (1.0 - e2) * s
    else:
        e = math.sqrt(e2)
        n_p = (1.0 - e2) / e2 * (math.atanh(e) / e - 1.0)
    return n_p, 0.5 * (1.0 - n_p)


@dataclass(frozen=True)
class SpheroidParticle:
    """Prolate spheroid; orientation (phi, theta) gives its symmetry axis direction."""

    semi_major: float
    semi_minor: float
    material: LorentzOscillator = DIAMOND
    density: float | None = None
    phi: float = 0.0
    theta: float = 0.0

    def __post_init__(self) -> None:
        if not self.semi_minor > 0:
            raise DomainError("semi-minor axis must be positive")
        if self.semi_major < self.semi_minor:
            raise DomainError("semi_major must be >= semi_minor (prolate or sphere)")
        if self.density is not None and not self.density > 0:
            raise DomainError("density must be positive")

    @classmethod
    def from_aspect(cls, aspect: float, semi_minor: float = 2e-9, **kw) -> "SpheroidParticle":
        return cls(semi_major=aspect * semi_minor, semi_minor=semi_minor, **kw)

    @property
    def aspect(self) -> float:
        return self.semi_major / self.semi_minor

    @property
    def volume(self) -> float:
        return 4.0 / 3.0 * math.pi * self.semi_minor**2 * self.semi_major

    @property
    def mass_density(self) -> float | None:
        return self.density if self.density is not None else self.material.density

    @property
    def mass(self) -> float:
        rho = self.mass_density
        if rho is None:
            raise DomainError("particle mass needs a density (none given and none in the material)")
        return rho * self.volume

    def oriented(self, phi: float, theta: float) -> "SpheroidParticle":
        return replace(self, phi=phi, theta=theta)


def _response(material: LorentzOscillator, n: float, xi):
    chi = epsilon_imag_axis(material, xi) - 1.0
    return chi / (1.0 + chi * n)


def alpha_components(particle: SpheroidParticle, xi) -> tuple[float, float]:
    """(alpha_p, alpha_t) at imaginary frequency i*xi, SI units (C m^2 / V)."""
    n_p, n_t = depolarization_factors(particle.aspect)
    pref = epsilon_0 * particle.volume * POLARIZABILITY_FACTOR
    return pref * _response(particle.material, n_p, xi), pref * _response(particle.material, n_t, xi)


def axis_moment_closed(material: LorentzOscillator, n: float) -> float:
    """Int_0^inf (eps-1)/(1+(eps-1)n) dxi = pi B1 omega1 / (2 sqrt(1 + n B1))."""
    return math.pi * material.B1 * material.omega1 / (2.0 * math.sqrt(1.0 + n * material.B1))


def axis_moment_quadrature(material: LorentzOscillator, n: float, tol: Tolerance | None = None) -> float:
    tol = tol or Tolerance(rel=1e-12, abs=0.0)
    return integrate_semi_infinite(lambda xi: _response(material, n, xi), tol, scale=material.omega1)


def principal_moments(particle: SpheroidParticle, method: str = "closed") -> tuple[float, float]:
    """(I_p, I_t): hbar/pi * Int alpha_{p,t}(i xi) dxi, in C^2 m^2."""
    n_p, n_t = depolarization_factors(particle.aspect)
    if method == "closed":
        integral = axis_moment_closed
    elif method == "quadrature":
        integral = axis_moment_quadrature
    else:
        raise DomainError(f"unknown method {method!r}")
    pref = hbar / math.pi * epsilon_0 * particle.volume * POLARIZABILITY_FACTOR
    return pref * integral(particle.material, n_p), pref * integral(particle.material, n_t)


def moments_for_axis(i_p: float, i_t: float, phi: float, theta: float) -> np.ndarray:
    """I_t * Id + (I_p - I_t) n n^T for axis n(phi, theta)."""
    n = axis_vector(phi, theta)
    return i_t * np.eye(3) + (i_p - i_t) * np.outer(n, n)


def moment_matrix(particle: SpheroidParticle, method: str = "closed") -> MomentMatrix:
    """<d_i d_j> for the particle at its orientation."""
    i_p, i_t = principal_moments(particle, method)
    return MomentMatrix(moments_for_axis(i_p, i_t, particle.phi, particle.theta))
