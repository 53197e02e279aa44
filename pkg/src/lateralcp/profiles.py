"""Corrugation profiles h(r) as discrete spectral lines.

A profile is a sum of cosine modes plus, optionally, a periodic sampled
height grid.  Its Fourier data is a list of lines (q, c) with

    h(r) = sum_lines c * exp(i q . r),

so that integrals of h~(q) against a kernel collapse to sums over lines.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DomainError, EmptyProfile, OutOfGrid
from .kernels import WaveVector


@dataclass(frozen=True)
class CosineMode:
    """amplitude * cos(q . r + phase)."""

    amplitude: float
    wavevector: WaveVector
    phase: float = 0.0

    def __post_init__(self) -> None:
        if self.amplitude < 0:
            raise DomainError("cosine mode amplitude must be >= 0; shift the phase by pi instead")


@dataclass(frozen=True)
class HeightGrid:
    """Heights h[i, j] at x = i*dx, y = j*dy, treated as one period of a periodic surface."""

    heights: np.ndarray
    dx: float
    dy: float

    def __post_init__(self) -> None:
        h = np.array(self.heights, dtype=float)
        if h.ndim != 2 or h.size == 0:
            raise DomainError("height grid must be a non-empty 2-D array")
        if not (self.dx > 0 and self.dy > 0):
            raise DomainError("grid spacings must be positive")
        h.setflags(write=False)
        object.__setattr__(self, "heights", h)

    @property
    def shape(self) -> tuple[int, int]:
        return self.heights.shape


@dataclass(frozen=True)
class SpectralLine:
    wavevector: WaveVector
    amplitude: complex


@dataclass(frozen=True)
class RoughnessProfile:
    modes: tuple[CosineMode, ...] = ()
    grid: HeightGrid | None = None
    _lines: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "modes", tuple(self.modes))

    @classmethod
    def sinusoid(cls, amplitude: float, wavelength: float, phase: float = 0.0) -> "RoughnessProfile":
        """h(x) = amplitude * cos(2 pi x / wavelength + phase)."""
        if not wavelength > 0:
            raise DomainError("wavelength must be positive")
        return cls(modes=(CosineMode(amplitude, WaveVector(2 * math.pi / wavelength, 0.0), phase),))

    @classmethod
    def constant(cls, height: float, shape: tuple[int, int] = (1, 1), spacing: float = 1.0) -> "RoughnessProfile":
        return cls(grid=HeightGrid(np.full(shape, float(height)), spacing, spacing))

    @property
    def max_height(self) -> float:
        """Sum of mode amplitudes plus the largest |grid height|; an upper bound on max |h|."""
        bound = sum(m.amplitude for m in self.modes)
        if self.grid is not None:
            bound += float(np.max(np.abs(self.grid.heights)))
        return bound

    def fourier_modes(self) -> list[SpectralLine]:
        return fourier_modes(self)

    def evaluate(self, x, y=0.0, periodic: bool = False):
        return evaluate(self, x, y, periodic=periodic)


def _axis_lines(n: int, spacing: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Frequencies, source indices and weights along one axis.

    An even-length axis has an unpaired Nyquist term; it is split into two
    half-weight lines at +/- q_N so the reconstruction stays real between
    samples.
    """
    idx = np.arange(n)
    freq = 2.0 * math.pi * np.fft.fftfreq(n, d=spacing)
    weight = np.ones(n)
    if n % 2 == 0 and n > 1:
        nyq = n // 2
        q_n = abs(freq[nyq])
        idx = np.append(idx, nyq)
        freq = np.append(freq, -q_n)
        freq[nyq] = q_n
        weight = np.append(weight, 0.5)
        weight[nyq] = 0.5
    return freq, idx, weight


def _grid_lines(grid: HeightGrid) -> list[SpectralLine]:
    nx, ny = grid.shape
    coeff = np.fft.fft2(grid.heights) / (nx * ny)
    fx, ix, wx = _axis_lines(nx, grid.dx)
    fy, iy, wy = _axis_lines(ny, grid.dy)
    lines = []
    for a in range(len(fx)):
        for b in range(len(fy)):
            c = coeff[ix[a], iy[b]] * wx[a] * wy[b]
            if c != 0:
                lines.append(SpectralLine(WaveVector(float(fx[a]) + 0.0, float(fy[b]) + 0.0), complex(c)))
    return lines


def fourier_modes(profile: RoughnessProfile) -> list[SpectralLine]:
    """Spectral lines of h: each cosine gives (a/2) e^{+i phase} at +q and (a/2) e^{-i phase} at -q.

    Grid profiles contribute their normalized discrete Fourier coefficients
    (``fft2 / (nx*ny)``) at the periodic-lattice wave vectors; a constant
    grid yields one line at q = 0 carrying the constant.

    With ``h = a cos(q.r + phase)`` the line amplitudes multiply
    ``exp(i q.r)``, so the +q line carries ``exp(+i phase)``.
    """
    if not profile.modes and profile.grid is None:
        raise EmptyProfile("profile has neither modes nor a grid")
    if profile._lines:
        return list(profile._lines)
    lines: list[SpectralLine] = []
    for m in profile.modes:
        half = 0.5 * m.amplitude
        q = m.wavevector
        if q.norm == 0.0:
            lines.append(SpectralLine(q, complex(m.amplitude * math.cos(m.phase))))
            continue
        lines.append(SpectralLine(q, half * complex(math.cos(m.phase), math.sin(m.phase))))
        lines.append(SpectralLine(-q, half * complex(math.cos(m.phase), -math.sin(m.phase))))
    if profile.grid is not None:
        lines.extend(_grid_lines(profile.grid))
    object.__setattr__(profile, "_lines", tuple(lines))
    return lines


def _bilinear(grid: HeightGrid, x: np.ndarray, y: np.ndarray, periodic: bool) -> np.ndarray:
    nx, ny = grid.shape
    fx = x / grid.dx
    fy = y / grid.dy
    if periodic:
        fx = np.mod(fx, nx)
        fy = np.mod(fy, ny)
    else:
        eps = 1e-9
        if np.any((fx < -eps) | (fx > nx - 1 + eps) | (fy < -eps) | (fy > ny - 1 + eps)):
            raise OutOfGrid(
                f"point outside grid [0, {(nx - 1) * grid.dx}] x [0, {(ny - 1) * grid.dy}]"
            )
        fx = np.clip(fx, 0.0, nx - 1)
        fy = np.clip(fy, 0.0, ny - 1)
    i0 = np.floor(fx).astype(int)
    j0 = np.floor(fy).astype(int)
    tx = fx - i0
    ty = fy - j0
    i0 %= nx
    j0 %= ny
    i1 = (i0 + 1) % nx
    j1 = (j0 + 1) % ny
    h = grid.heights
    return (
        (1 - tx) * (1 - ty) * h[i0, j0]
        + tx * (1 - ty) * h[i1, j0]
        + (1 - tx) * ty * h[i0, j1]
        + tx * ty * h[i1, j1]
    )


def evaluate(profile: RoughnessProfile, x, y=0.0, periodic: bool = False):
    """h(x, y) by mode summation plus bilinear interpolation of the grid.

    Outside the sampled grid an :class:`OutOfGrid` error is raised unless
    ``periodic`` is set, in which case the grid is repeated.
    """
    if not profile.modes and profile.grid is None:
        raise EmptyProfile("profile has neither modes nor a grid")
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    xa, ya = np.broadcast_arrays(xa, ya)
    out = np.zeros(xa.shape)
    for m in profile.modes:
        out = out + m.amplitude * np.cos(m.wavevector.qx * xa + m.wavevector.qy * ya + m.phase)
    if profile.grid is not None:
        out = out + _bilinear(profile.grid, xa, ya, periodic)
    if out.ndim == 0:
        return float(out)
    return out


def evaluate_lines(lines: Sequence[SpectralLine], x, y=0.0):
    """Reconstruct h from spectral lines (real part of the line sum)."""
    xa, ya = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    out = np.zeros(xa.shape, dtype=complex)
    for line in lines:
        out = out + line.amplitude * np.exp(1j * (line.wavevector.qx * xa + line.wavevector.qy * ya))
    return out.real if out.ndim else float(out.real)


def read_height_csv(path: str | Path) -> RoughnessProfile:
    """Load a grid profile from CSV.

    Layout: a header row ``nx,ny,dx_m,dy_m`` (optionally preceded by that
    literal label row), then nx*ny heights in meters, row-major with the x
    index slowest.  Values may be split across rows freely.
    """
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise DomainError(f"{path}: empty height map")
    try:
        float(rows[0][0])
    except ValueError:
        rows = rows[1:]
    head = [c for c in rows[0] if c.strip()]
    if len(head) != 4:
        raise DomainError(f"{path}: header must hold nx, ny, dx_m, dy_m")
    nx, ny = int(float(head[0])), int(float(head[1]))
    dx, dy = float(head[2]), float(head[3])
    values = [float(c) for r in rows[1:] for c in r if c.strip()]
    if len(values) != nx * ny:
        raise DomainError(f"{path}: expected {nx * ny} heights, found {len(values)}")
    return RoughnessProfile(grid=HeightGrid(np.array(values).reshape(nx, ny), dx, dy))


def write_height_csv(profile: RoughnessProfile, path: str | Path) -> None:
    if profile.grid is None:
        raise DomainError("only grid profiles can be written as a height map")
    g = profile.grid
    nx, ny = g.shape
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["nx", "ny", "dx_m", "dy_m"])
        w.writerow([nx, ny, repr(g.dx), repr(g.dy)])
        for row in g.heights:
            w.writerow([repr(float(v)) for v in row])
