import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lateralcp.errors import DomainError, EmptyProfile, OutOfGrid
from lateralcp.kernels import WaveVector
from lateralcp.profiles import (
    CosineMode,
    HeightGrid,
    RoughnessProfile,
    evaluate_lines,
    read_height_csv,
    write_height_csv,
)


def test_sinusoid_values():
    p = RoughnessProfile.sinusoid(2.0, 8.0)
    assert p.evaluate(0.0) == pytest.approx(2.0)
    assert p.evaluate(4.0) == pytest.approx(-2.0)
    assert p.evaluate(2.0) == pytest.approx(0.0, abs=1e-15)


@given(st.floats(0.0, 3.0), st.floats(0.1, 10.0), st.floats(-math.pi, math.pi))
@settings(max_examples=50, deadline=None)
def test_lines_reproduce_modes(a, lam, phase):
    p = RoughnessProfile.sinusoid(a, lam, phase)
    xs = np.linspace(-2 * lam, 2 * lam, 37)
    np.testing.assert_allclose(evaluate_lines(p.fourier_modes(), xs), p.evaluate(xs), atol=1e-13 * max(a, 1e-300))


def test_sinusoid_line_weights():
    lines = RoughnessProfile.sinusoid(1.0, 2 * math.pi, 0.3).fourier_modes()
    assert len(lines) == 2
    assert lines[0].wavevector == WaveVector(1.0, 0.0)
    assert lines[0].amplitude == pytest.approx(0.5 * complex(math.cos(0.3), math.sin(0.3)))
    assert lines[1].amplitude == pytest.approx(lines[0].amplitude.conjugate())


def test_constant_profile_single_line():
    lines = RoughnessProfile.constant(0.7, (3, 4), 1.0).fourier_modes()
    assert len(lines) == 1
    assert lines[0].wavevector.norm == 0.0
    assert lines[0].amplitude == pytest.approx(0.7)


@pytest.mark.parametrize("shape", [(5, 7), (6, 4), (1, 8)])
def test_grid_spectrum_round_trip(shape, rng):
    h = rng.normal(size=shape)
    p = RoughnessProfile(grid=HeightGrid(h, 0.3, 0.5))
    i, j = np.meshgrid(np.arange(shape[0]), np.arange(shape[1]), indexing="ij")
    rebuilt = evaluate_lines(p.fourier_modes(), i * 0.3, j * 0.5)
    np.testing.assert_allclose(rebuilt, h, atol=1e-12)


def test_nyquist_split_stays_real():
    # alternating samples: a pure Nyquist component
    h = np.array([[1.0], [-1.0], [1.0], [-1.0]])
    lines = RoughnessProfile(grid=HeightGrid(h, 1.0, 1.0)).fourier_modes()
    xs = np.linspace(0.0, 3.0, 31)
    recon = sum(l.amplitude * np.exp(1j * l.wavevector.qx * xs) for l in lines)
    np.testing.assert_allclose(recon.imag, 0.0, atol=1e-14)
    np.testing.assert_allclose(recon.real, np.cos(math.pi * xs), atol=1e-14)


def test_bilinear_and_bounds():
    p = RoughnessProfile(grid=HeightGrid([[0.0, 1.0], [2.0, 3.0]], 1.0, 1.0))
    assert p.evaluate(0.5, 0.5) == pytest.approx(1.5)
    with pytest.raises(OutOfGrid):
        p.evaluate(1.5, 0.0)
    assert p.evaluate(2.0, 0.0, periodic=True) == pytest.approx(0.0)


def test_height_csv_round_trip(tmp_path, rng):
    p = RoughnessProfile(grid=HeightGrid(rng.normal(size=(3, 5)) * 1e-9, 1e-9, 2e-9))
    path = tmp_path / "h.csv"
    write_height_csv(p, path)
    back = read_height_csv(path)
    np.testing.assert_array_equal(back.grid.heights, p.grid.heights)
    assert (back.grid.dx, back.grid.dy) == (1e-9, 2e-9)


def test_height_csv_count_mismatch(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("2,2,1.0,1.0\n1,2,3\n")
    with pytest.raises(DomainError):
        read_height_csv(path)


def test_empty_profile():
    with pytest.raises(EmptyProfile):
        RoughnessProfile().fourier_modes()


def test_negative_amplitude_rejected():
    with pytest.raises(DomainError):
        CosineMode(-1.0, WaveVector(1.0, 0.0))


def test_max_height_bound():
    p = RoughnessProfile(
        modes=(CosineMode(1.0, WaveVector(1.0, 0.0)), CosineMode(0.5, WaveVector(0.0, 2.0))),
        grid=HeightGrid([[0.25, -0.75]], 1.0, 1.0),
    )
    assert p.max_height == pytest.approx(2.25)
