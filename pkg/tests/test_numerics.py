import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lateralcp.errors import ConvergenceError, DomainError, NoSignChange
from lateralcp.numerics import (
    Bracket,
    Rectangle,
    Tolerance,
    TruncatedPlane,
    bessel_k,
    bessel_k_all_scaled,
    bessel_k_flagged,
    bessel_k_scaled,
    find_root,
    integrate,
    integrate_2d,
    integrate_semi_infinite,
    scan_brackets,
)

mpmath.mp.dps = 40

GRID = np.geomspace(1e-6, 700.0, 157)


def ref_k(n, u):
    return mpmath.besselk(n, mpmath.mpf(u))


@pytest.mark.parametrize("order", [1, 2, 3])
def test_bessel_matches_mpmath(order):
    worst = 0.0
    for u in GRID:
        ref = ref_k(order, u)
        worst = max(worst, float(abs((bessel_k(order, u) - ref) / ref)))
    assert worst < 1e-13


@pytest.mark.parametrize("u", [1e-3, 0.5, 1.999, 2.0, 2.001, 17.0, 350.0, 699.0])
def test_scaled_matches_mpmath(u):
    k1s, k2s, k3s = bessel_k_all_scaled(u)
    for n, v in ((1, k1s), (2, k2s), (3, k3s)):
        ref = ref_k(n, u) * mpmath.exp(u)
        assert float(abs((v - ref) / ref)) < 1e-13
        assert bessel_k_scaled(n, u) == v


def test_crossover_is_continuous():
    below = bessel_k_all_scaled(2.0 * (1 - 1e-13))
    above = bessel_k_all_scaled(2.0 * (1 + 1e-13))
    for a, b in zip(below, above):
        assert abs(a - b) / a < 1e-12


@given(st.floats(min_value=1e-4, max_value=600.0))
@settings(max_examples=200, deadline=None)
def test_recurrence(u):
    k1, k2, k3 = bessel_k_all_scaled(u)
    assert abs(k3 - (k1 + 4.0 * k2 / u)) <= 1e-12 * k3


def test_small_argument_limits():
    # K_n(u) ~ Gamma(n)/2 * (2/u)^n
    u = 1e-8
    assert bessel_k(2, u) * u**2 / 2.0 == pytest.approx(1.0, rel=1e-12)
    assert bessel_k(3, u) * u**3 / 8.0 == pytest.approx(1.0, rel=1e-12)


def test_underflow_flag():
    assert bessel_k_flagged(2, 699.0)[1] is False
    value, flagged = bessel_k_flagged(3, 701.0)
    assert value == 0.0 and flagged
    assert bessel_k_scaled(3, 701.0) > 0.0


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan")])
def test_bessel_domain(bad):
    with pytest.raises(DomainError):
        bessel_k(2, bad)


def test_bessel_unsupported_order():
    with pytest.raises(DomainError):
        bessel_k(7, 1.0)


def test_integrate_finite():
    assert integrate(np.sin, 0.0, math.pi) == pytest.approx(2.0, rel=1e-13)
    assert integrate(lambda x: np.abs(x - 0.3), 0.0, 1.0, breakpoints=(0.3,)) == pytest.approx(0.29, rel=1e-13)


def test_integrate_endpoint_singularity():
    tol = Tolerance(rel=1e-9)
    assert integrate(lambda x: 1 / np.sqrt(x), 0.0, 1.0, tol) == pytest.approx(2.0, rel=1e-8)


def test_semi_infinite():
    assert integrate_semi_infinite(lambda x: np.exp(-x)) == pytest.approx(1.0, rel=1e-12)
    w = 1.777e16
    got = integrate_semi_infinite(lambda x: w / (x * x + w * w), scale=w)
    assert got == pytest.approx(math.pi / 2, rel=1e-12)


def test_max_evals_raises():
    with pytest.raises(ConvergenceError):
        integrate(lambda x: np.sin(1.0 / (x + 1e-9)), 0.0, 1.0, Tolerance(rel=1e-14, max_evals=300))


def test_integrate_2d_rectangle():
    got = integrate_2d(lambda x, y: np.exp(x) * np.cos(y), Rectangle(0.0, 1.0, 0.0, math.pi / 2))
    assert got == pytest.approx(math.e - 1.0, rel=1e-11)


def test_integrate_2d_plane():
    # int (1 + r^2)^-3 d^2r = pi / 2; integrand <= r^-6
    plane = TruncatedPlane(center=(0.0, 0.0), scale=1.0, decay_coeff=1.0, decay_power=6.0)
    got = integrate_2d(lambda x, y: (1 + x * x + y * y) ** -3, plane, Tolerance(rel=1e-9, abs=1e-10, max_evals=10_000_000))
    assert got == pytest.approx(math.pi / 2, rel=1e-8)


def test_plane_needs_fast_decay():
    plane = TruncatedPlane(center=(0.0, 0.0), scale=1.0, decay_coeff=1.0, decay_power=3.0)
    with pytest.raises(DomainError):
        plane.truncation_radius(1e-6)


def test_tolerance_validation():
    with pytest.raises(DomainError):
        Tolerance(rel=0.0, abs=0.0)
    with pytest.raises(DomainError):
        Tolerance(max_evals=0)


def test_brent_known_roots():
    assert find_root(lambda x: math.cos(x) - x, Bracket(0.0, 1.0)) == pytest.approx(0.7390851332151607, rel=1e-15)
    assert find_root(lambda x: x**3 - 2.0, Bracket(0.0, 2.0)) == pytest.approx(2 ** (1 / 3), rel=1e-15)


def test_brent_no_sign_change():
    with pytest.raises(NoSignChange):
        find_root(lambda x: x * x + 1.0, Bracket(-1.0, 1.0))


def test_brent_iteration_cap():
    with pytest.raises(ConvergenceError):
        find_root(lambda x: math.copysign(1.0, x - 1 / 3), Bracket(0.0, 1.0), Tolerance(rel=1e-16, abs=1e-300, max_evals=10))


@given(st.floats(min_value=-5.0, max_value=5.0), st.floats(min_value=0.1, max_value=10.0))
@settings(max_examples=100, deadline=None)
def test_brent_property(r, width):
    f = lambda x: (x - r) * (x * x + 1.0)  # noqa: E731
    x = find_root(f, Bracket(r - width, r + 0.5 * width))
    assert r - width <= x <= r + 0.5 * width
    assert abs(x - r) <= 1e-13 * max(1.0, abs(r))


def test_scan_brackets_finds_all():
    brackets = scan_brackets(math.sin, np.linspace(0.5, 10.0, 200))
    roots = [find_root(math.sin, b) for b in brackets]
    np.testing.assert_allclose(roots, [math.pi, 2 * math.pi, 3 * math.pi], rtol=1e-14)


def test_bracket_order():
    with pytest.raises(DomainError):
        Bracket(1.0, 1.0)
