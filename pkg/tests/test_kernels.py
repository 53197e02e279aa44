import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lateralcp.errors import DomainError
from lateralcp.kernels import (
    RESPONSE_NAMES,
    WaveVector,
    kernel_I,
    response_all_scaled,
    response_limit_zero,
    response_r,
    response_r_scaled,
)
from lateralcp.numerics import Bracket, find_root, scan_brackets

mpmath.mp.dps = 40


def ref_response(which, u):
    u = mpmath.mpf(u)
    k2, k3 = mpmath.besselk(2, u), mpmath.besselk(3, u)
    return {
        "xx": u**3 * k3 - u**4 * k2,
        "yy": u**3 * k3,
        "zz": (u**4 + 16 * u**2 / 3) * k2 + 2 * u**3 * k3 / 3,
        "xz": 8 * u**3 * k2 / 3 - u**4 * k3,
    }[which]


@pytest.mark.parametrize("which", RESPONSE_NAMES)
@pytest.mark.parametrize("u", [1e-3, 0.3, 2.3, 6.0, 21.4, 150.0])
def test_responses_against_mpmath(which, u):
    ref = ref_response(which, u)
    assert float(abs(response_r(which, u) - ref)) <= 1e-12 * float(abs(ref))


@pytest.mark.parametrize("which", RESPONSE_NAMES)
def test_small_u_limit(which):
    assert response_r(which, 1e-10) == pytest.approx(response_limit_zero(which), abs=1e-8)


def test_xz_vanishes_linearly():
    # u^3 K_2 ~ 2u and u^4 K_3 ~ 8u, so R_xz ~ -8u/3
    assert response_r("xz", 1e-7) / 1e-7 == pytest.approx(-8.0 / 3.0, rel=1e-6)


def test_sign_structure():
    us = np.geomspace(1e-3, 600.0, 2000)
    r = {n: np.array([response_r_scaled(n, u) for u in us]) for n in RESPONSE_NAMES}
    assert np.all(r["yy"] > 0) and np.all(r["zz"] > 0)
    # xz keeps one sign (negative) over the whole range
    assert np.all(r["xz"] < 0)
    assert len(scan_brackets(lambda u: response_r_scaled("xx", u), us)) == 1


def test_rxx_root_near_two_pi_over_e():
    u_star = find_root(lambda u: response_r_scaled("xx", u), Bracket(1.0, 5.0))
    assert 2 * math.pi / u_star == pytest.approx(math.e, rel=0.01)


def test_underflow_gives_zero():
    assert response_r("zz", 750.0) == 0.0
    assert response_r_scaled("zz", 750.0) > 0.0
    assert kernel_I(1.0, WaveVector(800.0, 0.0)).as_array().any() == False  # noqa: E712


def test_unknown_name():
    with pytest.raises(DomainError):
        response_r("xy", 1.0)


def test_kernel_q_zero_limit():
    z0 = 2.5
    at_zero = kernel_I(z0, WaveVector(0.0, 0.0)).as_array()
    np.testing.assert_allclose(at_zero, np.diag([3, 3, 6]) / z0**4)
    near = kernel_I(z0, WaveVector(1e-10, 0.0)).as_array()
    np.testing.assert_allclose(near, at_zero, rtol=1e-9, atol=1e-9 / z0**4)


@pytest.mark.parametrize("u", [0.2, 1.0, 4.0])
def test_kernel_matches_responses_along_x(u):
    z0 = 1.7
    I = kernel_I(z0, WaveVector(u / z0, 0.0))
    c = 3.0 / (8.0 * z0**4)
    assert I.xx == pytest.approx(c * response_r("xx", u), rel=1e-13)
    assert I.yy == pytest.approx(c * response_r("yy", u), rel=1e-13)
    assert I.zz == pytest.approx(c * response_r("zz", u), rel=1e-13)
    assert I.xz == pytest.approx(1j * c * response_r("xz", u), rel=1e-13)
    assert I.xy == 0.0 and I.yz == 0.0


@given(st.floats(0.01, 20.0), st.floats(0.0, 2 * math.pi))
@settings(max_examples=60, deadline=None)
def test_kernel_rotation_covariance(qn, psi):
    z0 = 1.0
    base = kernel_I(z0, WaveVector(qn, 0.0)).as_array()
    c, s = math.cos(psi), math.sin(psi)
    rot = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    turned = kernel_I(z0, WaveVector(qn * c, qn * s)).as_array()
    np.testing.assert_allclose(turned, rot @ base @ rot.T, rtol=1e-10, atol=1e-13 * np.abs(base).max())


def test_kernel_reflection_conjugates():
    q = WaveVector(0.7, -0.4)
    np.testing.assert_allclose(kernel_I(1.3, -q).as_array(), np.conj(kernel_I(1.3, q).as_array()))


def test_scaled_all_consistent():
    r = response_all_scaled(3.3)
    for n in RESPONSE_NAMES:
        assert r[n] == response_r_scaled(n, 3.3)
