"""Modified Bessel functions of the second kind, K_1, K_2 and K_3, for real u > 0.

K_0 and K_1 come from their ascending series for u <= 2 and from Steed's
continued fraction (Temme's CF2 form) above.  Higher orders follow from the
upward recurrence K_{n+1} = K_{n-1} + (2n/u) K_n, which is stable for K.

The ``*_scaled`` variants return exp(u) K_n(u).  They never underflow and are
what the response functions use at large u.
"""

from __future__ import annotations

import math

from ..errors import ConvergenceError, DomainError

EULER_GAMMA = 0.57721566490153286060651209
SERIES_CROSSOVER = 2.0
UNDERFLOW_ARG = 700.0
SUPPORTED_ORDERS = (1, 2, 3)

_EPS = 1e-17
_MAX_TERMS = 10_000


def _series_k0_k1(u: float) -> tuple[float, float]:
    """Ascending series for K_0(u), K_1(u); accurate for 0 < u <= 2."""
    y = 0.25 * u * u
    log_half = math.log(0.5 * u)

    # K_0 = -(ln(u/2) + gamma) I_0 + sum_{k>=1} H_k y^k / (k!)^2
    # K_1 = 1/u + ln(u/2) I_1 - (u/4) sum_{k>=0} [psi(k+1) + psi(k+2)] y^k / (k! (k+1)!)
    term0 = 1.0  # y^k / (k!)^2
    term1 = 1.0  # y^k / (k! (k+1)!)
    i0 = 1.0
    i1 = 1.0
    harmonic = 0.0
    psi_k1 = -EULER_GAMMA  # psi(k+1)
    psi_k2 = 1.0 - EULER_GAMMA  # psi(k+2)
    sum0 = 0.0
    sum1 = psi_k1 + psi_k2
    for k in range(1, _MAX_TERMS):
        term0 *= y / (k * k)
        term1 *= y / (k * (k + 1))
        harmonic += 1.0 / k
        psi_k1 = psi_k2
        psi_k2 += 1.0 / (k + 1)
        i0 += term0
        i1 += term1
        sum0 += harmonic * term0
        sum1 += (psi_k1 + psi_k2) * term1
        if term0 < _EPS * i0 and term1 < _EPS * i1:
            break
    k0 = -(log_half + EULER_GAMMA) * i0 + sum0
    k1 = 1.0 / u + log_half * (0.5 * u) * i1 - 0.25 * u * sum1
    return k0, k1


def _cf2_scaled_k0_k1(u: float) -> tuple[float, float]:
    """exp(u) K_0(u) and exp(u) K_1(u) by Steed's method; for u >= 2."""
    b = 2.0 * (1.0 + u)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(1, _MAX_TERMS):
        a -= 2 * i
        c = -a * c / (i + 1.0)
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _EPS:
            break
    else:
        raise ConvergenceError(f"continued fraction for K_0({u}) did not converge")
    h *= a1
    k0 = math.sqrt(math.pi / (2.0 * u)) / s
    k1 = k0 * (u + 0.5 - h) / u
    return k0, k1


def _check(order: int, u: float) -> None:
    if order not in SUPPORTED_ORDERS:
        raise DomainError(f"unsupported Bessel order {order!r}; expected one of {SUPPORTED_ORDERS}")
    if not u > 0.0 or math.isnan(u):
        raise DomainError(f"K_n(u) requires u > 0, got {u!r}")


def bessel_k_all_scaled(u: float) -> tuple[float, float, float]:
    """Return (e^u K_1(u), e^u K_2(u), e^u K_3(u))."""
    _check(1, u)
    if u <= SERIES_CROSSOVER:
        k0, k1 = _series_k0_k1(u)
        scale = math.exp(u)
        k0 *= scale
        k1 *= scale
    else:
        k0, k1 = _cf2_scaled_k0_k1(u)
    k2 = k0 + (2.0 / u) * k1
    k3 = k1 + (4.0 / u) * k2
    return k1, k2, k3


def bessel_k_scaled(order: int, u: float) -> float:
    """exp(u) * K_order(u) for order in {1, 2, 3}."""
    _check(order, u)
    return bessel_k_all_scaled(u)[order - 1]


def bessel_k_flagged(order: int, u: float) -> tuple[float, bool]:
    """K_order(u) together with an underflow flag.

    For u > ``UNDERFLOW_ARG`` the value is reported as exactly 0.0 and the
    flag is True.
    """
    _check(order, u)
    if u > UNDERFLOW_ARG:
        return 0.0, True
    return bessel_k_scaled(order, u) * math.exp(-u), False


def bessel_k(order: int, u: float) -> float:
    """Modified Bessel function of the second kind K_order(u), order in {1, 2, 3}.

    Relative accuracy is about 1e-14 on [1e-6, 700].  Beyond u = 700 the
    result is 0.0 (see :func:`bessel_k_flagged`).

    >>> round(bessel_k(2, 1.0), 10)
    1.6248388986
    """
    return bessel_k_flagged(order, u)[0]
