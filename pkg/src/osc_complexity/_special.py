"""Removable-singularity helpers shared by the exponential map and the geodesics.

Each function is evaluated by a truncated Taylor series below a small
threshold and by the closed form elsewhere.  Thresholds are chosen so that
the cancellation error of the closed form and the truncation error of the
series are both below ~1e-13 relative.
"""

import math

_SERIES_CUT = 0.1


def sinc(x: float) -> float:
    """sin(x)/x."""
    if abs(x) < _SERIES_CUT:
        x2 = x * x
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)))
    return math.sin(x) / x


def cosc(x: float) -> float:
    """(1 - cos x)/x."""
    if abs(x) < _SERIES_CUT:
        x2 = x * x
        return x / 2.0 * (1.0 - x2 / 12.0 * (1.0 - x2 / 30.0 * (1.0 - x2 / 56.0 * (1.0 - x2 / 90.0))))
    return 2.0 * math.sin(0.5 * x) ** 2 / x


def sinm(x: float) -> float:
    """(x - sin x)/x**2."""
    if abs(x) < _SERIES_CUT:
        x2 = x * x
        return x / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0 * (1.0 - x2 / 110.0))))
    return (x - math.sin(x)) / (x * x)


def one_minus_cos(x: float) -> float:
    return 2.0 * math.sin(0.5 * x) ** 2


def half_cot(x: float) -> float:
    """(x/2) cot(x/2) = x sin x / (2 (1 - cos x)); equals 1 at x = 0."""
    if abs(x) < _SERIES_CUT:
        x2 = x * x
        return 1.0 - x2 / 12.0 - x2 * x2 / 720.0 - x2**3 / 30240.0 - x2**4 / 1209600.0
    return math.cos(0.5 * x) / sinc(0.5 * x)


def heis(x: float) -> float:
    """(x - sin x)/(1 - cos x), the odd function entering the endpoint equation."""
    if abs(x) < _SERIES_CUT:
        x2 = x * x
        return x * (1.0 / 3.0 + x2 / 90.0 + x2 * x2 / 2520.0 + x2**3 / 75600.0 + x2**4 / 2395008.0)
    return 2.0 * sinm(x) / sinc(0.5 * x) ** 2


def heis_prime(x: float) -> float:
    """Derivative of :func:`heis`: (2(1 - cos x) - x sin x)/(1 - cos x)**2."""
    if abs(x) < _SERIES_CUT:
        x2 = x * x
        return 1.0 / 3.0 + x2 / 30.0 + x2 * x2 / 504.0 + x2**3 / 10800.0 + x2**4 / 266112.0
    omc = one_minus_cos(x)
    return (2.0 * omc - x * math.sin(x)) / (omc * omc)


def inv_sinc_half_sq(x: float) -> float:
    """x**2 / (2 (1 - cos x)) = 1/sinc(x/2)**2; equals 1 at x = 0."""
    s = sinc(0.5 * x)
    return 1.0 / (s * s)


def nearest_pole(x: float) -> int:
    """Integer k minimising |x - 2 pi k|."""
    return round(x / (2.0 * math.pi))
