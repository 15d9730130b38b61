"""Adaptive quadrature for integrands with power-law endpoints.

Integrals over (0, inf) are mapped to the log scale ``x = exp(t)``, where a
power law becomes an exponential and QUADPACK's Gauss-Kronrod rules converge
quickly.  Callers split the range at kinks (e.g. ``|x u| = 1``) by passing
``breaks``; finiteness must already be certified, quadrature never proves it.
"""
import math

import numpy as np
from scipy import integrate

EPSABS = 1e-10
EPSREL = 1e-8
LOG_RANGE = 700.0


def _log_segment(f, a, b, epsabs, epsrel, limit, wide=False):
    ta = -math.inf if a == 0.0 else math.log(a)
    tb = math.inf if math.isinf(b) else math.log(b)

    # |log x| <= 700 keeps x itself finite; slow tails like x^-1.05 need the
    # full range.  Integrands see numpy scalars so overflowing intermediates
    # become inf instead of raising.  ``wide`` evaluates at long double points
    # so products such as x^2 * x^-2.9 stay representable near e^-700.
    cast = np.longdouble if wide else np.float64
    ta, tb = max(ta, -LOG_RANGE), min(tb, LOG_RANGE)
    if tb <= ta:
        return 0.0

    def g(t):
        x = cast(math.exp(t))
        with np.errstate(all="ignore"):
            val = float(f(x) * x)
        return val if math.isfinite(val) else 0.0

    value, _ = integrate.quad(g, ta, tb, epsabs=epsabs, epsrel=epsrel, limit=limit)
    return value


def integrate_positive(f, lo=0.0, hi=math.inf, breaks=(), epsabs=EPSABS, epsrel=EPSREL, limit=400, wide=False):
    """Integrate a scalar function over (lo, hi) with 0 <= lo < hi <= inf."""
    if lo < 0 or hi <= lo:
        raise ValueError("need 0 <= lo < hi")
    pts = sorted({lo, hi, *(b for b in breaks if lo < b < hi)})
    return math.fsum(
        _log_segment(f, a, b, epsabs, epsrel, limit, wide) for a, b in zip(pts[:-1], pts[1:])
    )


def integrate_interval(f, lo, hi, breaks=(), epsabs=EPSABS, epsrel=EPSREL, limit=400, wide=False):
    """Integrate over an arbitrary real interval, splitting at 0 and at ``breaks``.

    Each side of zero is handled on the log scale so power-law singularities
    at the origin or at infinity are resolved.
    """
    if hi <= lo:
        return 0.0
    total = []
    if hi > 0:
        pos_breaks = [b for b in breaks if b > 0]
        total.append(integrate_positive(f, max(lo, 0.0), hi, pos_breaks, epsabs, epsrel, limit, wide))
    if lo < 0:
        neg_breaks = [-b for b in breaks if b < 0]
        total.append(
            integrate_positive(lambda x: f(-x), max(-hi, 0.0), -lo, neg_breaks, epsabs, epsrel, limit, wide)
        )
    return math.fsum(total)


def power_integral(q, a, b):
    """Closed form of int_a^b x^q dx for 0 <= a <= b <= inf (may be inf)."""
    if b <= a:
        return 0.0
    if q == -1.0:
        if a == 0.0 or math.isinf(b):
            return math.inf
        return math.log(b / a)
    if q > -1.0:
        if math.isinf(b):
            return math.inf
        return (b ** (q + 1.0) - a ** (q + 1.0)) / (q + 1.0)
    if a == 0.0:
        return math.inf
    upper = 0.0 if math.isinf(b) else b ** (q + 1.0)
    return (a ** (q + 1.0) - upper) / -(q + 1.0)


def vector_power_integral(q, a, b):
    """Vectorised :func:`power_integral` for finite 0 < a <= b arrays."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if q == -1.0:
        return np.log(b / a)
    return (np.power(b, q + 1.0) - np.power(a, q + 1.0)) / (q + 1.0)
