"""Upper incomplete gamma function for arbitrary real order.

scipy only ships the regularized functions for positive order; the Levy
tail masses of tempered stable laws need Gamma(s, z) with s in (-2, 0].
"""
import numpy as np
from scipy import special

_CF_MAX_ITER = 500
_TINY = 1e-300


def _upper_gamma_cf(s, z):
    # modified Lentz evaluation of the Legendre continued fraction; valid for z >= 1
    z = np.asarray(z, dtype=float)
    b = z + 1.0 - s
    c = np.full_like(z, 1.0 / _TINY)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, _CF_MAX_ITER):
        an = -i * (i - s)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = b + an / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        delta = d * c
        h = h * delta
        if np.all(np.abs(delta - 1.0) < 1e-16):
            break
    return np.exp(-z + s * np.log(z)) * h


def _upper_gamma_series(s, z):
    # downward recurrence from an order in (0, 1] (or from E1 for integer s); used for z < 1
    if s > 0:
        return special.gammaincc(s, z) * special.gamma(s)
    if s == round(s):
        val = special.exp1(z)
        a = -1.0
    else:
        top = s + np.ceil(-s)
        val = special.gammaincc(top, z) * special.gamma(top)
        a = top - 1.0
    # Gamma(a, z) = (Gamma(a + 1, z) - z^a e^{-z}) / a
    while a >= s - 1e-12:
        val = (val - np.power(z, a) * np.exp(-z)) / a
        a -= 1.0
    return val


def upper_gamma(s, z):
    """Gamma(s, z) = int_z^inf t^{s-1} e^{-t} dt for real s and z > 0 (vectorised in z)."""
    s = float(s)
    z = np.asarray(z, dtype=float)
    if s > 0:
        return special.gammaincc(s, z) * special.gamma(s)
    out = np.empty_like(z)
    big = z >= 1.0
    if np.any(big):
        out[big] = _upper_gamma_cf(s, z[big])
    if np.any(~big):
        out[~big] = _upper_gamma_series(s, z[~big])
    return out if out.ndim else out[()]


def lower_gamma(s, z):
    """gamma(s, z) = int_0^z t^{s-1} e^{-t} dt, finite only for s > 0."""
    if s <= 0:
        return np.full_like(np.asarray(z, dtype=float), np.inf)
    return special.gammainc(s, z) * special.gamma(s)
