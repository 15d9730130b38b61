"""Levy measures, mark measures and the characteristics of a random measure.

Every parametric family exposes one-sided truncated power moments

    below(p, a, side) = int_{0 < |y| <= a} |y|^p rho_side(dy)
    above(p, a, side) = int_{|y| > a}      |y|^p rho_side(dy)

in closed form, returning ``inf`` where the declared exponents make the
integral diverge.  The drift correction B, the function K, the psi-integral
and the tail-ratio conditions are all assembled from these moments, so
finiteness is decided by exponent arithmetic rather than by quadrature.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from . import quadrature
from ._special import lower_gamma, upper_gamma
from .errors import DomainError, ExponentsUnknown, NonDeterministic, UnnormalizableMarks

SIDES = (1, -1)


class Status(enum.Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    UNKNOWN = "unknown"


def truncate(x):
    """The truncation function x / (|x| v 1)."""
    x = np.asarray(x, dtype=float)
    out = x / np.maximum(np.abs(x), 1.0)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Levy measure families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymmetricStable:
    """rho(dx) = c |x|^{-alpha-1} dx."""

    alpha: float
    c: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise DomainError(f"stable index alpha={self.alpha} must lie in (0, 2)")
        if self.c <= 0:
            raise DomainError(f"stable scale c={self.c} must be positive")

    symmetric = True
    finite_mass = False

    @property
    def origin_exponent(self):
        return -self.alpha - 1.0

    @property
    def tail_exponent(self):
        return -self.alpha

    def density(self, x):
        return self.c * np.abs(x) ** (-self.alpha - 1.0)

    def tail(self, x, side=1):
        return (self.c / self.alpha) * np.power(x, -self.alpha)

    def below(self, p, a, side=1):
        if p <= self.alpha:
            return math.inf
        return self.c * a ** (p - self.alpha) / (p - self.alpha)

    def above(self, p, a, side=1):
        if p >= self.alpha:
            return math.inf
        return self.c * a ** (p - self.alpha) / (self.alpha - p)

    def inverse(self, s, side=1):
        return np.power(self.c / (self.alpha * np.asarray(s, dtype=float)), 1.0 / self.alpha)


@dataclass(frozen=True)
class SymmetricTemperedStable:
    """rho(dx) = c |x|^{-alpha-1} exp(-lam |x|) dx."""

    alpha: float
    lam: float
    c: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise DomainError(f"tempered stable index alpha={self.alpha} must lie in (0, 2)")
        if self.lam <= 0 or self.c <= 0:
            raise DomainError("tempering lam and scale c must be positive")

    symmetric = True
    finite_mass = False

    @property
    def origin_exponent(self):
        return -self.alpha - 1.0

    @property
    def tail_exponent(self):
        return -math.inf

    def density(self, x):
        ax = np.abs(x)
        return self.c * ax ** (-self.alpha - 1.0) * np.exp(-self.lam * ax)

    def tail(self, x, side=1):
        return self.c * self.lam**self.alpha * upper_gamma(-self.alpha, self.lam * np.asarray(x, dtype=float))

    def below(self, p, a, side=1):
        if p <= self.alpha:
            return math.inf
        s = p - self.alpha
        return float(self.c * self.lam ** (-s) * lower_gamma(s, self.lam * a))

    def above(self, p, a, side=1):
        s = p - self.alpha
        return float(self.c * self.lam ** (-s) * upper_gamma(s, self.lam * a))

    def inverse(self, s, side=1):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        log_s = np.log(s)
        log_tail = lambda y: np.log(np.maximum(self.tail(np.exp(y)), 1e-300))
        # the stable tail dominates, so its inverse brackets the root from above
        hi = np.log(np.power(self.c / (self.alpha * s), 1.0 / self.alpha))
        lo = hi - 1.0
        while True:
            short = log_tail(lo) < log_s
            if not short.any():
                break
            lo = np.where(short, lo - 2.0 * (hi - lo), lo)
        y = hi.copy()
        active = np.ones(y.shape, dtype=bool)
        for _ in range(200):
            ya, la, ha = y[active], lo[active], hi[active]
            x = np.exp(ya)
            t = np.maximum(self.tail(x), 1e-300)
            f = np.log(t) - log_s[active]
            la = np.where(f > 0, ya, la)
            ha = np.where(f <= 0, ya, ha)
            with np.errstate(all="ignore"):
                y_new = ya + f * t / (x * self.density(x))
            outside = (y_new <= la) | (y_new >= ha) | ~np.isfinite(y_new)
            y_new = np.where(outside, 0.5 * (la + ha), y_new)
            # tail values carry ~1e-14 relative noise, so resolve log x to 1e-13
            done = (np.abs(y_new - ya) <= 1e-13 * np.maximum(1.0, np.abs(ya))) | (ha - la <= 1e-13)
            y[active], lo[active], hi[active] = y_new, la, ha
            idx = np.flatnonzero(active)
            active[idx[done]] = False
            if not active.any():
                break
        return np.exp(y)


@dataclass(frozen=True)
class CompoundPoisson:
    """Finite Levy measure sum_i w_i delta_{x_i}."""

    atoms: tuple

    def __post_init__(self):
        atoms = tuple((float(x), float(w)) for x, w in self.atoms)
        for x, w in atoms:
            if x == 0.0:
                raise DomainError("compound Poisson atoms must be non-zero")
            if w <= 0.0:
                raise DomainError("compound Poisson masses must be positive")
        object.__setattr__(self, "atoms", atoms)

    finite_mass = True
    origin_exponent = math.inf
    tail_exponent = -math.inf

    @property
    def symmetric(self):
        pos = sorted((x, w) for x, w in self.atoms if x > 0)
        neg = sorted((-x, w) for x, w in self.atoms if x < 0)
        return pos == neg

    @property
    def total_mass(self):
        return math.fsum(w for _, w in self.atoms)

    def _side(self, side):
        pairs = sorted(((abs(x), w) for x, w in self.atoms if x * side > 0), reverse=True)
        xs = np.array([p[0] for p in pairs])
        ws = np.array([p[1] for p in pairs])
        return xs, ws

    def tail(self, x, side=1):
        xs, ws = self._side(side)
        x = np.asarray(x, dtype=float)
        return (ws[None, :] * (xs[None, :] > x.reshape(-1, 1))).sum(axis=1).reshape(x.shape)

    def below(self, p, a, side=1):
        xs, ws = self._side(side)
        keep = xs <= a
        return math.fsum(ws[keep] * xs[keep] ** p)

    def above(self, p, a, side=1):
        xs, ws = self._side(side)
        keep = xs > a
        return math.fsum(ws[keep] * xs[keep] ** p)

    def inverse(self, s, side=1):
        # atoms in decreasing size; the tail on [x_(k+1), x_(k)) equals W_k
        xs, ws = self._side(side)
        s = np.asarray(s, dtype=float)
        if xs.size == 0:
            return np.zeros_like(s)
        cum = np.cumsum(ws)
        k = np.searchsorted(cum, s, side="right")
        padded = np.append(xs, 0.0)
        return padded[k]


@dataclass(frozen=True)
class TabulatedDensity:
    """Symmetric density tabulated on a positive grid, log-log interpolated.

    Below the first node the density continues as ``x**origin_exponent`` and
    beyond the last node as ``x**(tail_exponent - 1)``; an undeclared exponent
    cuts the density off there and every finiteness verdict becomes unknown.
    """

    xs: tuple
    densities: tuple
    origin_exponent: Union[float, None] = None
    tail_exponent: Union[float, None] = None
    _pieces: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        xs = tuple(float(x) for x in self.xs)
        ds = tuple(float(d) for d in self.densities)
        if len(xs) < 2 or len(xs) != len(ds):
            raise DomainError("tabulated density needs matching grids of length >= 2")
        if xs[0] <= 0 or any(b <= a for a, b in zip(xs, xs[1:])):
            raise DomainError("tabulated grid must be positive and strictly increasing")
        if any(d <= 0 for d in ds):
            raise DomainError("tabulated densities must be positive")
        if self.origin_exponent is not None and self.origin_exponent <= -3.0:
            raise DomainError("origin exponent <= -3 violates int (1 ^ x^2) rho(dx) < inf")
        if self.tail_exponent is not None and self.tail_exponent >= 0.0:
            raise DomainError("tail exponent must be negative")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "densities", ds)
        pieces = []
        if self.origin_exponent is not None:
            p0 = self.origin_exponent
            pieces.append((0.0, xs[0], ds[0] * xs[0] ** (-p0), p0))
        for (a, da), (b, db) in zip(zip(xs, ds), zip(xs[1:], ds[1:])):
            q = math.log(db / da) / math.log(b / a)
            pieces.append((a, b, da * a ** (-q), q))
        te = self.tail_exponent
        if te is not None and math.isfinite(te):
            pieces.append((xs[-1], math.inf, ds[-1] * xs[-1] ** (1.0 - te), te - 1.0))
        object.__setattr__(self, "_pieces", tuple(pieces))

    symmetric = True

    @property
    def finite_mass(self):
        return self.origin_exponent is None or self.origin_exponent > -1.0

    def density(self, x):
        ax = np.abs(np.asarray(x, dtype=float))
        out = np.zeros_like(ax)
        for a, b, coef, q in self._pieces:
            inside = (ax > a) & (ax <= b)
            out[inside] = coef * ax[inside] ** q
        return out if out.ndim else float(out)

    def _moment(self, p, lo, hi):
        total = []
        for a, b, coef, q in self._pieces:
            left, right = max(a, lo), min(b, hi)
            if right > left:
                total.append(coef * quadrature.power_integral(p + q, left, right))
        return math.fsum(total) if all(math.isfinite(t) for t in total) else math.inf

    def below(self, p, a, side=1):
        return self._moment(p, 0.0, a)

    def above(self, p, a, side=1):
        return self._moment(p, a, math.inf)

    def tail(self, x, side=1):
        x = np.asarray(x, dtype=float)
        out = np.array([self._moment(0.0, xi, math.inf) for xi in x.ravel()])
        return out.reshape(x.shape) if x.ndim else float(out[0])

    def inverse(self, s, side=1):
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        # walk the pieces from the right, carrying the tail mass at the right edge
        right_tail = 0.0
        solved = np.zeros(s.shape, dtype=bool)
        for a, b, coef, q in reversed(self._pieces):
            mass = coef * quadrature.power_integral(q, a, b)
            left_tail = right_tail + mass
            hit = ~solved & (s < left_tail)
            if hit.any():
                need = s[hit] - right_tail
                if q == -1.0:
                    out[hit] = b * np.exp(-need / coef)
                elif math.isinf(b):
                    out[hit] = np.power(need * -(q + 1.0) / coef, 1.0 / (q + 1.0))
                else:
                    out[hit] = np.power(b ** (q + 1.0) - need * (q + 1.0) / coef, 1.0 / (q + 1.0))
                solved |= hit
            right_tail = left_tail
        return out


LevyMeasure = Union[SymmetricStable, SymmetricTemperedStable, CompoundPoisson, TabulatedDensity]


# ---------------------------------------------------------------------------
# operations on a single Levy measure
# ---------------------------------------------------------------------------


def _both(rho, method, p, a):
    sides = (1,) if rho.symmetric else SIDES
    vals = [getattr(rho, method)(p, a, side) for side in sides]
    if any(math.isinf(v) for v in vals):
        return math.inf
    return math.fsum(vals) * (2.0 if rho.symmetric else 1.0)


def moment_below(rho, p, a):
    """int_{0 < |x| <= a} |x|^p rho(dx)."""
    return _both(rho, "below", p, a)


def moment_above(rho, p, a):
    """int_{|x| > a} |x|^p rho(dx)."""
    return _both(rho, "above", p, a)


def tail_mass(rho, x, side="+"):
    """rho((x, inf)) for side '+', rho((-inf, -x)) for side '-'; x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("tail_mass needs x > 0")
    out = rho.tail(x, 1 if side in ("+", 1) else -1)
    return float(out) if np.ndim(out) == 0 else out


def tail_inverse(rho, s):
    """Generalised inverse R(s) of the Levy tail.

    ``inf{x > 0 : rho(x, inf) <= s}`` for s > 0 and the mirrored supremum
    for s < 0.  Returns 0 where the tail never exceeds |s|.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s == 0):
        raise DomainError("tail_inverse needs s != 0")
    out = np.zeros_like(s)
    for side in SIDES:
        sel = s * side > 0
        if sel.any():
            out[sel] = side * rho.inverse(np.abs(s[sel]), side)
    return float(out) if out.ndim == 0 else out


def abs_moment(rho, q):
    """int |x|^q rho(dx); inf when divergent at either end."""
    return _both(rho, "below", q, 1.0) + _both(rho, "above", q, 1.0)


def psi_integral(u, rho):
    """int (|x u| ^ |x u|^2) rho(dx)."""
    u = abs(float(u))
    if u == 0.0:
        return 0.0
    a = 1.0 / u
    lower = moment_below(rho, 2.0, a)
    upper = moment_above(rho, 1.0, a)
    return u * u * lower + u * upper


def psi_truncated(u, rho):
    """int (|x u| ^ |x u|^2)(1 ^ x^-2) rho(dx)."""
    u = abs(float(u))
    if u == 0.0:
        return 0.0
    a = 1.0 / u
    if u <= 1.0:
        # |x| <= 1: u^2 x^2; 1 < |x| <= 1/u: u^2; |x| > 1/u: u / |x|
        mid = moment_above(rho, 0.0, 1.0) - moment_above(rho, 0.0, a)
        return u * u * moment_below(rho, 2.0, 1.0) + u * u * mid + u * moment_above(rho, -1.0, a)
    # |x| <= 1/u: u^2 x^2; 1/u < |x| <= 1: u |x|; |x| > 1: u / |x|
    band = moment_above(rho, 1.0, a) - moment_above(rho, 1.0, 1.0)
    if math.isinf(moment_above(rho, 1.0, 1.0)):
        band = math.inf
    return u * u * moment_below(rho, 2.0, a) + u * band + u * moment_above(rho, -1.0, 1.0)


def phi_one(u, rho):
    """int (1 ^ |x u|) rho(dx); finite iff the measure has finite first moment near 0."""
    u = abs(float(u))
    if u == 0.0:
        return 0.0
    a = 1.0 / u
    return u * moment_below(rho, 1.0, a) + moment_above(rho, 0.0, a)


def levy_integral(rho, h, breaks=()):
    """Quadrature of int h(x) rho(dx) over R \\ {0}; exact sum for atoms."""
    if isinstance(rho, CompoundPoisson):
        return math.fsum(w * h(x) for x, w in rho.atoms)
    extent = math.inf
    if isinstance(rho, TabulatedDensity):
        extent = rho.xs[-1] if rho.tail_exponent is None or math.isinf(rho.tail_exponent) else math.inf
    brk = tuple(breaks) + tuple(-b for b in breaks)
    return quadrature.integrate_interval(lambda x: h(x) * rho.density(x), -extent, extent, brk, wide=True)


# exponent bookkeeping -----------------------------------------------------


def _tail_index(rho):
    te = rho.tail_exponent
    if te is None:
        raise ExponentsUnknown("tail exponent not declared")
    return -te


def _origin_index(rho):
    """beta0 with rho(|x| > eps) ~ eps^-beta0 as eps -> 0 (-inf for no mass near 0)."""
    if rho.finite_mass:
        return -math.inf
    p0 = rho.origin_exponent
    if p0 is None:
        raise ExponentsUnknown("origin exponent not declared")
    return -p0 - 1.0


def origin_index(rho):
    return _origin_index(rho)


def tail_index(rho):
    return _tail_index(rho)


def psi_exponents(rho):
    """Power of psi_integral(u) as u -> 0 and as u -> inf, or None if psi is infinite."""
    beta = _tail_index(rho)
    if beta <= 1.0:
        return None
    return min(beta, 2.0), max(_origin_index(rho), 1.0)


def psi_truncated_exponents(rho):
    return 2.0, max(_origin_index(rho), 1.0)


def phi_one_exponents(rho):
    """Powers of int (1 ^ |xu|) rho(dx); None when infinite (infinite-variation driver)."""
    beta0 = _origin_index(rho)
    if beta0 >= 1.0:
        return None
    return min(_tail_index(rho), 1.0), max(beta0, 0.0)


EXPONENT_TOL = 1e-12


def moment_finite(rho, q):
    """Exponent-certified finiteness of int |x|^q rho(dx); boundary cases diverge."""
    at_zero = rho.finite_mass or q > _origin_index(rho) + EXPONENT_TOL
    at_inf = q < _tail_index(rho) - EXPONENT_TOL
    return at_zero and at_inf


def infinite_variation(rho):
    """int_{|x| <= 1} |x| rho(dx) = inf."""
    return _origin_index(rho) >= 1.0


# tail ratio conditions -------------------------------------------------------


@dataclass(frozen=True)
class RatioCheck:
    status: Status
    reason: str
    witness_u: tuple = ()
    witness_ratio: tuple = ()


def tail_ratio(rho, u):
    """u int_{|x|>u} |x| rho(dx) / int_{|x|<=u} x^2 rho(dx)."""
    num = u * moment_above(rho, 1.0, u)
    den = moment_below(rho, 2.0, u)
    if den == 0.0:
        return math.inf
    return num / den


def _witness(rho, lo, hi, n=61):
    us = np.logspace(math.log10(lo), math.log10(hi), n)
    return tuple(us.tolist()), tuple(tail_ratio(rho, float(u)) for u in us)


def ratio_u0(rho):
    """limsup_{u -> inf} of the tail ratio is finite (decided from exponents)."""
    try:
        us, rs = _witness(rho, 1.0, 1e6)
    except ExponentsUnknown:
        us, rs = (), ()
    te = rho.tail_exponent
    if te is None:
        return RatioCheck(Status.UNKNOWN, "tail exponent not declared", us, rs)
    if math.isinf(te) or te < -2.0:
        return RatioCheck(Status.SATISFIED, "finite second moment beyond 1", us, rs)
    if -2.0 <= te < -1.0:
        return RatioCheck(Status.SATISFIED, f"regularly varying tail of index {te}", us, rs)
    return RatioCheck(Status.VIOLATED, f"tail index {te} >= -1: first moment beyond u is infinite", us, rs)


def _u00_single(rho):
    base = ratio_u0(rho)
    if base.status is not Status.SATISFIED:
        return base.status, base.reason
    if rho.finite_mass:
        return Status.VIOLATED, "no mass near the origin: the ratio denominator vanishes for small u"
    try:
        beta0 = _origin_index(rho)
    except ExponentsUnknown as exc:
        return Status.UNKNOWN, str(exc)
    if 1.0 < beta0 < 2.0:
        return Status.SATISFIED, f"regularly varying at 0 with index {-beta0}"
    return Status.UNKNOWN, f"origin index {-beta0} outside (-2, -1)"


def ratio_u00(spec):
    """sup over marks and u > 0 of the tail ratio is finite."""
    measures = spec.distinct_measures()
    if all(isinstance(r, SymmetricStable) for r in measures):
        alphas = [r.alpha for r in measures]
        if min(alphas) > 1.0:
            bound = max((2.0 - a) / (a - 1.0) for a in alphas)
            return RatioCheck(Status.SATISFIED, f"stable marks with ratio constant <= {bound:.6g}")
        return RatioCheck(Status.UNKNOWN, "stable index <= 1 on some mark")
    statuses = [_u00_single(r) for r in measures]
    for st, why in statuses:
        if st is Status.VIOLATED:
            return RatioCheck(Status.VIOLATED, why)
    for st, why in statuses:
        if st is Status.UNKNOWN:
            return RatioCheck(Status.UNKNOWN, why)
    if len(measures) == 1 or isinstance(spec.marks, DiscreteMarks):
        return RatioCheck(Status.SATISFIED, "; ".join(sorted({why for _, why in statuses})))
    return RatioCheck(Status.UNKNOWN, "mark-dependent measures on a continuum")


# ---------------------------------------------------------------------------
# mark measures and the random measure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscreteMarks:
    points: tuple
    weights: tuple

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        wts = tuple(float(w) for w in self.weights)
        if len(pts) != len(wts) or not pts:
            raise DomainError("discrete marks need matching, non-empty points and weights")
        if any(w <= 0 for w in wts):
            raise DomainError("mark weights must be positive")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", wts)

    @property
    def total_mass(self):
        return math.fsum(self.weights)

    def atoms(self):
        return list(zip(self.points, self.weights))


@dataclass(frozen=True)
class DensityMarks:
    """m(dv) = density(v) dv on (lo, hi).

    ``lo_exponent``/``hi_exponent`` declare the power of the density near
    each endpoint: in |v - e| for a finite endpoint e, in |v| for an
    infinite one.
    """

    lo: float
    hi: float
    density: Callable[[float], float] = field(compare=False)
    lo_exponent: Union[float, None] = None
    hi_exponent: Union[float, None] = None
    label: str = ""

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError("density marks need lo < hi")

    def endpoint_exponent(self, which):
        return self.lo_exponent if which == "lo" else self.hi_exponent

    def mass(self, lo=None, hi=None):
        lo = self.lo if lo is None else max(lo, self.lo)
        hi = self.hi if hi is None else min(hi, self.hi)
        for end, exp_ in ((lo, self.lo_exponent), (hi, self.hi_exponent)):
            if math.isinf(end) and (exp_ is None or exp_ >= -1.0):
                raise UnnormalizableMarks(f"mark density is not integrable towards {end}")
        if self.lo_exponent is not None and lo == self.lo and math.isfinite(lo) and self.lo_exponent <= -1.0:
            raise UnnormalizableMarks("mark density not integrable at the lower endpoint")
        if self.hi_exponent is not None and hi == self.hi and math.isfinite(hi) and self.hi_exponent <= -1.0:
            raise UnnormalizableMarks("mark density not integrable at the upper endpoint")
        return quadrature.integrate_interval(self.density, lo, hi)

    def sample_points(self, n=33):
        lo = self.lo if math.isfinite(self.lo) else min(-1.0, self.hi) * 1e3
        hi = self.hi if math.isfinite(self.hi) else max(1.0, self.lo) * 1e3
        return np.linspace(lo, hi, n + 2)[1:-1]


def power_marks(lo, hi, exponent, scale=1.0):
    """Density marks proportional to |v|^exponent on (lo, hi), lo < hi <= 0 or 0 <= lo < hi."""
    if lo < 0 < hi:
        raise DomainError("power marks must not straddle 0")

    def ends(e):
        if e == 0.0 or math.isinf(e):
            return exponent
        return 0.0

    q = float(exponent)
    return DensityMarks(
        lo, hi, lambda v: scale * abs(v) ** q, ends(lo), ends(hi), label=f"|v|^{q:g} on ({lo:g}, {hi:g})"
    )


@dataclass(frozen=True)
class SequenceMarks:
    """Countably many marks v_i with weights w_i, i = 1, 2, ..."""

    point: Callable[[int], float] = field(compare=False)
    weight: Callable[[int], float] = field(compare=False)
    probe: int = 20

    def atoms(self, n=None):
        n = self.probe if n is None else n
        return [(float(self.point(i)), float(self.weight(i))) for i in range(1, n + 1)]


MarkMeasure = Union[DiscreteMarks, DensityMarks, SequenceMarks]


def _as_function(value):
    return value if callable(value) else (lambda v, _c=value: _c)


@dataclass(frozen=True)
class RandomMeasureSpec:
    """Characteristics (b, sigma^2, rho_v, m) of a translation-invariant random measure.

    ``levy``, ``drift`` and ``gaussian_var`` are either constants or
    functions of the mark.
    """

    marks: MarkMeasure
    levy: object
    drift: object = 0.0
    gaussian_var: object = 0.0

    def rho(self, v):
        return _as_function(self.levy)(v)

    def b(self, v):
        return float(_as_function(self.drift)(v))

    def sigma2(self, v):
        return float(_as_function(self.gaussian_var)(v))

    def probe_marks(self):
        """Marks at which mark-dependent characteristics are inspected."""
        if isinstance(self.marks, DiscreteMarks):
            return list(self.marks.points)
        if isinstance(self.marks, SequenceMarks):
            return [v for v, _ in self.marks.atoms()]
        return list(self.marks.sample_points())

    def distinct_measures(self):
        if not callable(self.levy):
            return [self.levy]
        seen = []
        for v in self.probe_marks():
            r = self.rho(v)
            if r not in seen:
                seen.append(r)
        return seen

    @property
    def homogeneous(self):
        return not callable(self.levy)

    @property
    def symmetric(self):
        marks = self.probe_marks()
        return all(self.rho(v).symmetric and self.b(v) == 0.0 for v in marks)

    @property
    def gaussian_free(self):
        return all(self.sigma2(v) == 0.0 for v in self.probe_marks())

    def check_nondeterministic(self):
        for v in self.probe_marks():
            r = self.rho(v)
            empty = isinstance(r, CompoundPoisson) and not r.atoms
            if self.sigma2(v) <= 0.0 and empty:
                raise NonDeterministic(f"mark {v}: neither Gaussian part nor jumps")


def char_B(x, v, spec):
    """B(x, v) = x b(v) + int ([[x y]] - x [[y]]) rho_v(dy)."""
    x = float(x)
    rho = spec.rho(v)
    out = x * spec.b(v)
    if x == 0.0 or rho.symmetric:
        return out
    if isinstance(rho, CompoundPoisson):
        return out + math.fsum(w * (truncate(x * a) - x * truncate(a)) for a, w in rho.atoms)
    raise DomainError(f"B is only available for symmetric or atomic measures, got {type(rho).__name__}")


def char_K(x, v, spec):
    """K(x, v) = x^2 sigma^2(v) + int [[x y]]^2 rho_v(dy)."""
    x = abs(float(x))
    if x == 0.0:
        return 0.0
    rho = spec.rho(v)
    a = 1.0 / x
    return x * x * spec.sigma2(v) + x * x * moment_below(rho, 2.0, a) + moment_above(rho, 0.0, a)
