"""Moving-average kernels f(t, v), their derivatives and the shifted kernel g.

All kernels are causal (zero for negative times).  ``f0_mode`` selects
between the stationary-increment form f0 = f and the plain moving average
f0 = 0.  Each kernel declares the power of |fdot(t, v)| as t -> 0+ and as
t -> inf; ``-inf`` at infinity means exponential decay.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import DomainError, NotAbsolutelyContinuous

SAME_AS_F = "same_as_f"
ZERO = "zero"
F0_MODES = (SAME_AS_F, ZERO)


def _check_mode(mode):
    if mode not in F0_MODES:
        raise DomainError(f"f0_mode must be one of {F0_MODES}, got {mode!r}")


def _value(param, v):
    return float(param(v)) if callable(param) else float(param)


def _values(param, v):
    """Parameter at a scalar or array of marks."""
    if not callable(param):
        return float(param)
    if np.ndim(v) == 0:
        return float(param(float(v)))
    return np.vectorize(lambda u: float(param(u)), otypes=[float])(v)


@dataclass(frozen=True)
class KernelExponents:
    """|fdot(t, v)| ~ t**origin as t -> 0+ and ~ t**infinity as t -> inf."""

    origin: float
    infinity: float
    vanishing: bool = False  # fdot == 0 identically


@dataclass(frozen=True)
class Fractional:
    """f(t, v) = t_+ ** gamma(v)."""

    gamma: Union[float, Callable] = 0.25
    f0_mode: str = SAME_AS_F

    def __post_init__(self):
        _check_mode(self.f0_mode)
        if not callable(self.gamma) and self.gamma <= 0:
            raise DomainError(f"fractional gamma={self.gamma} must be positive")

    absolutely_continuous = True
    piecewise_constant = False

    def gamma_at(self, v=0.0):
        g = _values(self.gamma, v)
        if np.any(np.asarray(g) <= 0):
            raise DomainError(f"fractional gamma must be positive, got {g}")
        return g

    def f(self, t, v=0.0):
        g = self.gamma_at(v)
        t = np.asarray(t, dtype=float)
        return np.where(t > 0, np.power(np.maximum(t, 0.0), g), 0.0)

    def fdot(self, t, v=0.0):
        g = self.gamma_at(v)
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(t > 0, g * np.power(np.where(t > 0, t, 1.0), g - 1.0), np.where(t == 0, math.inf, 0.0))

    def exponents(self, v=0.0):
        g = self.gamma_at(v)
        return KernelExponents(float(g) - 1.0, float(g) - 1.0)


@dataclass(frozen=True)
class ExponentialOU:
    """f(t, v) = exp(v t) 1{t >= 0} with decay rate v < 0."""

    f0_mode: str = ZERO

    def __post_init__(self):
        _check_mode(self.f0_mode)

    absolutely_continuous = True
    piecewise_constant = False

    @staticmethod
    def _rate(v):
        v = np.asarray(v, dtype=float)
        if np.any(v >= 0):
            raise DomainError(f"OU mark v={v} must be negative")
        return v if v.ndim else float(v)

    def f(self, t, v=-1.0):
        v = self._rate(v)
        t = np.asarray(t, dtype=float)
        return np.where(t >= 0, np.exp(v * np.maximum(t, 0.0)), 0.0)

    def fdot(self, t, v=-1.0):
        v = self._rate(v)
        t = np.asarray(t, dtype=float)
        return np.where(t >= 0, v * np.exp(v * np.maximum(t, 0.0)), 0.0)

    def exponents(self, v=-1.0):
        self._rate(v)
        return KernelExponents(0.0, -math.inf)


@dataclass(frozen=True)
class Step:
    """f(t) = 1{t >= 0}; with f0 = f the process is the driving Levy process."""

    f0_mode: str = SAME_AS_F

    def __post_init__(self):
        _check_mode(self.f0_mode)

    absolutely_continuous = True
    piecewise_constant = True

    def f(self, t, v=0.0):
        return np.where(np.asarray(t, dtype=float) >= 0, 1.0, 0.0)

    def fdot(self, t, v=0.0):
        return np.zeros_like(np.asarray(t, dtype=float))

    def exponents(self, v=0.0):
        return KernelExponents(0.0, -math.inf, vanishing=True)


@dataclass(frozen=True)
class Box:
    """f(t) = 1{0 <= t < width}: jumps back to 0 at t = width."""

    width: float = 1.0
    f0_mode: str = SAME_AS_F

    def __post_init__(self):
        _check_mode(self.f0_mode)
        if self.width <= 0:
            raise DomainError("box width must be positive")

    absolutely_continuous = False
    piecewise_constant = True

    def f(self, t, v=0.0):
        t = np.asarray(t, dtype=float)
        return np.where((t >= 0) & (t < self.width), 1.0, 0.0)

    def fdot(self, t, v=0.0):
        raise NotAbsolutelyContinuous(f"box kernel jumps at t={self.width}")

    def exponents(self, v=0.0):
        raise NotAbsolutelyContinuous(f"box kernel jumps at t={self.width}")


@dataclass(frozen=True)
class Custom:
    """User kernel from vectorised closures f(t, v) and fdot(t, v).

    The closures only need to be correct for t >= 0; causality is enforced
    here.  Without declared exponents every finiteness verdict is unknown.
    """

    f_fn: Callable = field(compare=False)
    fdot_fn: Callable = field(compare=False)
    origin_exponent: Union[float, Callable, None] = None
    infinity_exponent: Union[float, Callable, None] = None
    f0_mode: str = SAME_AS_F
    label: str = "custom"

    def __post_init__(self):
        _check_mode(self.f0_mode)

    absolutely_continuous = True
    piecewise_constant = False

    def f(self, t, v=0.0):
        t = np.asarray(t, dtype=float)
        return np.where(t >= 0, self.f_fn(np.maximum(t, 0.0), v), 0.0)

    def fdot(self, t, v=0.0):
        t = np.asarray(t, dtype=float)
        return np.where(t >= 0, self.fdot_fn(np.maximum(t, 0.0), v), 0.0)

    def exponents(self, v=0.0):
        if self.origin_exponent is None or self.infinity_exponent is None:
            return None
        return KernelExponents(_value(self.origin_exponent, v), _value(self.infinity_exponent, v))


Kernel = Union[Fractional, ExponentialOU, Step, Box, Custom]


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def eval_f(k, t, v=0.0):
    """f(t, v); zero for t < 0."""
    return _scalar(k.f(t, v))


def eval_f0(k, t, v=0.0):
    if k.f0_mode == ZERO:
        return _scalar(np.zeros_like(np.asarray(t, dtype=float)))
    return eval_f(k, t, v)


def eval_fdot(k, t, v=0.0):
    """Derivative of f in t; the right limit at t = 0."""
    if not k.absolutely_continuous:
        raise NotAbsolutelyContinuous(f"{type(k).__name__} kernel is not absolutely continuous on [0, inf)")
    return _scalar(k.fdot(t, v))


def eval_g(k, s, v=0.0):
    """g(s, v) = f(s, v) - f(0, v) 1{s >= 0}."""
    s = np.asarray(s, dtype=float)
    f_zero = np.asarray(k.f(0.0, v))
    return _scalar(k.f(s, v) - f_zero * (s >= 0))


def phi(k, t, s, v=0.0):
    """Integrand of the moving average: f(t - s, v) - f0(-s, v)."""
    s = np.asarray(s, dtype=float)
    out = k.f(t - s, v)
    if k.f0_mode == SAME_AS_F:
        out = out - k.f(-s, v)
    return _scalar(out)


def f_at_zero(k, v=0.0):
    return _scalar(np.asarray(k.f(0.0, v)))


def kernel_exponents(k, v=0.0):
    """Declared exponents of |fdot|, or None when undeclared."""
    return k.exponents(v)
