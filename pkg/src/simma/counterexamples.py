"""Two counterexamples on decompositions of infinitely divisible processes.

Gauss-Laplace: with U standard Gaussian and V standard Laplace independent,
E[U | U + V = y] is bounded, so it cannot be infinitely divisible.

Poisson-Brownian: X_t = sum_{k <= N} B_k(t) with N Poisson and B_k
independent Brownian motions is a martingale whose increments are dependent;
the characteristic function does not factorise.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special

from .rng import path_generator


def _log_weights(y):
    # y-dependent parts of the two Laplace branches, Gaussian tails in log space
    y = np.asarray(y, dtype=float)
    log_a = -y + special.log_ndtr(y - 1.0)
    log_b = y + special.log_ndtr(-y - 1.0)
    return log_a, log_b


def conditional_mean(y):
    """E[U | U + V = y] for U ~ N(0, 1) and V standard Laplace.

    Equals (a - b) / (a + b) with a = e^{-y} Phi(y - 1), b = e^{y} (1 - Phi(y + 1)),
    evaluated as tanh((log a - log b) / 2).
    """
    log_a, log_b = _log_weights(y)
    out = np.tanh(0.5 * (log_a - log_b))
    return float(out) if out.ndim == 0 else out


def log_conditional_mean_deficit(y):
    """log(1 - |E[U | U + V = y]|); finite for every finite y."""
    log_a, log_b = _log_weights(y)
    z = np.abs(0.5 * (log_a - log_b))
    # 1 - tanh(z) = 2 / (1 + e^{2z})
    out = math.log(2.0) - np.logaddexp(0.0, 2.0 * z)
    return float(out) if out.ndim == 0 else out


def conditional_mean_deficit(y):
    """1 - |E[U | U + V = y]|, accurate where the mean rounds to +-1 (underflows past |y| ~ 38)."""
    return np.exp(log_conditional_mean_deficit(y)) if np.ndim(y) else math.exp(log_conditional_mean_deficit(y))


def laplace_density(v):
    return 0.5 * np.exp(-np.abs(v))


def sample_gauss_laplace(n, seed=0):
    """(U, Y = U + V) samples."""
    rng = path_generator(seed, 0)
    u = rng.standard_normal(n)
    v = rng.laplace(0.0, 1.0, n)
    return u, u + v


def monte_carlo_conditional_mean(y, n=10**6, delta=0.05, seed=0):
    """(estimate, standard error, count) of E[U | Y in (y - delta, y + delta)]."""
    u, yy = sample_gauss_laplace(n, seed)
    sel = np.abs(yy - y) < delta
    k = int(sel.sum())
    if k < 2:
        return math.nan, math.nan, k
    us = u[sel]
    return float(us.mean()), float(us.std(ddof=1) / math.sqrt(k)), k


# ---------------------------------------------------------------------------
# Poisson sum of Brownian motions
# ---------------------------------------------------------------------------


def poisson_brownian_cf(theta, u, lam=1.0):
    """E exp(i theta (X_2 - X_1) + i u X_1) for X = sum_{k <= N} B_k, N ~ Poisson(lam)."""
    return math.exp(lam * (math.exp(-0.5 * theta * theta - 0.5 * u * u) - 1.0))


def poisson_brownian_factorization_gap(theta, u, lam=1.0):
    """|joint characteristic function - product of the marginal ones|."""
    joint = poisson_brownian_cf(theta, u, lam)
    first = poisson_brownian_cf(theta, 0.0, lam)
    second = poisson_brownian_cf(0.0, u, lam)
    return abs(joint - first * second)


def identity_sides(theta, u):
    """Both sides of the identity independent increments would force.

    Left: exp(-theta^2/2 - u^2/2).  Right: exp(-theta^2/2) + exp(-u^2/2) - 1.
    """
    left = math.exp(-0.5 * theta * theta - 0.5 * u * u)
    right = math.exp(-0.5 * theta * theta) + math.exp(-0.5 * u * u) - 1.0
    return left, right


def simulate_poisson_brownian(n_paths, times=(0.0, 1.0, 2.0), lam=1.0, seed=0):
    """Paths of sum_{k <= N} B_k(t) at the given times, one row per path.

    Given N = n the sum is sqrt(n) times a single Brownian motion, so each
    path needs one Poisson draw and one Gaussian increment per time step.
    """
    times = np.asarray(times, dtype=float)
    out = np.zeros((n_paths, len(times)))
    dt = np.diff(times, prepend=0.0)
    for i in range(n_paths):
        rng = path_generator(seed, i)
        n = rng.poisson(lam)
        steps = rng.standard_normal(len(times)) * np.sqrt(dt)
        out[i] = math.sqrt(n) * np.cumsum(steps)
    return out


def demo_table(ys=None):
    """Rows (y, conditional mean, deficit 1 - |mean|)."""
    ys = np.linspace(-10.0, 10.0, 41) if ys is None else np.asarray(ys, dtype=float)
    return [(float(y), conditional_mean(y), conditional_mean_deficit(y)) for y in ys]


def gap_surface(values=(0.0, 0.5, 1.0, 2.0, 4.0), lam=1.0):
    """Rows (theta, u, lhs, rhs, gap) over a square grid."""
    rows = []
    for th in values:
        for u in values:
            lhs, rhs = identity_sides(th, u)
            rows.append((th, u, lhs, rhs, poisson_brownian_factorization_gap(th, u, lam)))
    return rows
