"""Path functionals and the structural tests run on simulated output."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels as kn
from .errors import InsufficientPaths

STABLE_LO = 0.99
STABLE_HI = 1.05
MIN_PATHS = 1000
CF_GRID = (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0)


def quadratic_variation(path, grid=None):
    """sum_i (x[i] - x[i-1])^2."""
    d = np.diff(np.asarray(path, dtype=float))
    return float(np.sum(d * d))


def total_variation(path, grid=None):
    """sum_i |x[i] - x[i-1]|."""
    return float(np.sum(np.abs(np.diff(np.asarray(path, dtype=float)))))


@dataclass(frozen=True)
class VariationReport:
    grid_sizes: np.ndarray
    qv: np.ndarray
    tv: np.ndarray
    verdict_fv: str


def variation_report(path, levels=4):
    """QV and TV on nested subgrids of a path sampled on its finest grid.

    Level k keeps every 2**(levels-1-k)-th point, so the path length minus
    one must be divisible by 2**(levels-1).
    """
    path = np.asarray(path, dtype=float)
    step0 = 2 ** (levels - 1)
    if (len(path) - 1) % step0:
        raise ValueError(f"path length {len(path)} does not support {levels} nested levels")
    sizes, qv, tv = [], [], []
    for k in range(levels):
        sub = path[:: 2 ** (levels - 1 - k)]
        sizes.append(len(sub))
        qv.append(quadratic_variation(sub))
        tv.append(total_variation(sub))
    return VariationReport(np.array(sizes), np.array(qv), np.array(tv), verdict_fv(tv))


def verdict_fv(tv):
    """Ratio-stabilisation diagnostic over at least three refinement levels."""
    tv = np.asarray(tv, dtype=float)
    if len(tv) < 3:
        return "inconclusive"
    if tv[-2] == 0.0:
        return "stabilizing" if tv[-1] == 0.0 else "diverging"
    r = tv[-1] / tv[-2]
    if STABLE_LO <= r <= STABLE_HI:
        return "stabilizing"
    if r > STABLE_HI:
        return "diverging"
    return "inconclusive"


# ---------------------------------------------------------------------------
# independence of increments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IndependenceReport:
    n_paths: int
    correlations: tuple
    corr_bound: float
    max_gap: float
    max_gap_se: float  # largest |gap| / SE over the grid
    passed: bool
    details: list = field(default_factory=list)


def _cf_gap(a, b, theta, u):
    """Factorisation gap of the empirical characteristic function and its SE."""
    ea = np.exp(1j * theta * a)
    eb = np.exp(1j * u * b)
    joint = ea * eb
    pa, pb = ea.mean(), eb.mean()
    gap = joint.mean() - pa * pb
    infl = joint - pa * eb - pb * ea
    infl = infl - infl.mean()
    se = math.sqrt(float(np.mean(np.abs(infl) ** 2)) / len(a))
    return abs(gap), se


def independence_test(increments, pairs, cf_grid=CF_GRID, n_se=3.0):
    """Test independence of increments over disjoint interval pairs.

    ``increments`` maps an interval key to an array of per-path increments;
    ``pairs`` lists the key pairs to compare.  Passes iff every correlation
    is within n_se / sqrt(n) and every characteristic-function gap within
    n_se Monte Carlo standard errors.
    """
    n = len(next(iter(increments.values())))
    if n < MIN_PATHS:
        raise InsufficientPaths(f"need at least {MIN_PATHS} paths, got {n}")
    bound = n_se / math.sqrt(n)
    corrs, details = [], []
    worst_gap, worst_ratio = 0.0, 0.0
    ok = True
    for ka, kb in pairs:
        a = np.asarray(increments[ka], dtype=float)
        b = np.asarray(increments[kb], dtype=float)
        c = float(np.corrcoef(a, b)[0, 1])
        corrs.append(c)
        ok &= abs(c) < bound
        for theta in cf_grid:
            for u in cf_grid:
                gap, se = _cf_gap(a, b, theta, u)
                ratio = gap / se if se > 0 else (math.inf if gap > 0 else 0.0)
                details.append((ka, kb, theta, u, gap, se))
                worst_gap = max(worst_gap, gap)
                worst_ratio = max(worst_ratio, ratio)
                ok &= gap <= n_se * se
    return IndependenceReport(n, tuple(corrs), bound, worst_gap, worst_ratio, bool(ok), details)


def increments_over(paths, grid, intervals):
    """Per-path increments x(t1) - x(t0) for each (t0, t1) interval on the grid."""
    grid = np.asarray(grid, dtype=float)
    paths = np.asarray(paths, dtype=float)
    out = {}
    for t0, t1 in intervals:
        i0 = int(np.argmin(np.abs(grid - t0)))
        i1 = int(np.argmin(np.abs(grid - t1)))
        out[(t0, t1)] = paths[:, i1] - paths[:, i0]
    return out


# ---------------------------------------------------------------------------
# jump matching
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JumpMatchReport:
    grid_sizes: tuple
    max_abs_error: tuple
    max_rel_error: tuple
    max_measured: tuple
    predicted: np.ndarray
    passed: bool


def predicted_cell_jumps(ens, kernel, grid):
    """Sum of R_j f(0, v_j) over arrivals in each grid cell (t[k-1], t[k]]."""
    grid = np.asarray(grid, dtype=float)
    inside = (ens.t1 > grid[0]) & (ens.t1 <= grid[-1])
    cells = np.searchsorted(grid, ens.t1[inside], side="left")
    sizes = ens.r[inside] * np.asarray(kernel.f(0.0 * ens.t1[inside], ens.t2[inside]))
    out = np.zeros(len(grid))
    np.add.at(out, cells, sizes)
    return out


def largest_arrivals(ens, horizon, k=20):
    """Indices of the k largest |R_i| with arrival time in (0, horizon]."""
    idx = np.flatnonzero((ens.t1 > 0) & (ens.t1 <= horizon))
    order = np.argsort(-np.abs(ens.r[idx]), kind="stable")
    return idx[order[:k]]


def jump_match(paths, grids, ens, kernel, k=20):
    """Measured vs predicted jumps at the k largest arrivals on nested grids.

    ``paths[i]`` is X sampled on ``grids[i]``.  The measured jump is the grid
    increment over the cell containing the arrival; the prediction is
    R_i f(0, v_i) summed over arrivals sharing that cell.  Passes iff the
    largest error is non-increasing under refinement or already at roundoff.
    """
    horizon = float(np.asarray(grids[0])[-1])
    chosen = largest_arrivals(ens, horizon, k)
    sizes, abs_err, rel_err, meas_max = [], [], [], []
    predicted = None
    for path, grid in zip(paths, grids):
        grid = np.asarray(grid, dtype=float)
        path = np.asarray(path, dtype=float)
        pred_cells = predicted_cell_jumps(ens, kernel, grid)
        cells = np.searchsorted(grid, ens.t1[chosen], side="left")
        measured = path[cells] - path[cells - 1]
        pred = pred_cells[cells]
        err = np.abs(measured - pred)
        scale = np.maximum(np.abs(pred), 1e-300)
        sizes.append(len(grid))
        abs_err.append(float(err.max()) if err.size else 0.0)
        rel_err.append(float((err / scale).max()) if err.size and np.any(pred != 0) else math.nan)
        meas_max.append(float(np.abs(measured).max()) if err.size else 0.0)
        predicted = pred
    roundoff = 1e-9 * (1.0 + max(float(np.abs(p).max()) for p in paths))
    mono = all(b <= a * (1 + 1e-12) + roundoff for a, b in zip(abs_err, abs_err[1:]))
    passed = mono or max(abs_err) <= roundoff
    return JumpMatchReport(tuple(sizes), tuple(abs_err), tuple(rel_err), tuple(meas_max), predicted, bool(passed))


def step_qv_reference(ens, horizon):
    """sum R_i^2 over arrivals in (0, horizon]: the QV of a step-kernel path."""
    sel = (ens.t1 > 0) & (ens.t1 <= horizon)
    return float(np.sum(ens.r[sel] ** 2))
