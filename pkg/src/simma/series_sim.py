"""Shot-noise series simulation of X, its martingale part M and the drift A.

Arrivals Gamma_i are partial sums of unit exponentials, signs eps_i are fair
and marks T_i = (s_i, v_i) are uniform in time on [-S, T] and distributed as
the normalised mark measure.  With the constant density ratio

    h = 1 / (2 (T + S) m(V))

jump sizes are R_i = R(eps_i Gamma_i h, v_i) and, for symmetric drivers,

    X_t = sum_i R_i [f(t - s_i, v_i) - f0(-s_i, v_i)]
    M_t = sum_i R_i f(0, v_i) 1{0 < s_i <= t}
    A_t = X_t - X_0 - M_t = sum_i R_i [g(t - s_i, v_i) - g(-s_i, v_i)].

Non-symmetric drivers add the deterministic drift beta and subtract the
centering terms alpha_j; these are evaluated by nested quadrature for the
first ``n_centering`` terms only.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from . import kernels as kn
from . import levy_measure as lm
from . import quadrature
from .errors import CenteringNotImplemented, ConfigError, DomainError, UnnormalizableMarks
from .rng import path_generator

CHUNK = 2048


@dataclass(frozen=True)
class SeriesConfig:
    horizon: float
    window: float
    n_terms: int
    grid: tuple
    seed: int = 0
    symmetric: bool = True
    centering: bool = False
    n_centering: int = 0

    def __post_init__(self):
        grid = tuple(float(t) for t in self.grid)
        object.__setattr__(self, "grid", grid)
        if not self.horizon > 0:
            raise ConfigError("horizon must be positive")
        if self.window < self.horizon:
            raise ConfigError("window must be at least the horizon")
        if int(self.n_terms) != self.n_terms or self.n_terms < 1:
            raise ConfigError("n_terms must be a positive integer")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if len(grid) < 2 or grid[0] != 0.0 or grid[-1] != float(self.horizon):
            raise ConfigError("grid must start at 0 and end at the horizon")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("grid must be strictly increasing")
        if self.n_centering < 0:
            raise ConfigError("n_centering must be non-negative")

    @classmethod
    def uniform(cls, horizon, window, n_terms, n_grid, seed=0, **kw):
        """Evenly spaced grid with ``n_grid`` points (endpoints included)."""
        grid = np.linspace(0.0, horizon, n_grid)
        grid[-1] = horizon
        return cls(horizon, window, n_terms, tuple(grid.tolist()), seed, **kw)

    @property
    def times(self):
        return np.asarray(self.grid)

    def with_seed(self, seed):
        return SeriesConfig(self.horizon, self.window, self.n_terms, self.grid, seed,
                            self.symmetric, self.centering, self.n_centering)


@dataclass(frozen=True)
class ShotNoiseEnsemble:
    gamma: np.ndarray
    eps: np.ndarray
    t1: np.ndarray
    t2: np.ndarray
    r: np.ndarray
    h: float
    path_index: int = 0

    @property
    def gamma_level(self):
        """Largest arrival kept: the series is truncated at this Gamma level."""
        return float(self.gamma[-1])

    def __len__(self):
        return len(self.gamma)


@dataclass(frozen=True)
class PathBundle:
    grid: np.ndarray
    x: np.ndarray
    m: np.ndarray
    a: np.ndarray
    a_direct: np.ndarray

    @property
    def x0(self):
        return float(self.x[0])


# ---------------------------------------------------------------------------
# mark sampling
# ---------------------------------------------------------------------------


def _density_table(marks, n_nodes=4000):
    """Cumulative distribution of density marks on nodes graded towards the ends."""
    cached = marks.__dict__.get("_cdf_table")
    if cached is not None:
        return cached
    lo, hi = marks.lo, marks.hi
    dist = np.geomspace(1e-12, 1e300, n_nodes // 2)
    if math.isfinite(lo) and math.isfinite(hi):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        d = np.geomspace(1e-14, 1.0, n_nodes // 2) * half
        nodes = np.concatenate([lo + d, mid + 0 * d[:1], hi - d[::-1]])
    elif math.isfinite(hi):
        nodes = (hi - dist)[::-1]
    elif math.isfinite(lo):
        nodes = lo + dist
    else:
        nodes = np.concatenate([-dist[::-1], dist])
    nodes = np.unique(nodes)
    pieces = [quadrature.integrate_interval(marks.density, a, b) for a, b in zip(nodes[:-1], nodes[1:])]
    cdf = np.concatenate([[0.0], np.cumsum(pieces)])
    table = (nodes, cdf)
    object.__setattr__(marks, "_cdf_table", table)
    return table


def mark_sampler(marks):
    """(total mass, sampler(rng, n)) for the normalised mark measure."""
    if isinstance(marks, lm.DiscreteMarks):
        pts = np.asarray(marks.points)
        cum = np.cumsum(marks.weights)
        total = marks.total_mass

        def draw(rng, n):
            u = rng.random(n) * total
            return pts[np.minimum(np.searchsorted(cum, u, side="right"), len(pts) - 1)]

        return total, draw
    if isinstance(marks, lm.DensityMarks):
        total = marks.mass()
        if not math.isfinite(total) or total <= 0:
            raise UnnormalizableMarks("mark measure has infinite or zero mass")
        nodes, cdf = _density_table(marks)

        def draw(rng, n):
            return np.interp(rng.random(n) * cdf[-1], cdf, nodes)

        return total, draw
    raise UnnormalizableMarks("countably many marks cannot be normalised for simulation")


def _jump_sizes(spec, v, s):
    if spec.homogeneous:
        return lm.tail_inverse(spec.levy, s)
    out = np.empty_like(s)
    keys, inverse = np.unique(v, return_inverse=True)
    for k, key in enumerate(keys):
        sel = inverse == k
        out[sel] = lm.tail_inverse(spec.rho(float(key)), s[sel])
    return out


def _check_simulable(spec):
    if not spec.gaussian_free:
        raise DomainError("simulation supports sigma^2 = 0 only")
    spec.check_nondeterministic()


def sample_ensemble(cfg, spec, path_index=0):
    """Arrivals, signs, marks and jump sizes for one path."""
    _check_simulable(spec)
    total, draw = mark_sampler(spec.marks)
    rng = path_generator(cfg.seed, path_index)
    n = int(cfg.n_terms)
    gamma = np.cumsum(rng.standard_exponential(n))
    eps = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    t1 = rng.uniform(-cfg.window, cfg.horizon, n)
    t2 = np.asarray(draw(rng, n), dtype=float)
    h = 1.0 / (2.0 * (cfg.horizon + cfg.window) * total)
    r = _jump_sizes(spec, t2, eps * gamma * h)
    return ShotNoiseEnsemble(gamma, eps, t1, t2, np.asarray(r, dtype=float), h, path_index)


# ---------------------------------------------------------------------------
# series evaluation
# ---------------------------------------------------------------------------


def phi_matrix(kernel, t, s, v):
    """f(t - s, v) - f0(-s, v), broadcast over t, s, v."""
    out = kernel.f(t - s, v)
    if kernel.f0_mode == kn.SAME_AS_F:
        out = out - kernel.f(-s + 0.0 * t, v)
    return out


def _m_matrix(kernel, t, s, v):
    return np.asarray(kernel.f(0.0 * s, v)) * ((s > 0) & (s <= t))


def _g_matrix(kernel, t, s, v):
    return kn.eval_g(kernel, t - s, v) - kn.eval_g(kernel, -s + 0.0 * t, v)


def _series(grid, ens, fn):
    grid = np.asarray(grid, dtype=float)[:, None]
    out = np.zeros(grid.shape[0])
    for start in range(0, len(ens), CHUNK):
        sl = slice(start, start + CHUNK)
        mat = fn(grid, ens.t1[None, sl], ens.t2[None, sl])
        out += (mat * ens.r[None, sl]).sum(axis=1)
    return out


def _check_kernel(kernel, spec):
    if isinstance(kernel, kn.Fractional):
        g = np.asarray(kernel.gamma_at(np.asarray(spec.probe_marks())))
        if np.any(g >= 0.5):
            raise DomainError("fractional kernels with gamma >= 1/2 are not simulated (process not well defined)")


def _needs_centering(cfg, spec):
    if spec.symmetric:
        return False
    if cfg.symmetric:
        raise DomainError("random measure is not symmetric; set symmetric = false and enable centering")
    if not cfg.centering:
        raise CenteringNotImplemented("non-symmetric driver needs centering = true")
    return True


def _centered(cfg, spec, kernel, ens, grid, phi_fn, with_beta):
    out = np.zeros(len(grid))
    for i, t in enumerate(grid):
        acc = [drift_beta(t, cfg, spec, kernel, phi_fn)] if with_beta else []
        for j in range(1, min(cfg.n_centering, len(ens)) + 1):
            acc.append(-centering_alpha(j, t, cfg, spec, kernel, ens, phi_fn))
        out[i] = math.fsum(acc)
    return out


def path_X(ens, cfg, spec, kernel, grid=None):
    _check_kernel(kernel, spec)
    grid = cfg.times if grid is None else np.asarray(grid, dtype=float)
    x = _series(grid, ens, lambda t, s, v: phi_matrix(kernel, t, s, v))
    if _needs_centering(cfg, spec):
        x = x + _centered(cfg, spec, kernel, ens, grid, None, True)
    return x


def path_M(ens, cfg, spec, kernel, grid=None):
    _check_kernel(kernel, spec)
    grid = cfg.times if grid is None else np.asarray(grid, dtype=float)
    m = _series(grid, ens, lambda t, s, v: _m_matrix(kernel, t, s, v))
    if _needs_centering(cfg, spec):
        m = m + _centered(cfg, spec, kernel, ens, grid, _phi_m(kernel), True)
    return m


def path_A(x, m):
    """A = X - X_0 - M."""
    x = np.asarray(x, dtype=float)
    return x - x[0] - np.asarray(m, dtype=float)


def path_A_direct(ens, cfg, spec, kernel, grid=None):
    """sum_i R_i [g(t - s_i) - g(-s_i)] plus the matching deterministic terms."""
    _check_kernel(kernel, spec)
    grid = cfg.times if grid is None else np.asarray(grid, dtype=float)
    a = _series(grid, ens, lambda t, s, v: _g_matrix(kernel, t, s, v))
    if _needs_centering(cfg, spec):
        cx = _centered(cfg, spec, kernel, ens, grid, None, True)
        cm = _centered(cfg, spec, kernel, ens, grid, _phi_m(kernel), True)
        a = a + (cx - cx[0]) - cm
    return a


def build_bundle(ens, cfg, spec, kernel, grid=None):
    """X, M and A on the grid with x = x0 + m + a holding exactly."""
    grid = cfg.times if grid is None else np.asarray(grid, dtype=float)
    x_raw = path_X(ens, cfg, spec, kernel, grid)
    m = path_M(ens, cfg, spec, kernel, grid)
    a = x_raw - x_raw[0] - m
    x = x_raw[0] + m + a
    a_direct = path_A_direct(ens, cfg, spec, kernel, grid)
    return PathBundle(grid, x, m, a, a_direct)


def simulate(cfg, spec, kernel, n_paths=1, threads=1, first_path=0):
    """(ensemble, bundle) for paths first_path, ..., in index order."""

    def one(i):
        ens = sample_ensemble(cfg, spec, i)
        return ens, build_bundle(ens, cfg, spec, kernel)

    idx = range(first_path, first_path + n_paths)
    if threads <= 1:
        return [one(i) for i in idx]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, idx))


def terminal_values(cfg, spec, kernel, n_paths, first_path=0):
    """X_T - X_0 for many paths, evaluating only the two end points."""
    ends = np.array([0.0, cfg.horizon])
    out = np.empty(n_paths)
    for k in range(n_paths):
        ens = sample_ensemble(cfg, spec, first_path + k)
        x = path_X(ens, cfg, spec, kernel, ends)
        out[k] = x[1] - x[0]
    return out


# ---------------------------------------------------------------------------
# centering and drift
# ---------------------------------------------------------------------------


def _phi_m(kernel):
    def fn(t, s, v):
        return float(kernel.f(0.0, v)) * (1.0 if 0.0 < s <= t else 0.0)

    return fn


def _phi_scalar(kernel, phi_fn):
    if phi_fn is not None:
        return phi_fn
    return lambda t, s, v: float(phi_matrix(kernel, t, s, v))


def _time_breaks(kernel, t):
    pts = {0.0, float(t)}
    if isinstance(kernel, kn.Box):
        pts |= {t - kernel.width, -kernel.width}
    return sorted(pts)


def _discrete_marks(spec):
    if not isinstance(spec.marks, lm.DiscreteMarks):
        raise CenteringNotImplemented("centering is implemented for atomic mark measures only")
    return spec.marks.atoms()


def centering_alpha(j, t, cfg, spec, kernel, ens, phi_fn=None):
    """alpha_j(t) = int_{Gamma_{j-1}}^{Gamma_j} E [[R(eps r h, T) phi(t, T)]] dr."""
    if spec.symmetric:
        return 0.0
    atoms = _discrete_marks(spec)
    phi_s = _phi_scalar(kernel, phi_fn)
    lo_r = 0.0 if j == 1 else float(ens.gamma[j - 2])
    hi_r = float(ens.gamma[j - 1])
    h = ens.h
    total = math.fsum(w for _, w in atoms)
    width = cfg.horizon + cfg.window
    brk_s = [b for b in _time_breaks(kernel, t) if -cfg.window < b < cfg.horizon]

    def inner(r):
        acc = []
        for v, w in atoms:
            rho = spec.rho(v)
            for sign in (1.0, -1.0):
                size = float(lm.tail_inverse(rho, sign * r * h))
                if size == 0.0:
                    continue
                g = lambda s: float(lm.truncate(size * phi_s(t, s, v)))
                val, _ = integrate.quad(g, -cfg.window, cfg.horizon, points=brk_s or None, limit=200)
                acc.append(0.5 * (w / total) * val / width)
        return math.fsum(acc)

    # R(r h) only changes where r h crosses a cumulative atom mass
    brk_r = set()
    for v, _ in atoms:
        rho = spec.rho(v)
        if isinstance(rho, lm.CompoundPoisson):
            for side in lm.SIDES:
                _, ws = rho._side(side)
                brk_r |= {c / h for c in np.cumsum(ws) if lo_r < c / h < hi_r}
    pts = [lo_r, *sorted(brk_r), hi_r]
    return math.fsum(integrate.quad(inner, a, b, limit=200)[0] for a, b in zip(pts[:-1], pts[1:]))


def drift_beta(t, cfg, spec, kernel, phi_fn=None):
    """beta(t) = int B(phi(t, u), u) kappa(du) over the simulation window."""
    if spec.symmetric:
        return 0.0
    phi_s = _phi_scalar(kernel, phi_fn)
    brk_s = [b for b in _time_breaks(kernel, t) if -cfg.window < b < cfg.horizon]
    acc = []
    for v, w in _discrete_marks(spec):
        g = lambda s: lm.char_B(phi_s(t, s, v), v, spec)
        val, _ = integrate.quad(g, -cfg.window, cfg.horizon, points=brk_s or None, limit=200)
        acc.append(w * val)
    return math.fsum(acc)


# ---------------------------------------------------------------------------
# stable scales and the truncated past
# ---------------------------------------------------------------------------


def stable_scale(alpha, c, norm_alpha):
    """Scale of int phi dLambda for rho = c|x|^{-1-alpha}, given int |phi|^alpha ds."""
    k = 2.0 * c * special.gamma(1.0 - alpha) * math.cos(math.pi * alpha / 2.0) / alpha
    if alpha == 1.0:
        k = c * math.pi
    return (k * norm_alpha) ** (1.0 / alpha)


def window_tail_scale(kernel, alpha, c, horizon, window, v=0.0):
    """Stable scale of the contribution to X_T of arrivals in [-2S, -S]."""
    g = lambda s: abs(float(phi_matrix(kernel, horizon, s, v))) ** alpha
    val, _ = integrate.quad(g, -2.0 * window, -window, limit=200)
    return stable_scale(alpha, c, val)
