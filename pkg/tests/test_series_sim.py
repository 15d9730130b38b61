import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import simma.kernels as kn
import simma.levy_measure as lm
from simma import series_sim as ss
from simma.errors import CenteringNotImplemented, ConfigError, DomainError, UnnormalizableMarks

POINT = lm.DiscreteMarks((0.0,), (1.0,))
STABLE = lm.RandomMeasureSpec(POINT, lm.SymmetricStable(1.5))
OU_SPEC = lm.RandomMeasureSpec(lm.DiscreteMarks((-1.0,), (1.0,)), lm.SymmetricStable(1.5))


def _cfg(n_terms=2000, n_grid=101, window=1.0, seed=3, **kw):
    return ss.SeriesConfig.uniform(1.0, window, n_terms, n_grid, seed, **kw)


def test_config_validation():
    with pytest.raises(ConfigError):
        _cfg(n_terms=0)
    with pytest.raises(ConfigError):
        ss.SeriesConfig(1.0, 1.0, 10, (0.0, 0.5, 0.4, 1.0))
    with pytest.raises(ConfigError):
        ss.SeriesConfig(1.0, 0.5, 10, (0.0, 1.0))
    with pytest.raises(ConfigError):
        _cfg(seed=-1)


def test_ensemble_structure():
    cfg = _cfg()
    ens = ss.sample_ensemble(cfg, STABLE, 0)
    assert len(ens) == cfg.n_terms
    assert np.all(np.diff(ens.gamma) > 0)
    assert set(np.unique(ens.eps)) <= {-1.0, 1.0}
    assert np.all((ens.t1 >= -cfg.window) & (ens.t1 <= cfg.horizon))
    assert ens.h == pytest.approx(0.25)
    # jump sizes are non-increasing in |.| along the series and carry the sign
    assert np.all(np.diff(np.abs(ens.r)) <= 0)
    assert np.all(np.sign(ens.r) == ens.eps)
    np.testing.assert_allclose(np.abs(ens.r), lm.tail_inverse(STABLE.levy, ens.gamma * ens.h))


def test_ensemble_reproducible_and_path_indexed():
    cfg = _cfg()
    a = ss.sample_ensemble(cfg, STABLE, 4)
    b = ss.sample_ensemble(cfg, STABLE, 4)
    c = ss.sample_ensemble(cfg, STABLE, 5)
    assert np.array_equal(a.gamma, b.gamma) and np.array_equal(a.r, b.r)
    assert not np.array_equal(a.gamma, c.gamma)


def test_step_path_equals_levy_partial_sum():
    cfg = _cfg(n_terms=5000)
    ens = ss.sample_ensemble(cfg, STABLE, 0)
    x = ss.path_X(ens, cfg, STABLE, kn.Step())
    want = [ens.r[(ens.t1 > 0) & (ens.t1 <= t)].sum() for t in cfg.times]
    np.testing.assert_allclose(x, want, atol=1e-12)


def test_bundle_identity_and_cross_check():
    for kernel, spec, window in ((kn.Step(), STABLE, 1.0), (kn.ExponentialOU(), OU_SPEC, 6.0),
                                 (kn.Fractional(0.3), STABLE, 2.0)):
        cfg = _cfg(window=window)
        ens = ss.sample_ensemble(cfg, spec, 1)
        b = ss.build_bundle(ens, cfg, spec, kernel)
        assert np.array_equal(b.x, b.x0 + b.m + b.a)
        assert np.all(np.abs(b.a - b.a_direct) <= 1e-10 * (1 + np.abs(b.x)))
        assert b.a[0] == 0.0 and b.m[0] == 0.0


def test_step_has_no_drift_part_and_fractional_no_martingale_part():
    cfg = _cfg()
    b = ss.build_bundle(ss.sample_ensemble(cfg, STABLE, 0), cfg, STABLE, kn.Step())
    assert np.all(np.abs(b.a) <= 1e-12 * (1 + np.abs(b.x)))
    b = ss.build_bundle(ss.sample_ensemble(cfg, STABLE, 0), cfg, STABLE, kn.Fractional(0.2))
    assert np.all(b.m == 0.0)


def test_simulate_threads_match_serial():
    cfg = _cfg(n_terms=500, n_grid=21)
    serial = ss.simulate(cfg, STABLE, kn.Step(), n_paths=4)
    threaded = ss.simulate(cfg, STABLE, kn.Step(), n_paths=4, threads=4)
    for (_, a), (_, b) in zip(serial, threaded):
        assert np.array_equal(a.x, b.x)


def test_terminal_values_match_full_paths():
    cfg = _cfg(n_terms=500, n_grid=11)
    tv = ss.terminal_values(cfg, STABLE, kn.Step(), 3)
    full = [b.x[-1] - b.x[0] for _, b in ss.simulate(cfg, STABLE, kn.Step(), 3)]
    np.testing.assert_allclose(tv, full, atol=1e-12)


def test_refusals():
    cfg = _cfg()
    with pytest.raises(DomainError):
        ss.sample_ensemble(cfg, lm.RandomMeasureSpec(POINT, lm.SymmetricStable(1.5), gaussian_var=1.0))
    ens = ss.sample_ensemble(cfg, STABLE)
    with pytest.raises(DomainError):
        ss.path_X(ens, cfg, STABLE, kn.Fractional(0.6))
    seq = lm.RandomMeasureSpec(lm.SequenceMarks(lambda i: -float(i), lambda i: 1.0 / i), lm.SymmetricStable(1.5))
    with pytest.raises(UnnormalizableMarks):
        ss.sample_ensemble(cfg, seq)


def test_non_symmetric_driver_needs_centering():
    spec = lm.RandomMeasureSpec(POINT, lm.CompoundPoisson(((0.8, 1.0),)))
    cfg = _cfg(n_terms=50, n_grid=5)
    ens = ss.sample_ensemble(cfg, spec)
    with pytest.raises(DomainError):
        ss.path_X(ens, cfg, spec, kn.Step())
    cfg = _cfg(n_terms=50, n_grid=5, symmetric=False)
    with pytest.raises(CenteringNotImplemented):
        ss.path_X(ens, cfg, spec, kn.Step())


def test_centering_alpha_golden():
    # one atom at 0.8 with unit mass: R(r h) = 0.8 while r h < 1, then 0
    spec = lm.RandomMeasureSpec(POINT, lm.CompoundPoisson(((0.8, 1.0),)))
    cfg = _cfg(n_terms=10, n_grid=5, symmetric=False, centering=True, n_centering=3)
    ens = ss.sample_ensemble(cfg, spec)
    h = ens.h
    for j in (1, 2, 3):
        lo = 0.0 if j == 1 else ens.gamma[j - 2]
        want = (min(ens.gamma[j - 1], 1 / h) - min(lo, 1 / h)) * 0.5 * 0.8 * 0.5 / (cfg.horizon + cfg.window)
        assert ss.centering_alpha(j, 0.5, cfg, spec, kn.Step(), ens) == pytest.approx(want, rel=1e-8, abs=1e-12)


def test_density_marks_sampling():
    spec = lm.RandomMeasureSpec(lm.power_marks(-math.inf, -1.0, -2.0), lm.SymmetricStable(1.5))
    cfg = _cfg(n_terms=20000, n_grid=5, window=5.0)
    ens = ss.sample_ensemble(cfg, spec)
    # marks follow m(dv) = v^-2 dv on (-inf, -1): P(v < -x) = 1/x
    assert np.all(ens.t2 < -1.0 + 1e-12)
    for x in (2.0, 10.0):
        assert np.mean(ens.t2 < -x) == pytest.approx(1 / x, abs=0.015)


def test_stable_scale():
    # sigma^alpha = 2 c Gamma(1 - alpha) cos(pi alpha / 2) / alpha, Gamma(-1/2) = -2 sqrt(pi)
    want = (2 * -2 * math.sqrt(math.pi) * math.cos(0.75 * math.pi) / 1.5) ** (1 / 1.5)
    assert ss.stable_scale(1.5, 1.0, 1.0) == pytest.approx(want, rel=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 50))
def test_identity_exact_for_any_seed(seed, path):
    cfg = _cfg(n_terms=300, n_grid=17, window=4.0, seed=seed)
    ens = ss.sample_ensemble(cfg, OU_SPEC, path)
    b = ss.build_bundle(ens, cfg, OU_SPEC, kn.ExponentialOU())
    assert np.array_equal(b.x, b.x0 + b.m + b.a)
