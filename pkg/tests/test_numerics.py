import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from simma import _special, csvio, quadrature


@settings(max_examples=80, deadline=None)
@given(st.floats(-1.95, 2.5).filter(lambda s: abs(s - round(s)) > 1e-3), st.floats(1e-4, 60.0))
def test_upper_gamma_against_mpmath(s, z):
    want = float(mpmath.gammainc(s, z, mpmath.inf))
    assert _special.upper_gamma(s, z) == pytest.approx(want, rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(1e-4, 40.0))
def test_lower_gamma_against_mpmath(s, z):
    assert _special.lower_gamma(s, z) == pytest.approx(float(mpmath.gammainc(s, 0, z)), rel=1e-10)


def test_upper_gamma_integer_orders():
    for s in (-1.0, 0.0, 1.0):
        assert _special.upper_gamma(s, 0.7) == pytest.approx(float(mpmath.gammainc(s, 0.7, mpmath.inf)), rel=1e-10)


@pytest.mark.parametrize("q, a, b", [(-2.5, 1.0, math.inf), (0.5, 0.0, 3.0), (-1.0, 0.5, 2.0), (-0.5, 0.0, 1.0)])
def test_power_integral_matches_quadrature(q, a, b):
    num = quadrature.integrate_positive(lambda x: x ** q, a, b)
    assert quadrature.power_integral(q, a, b) == pytest.approx(num, rel=1e-8)


def test_power_integral_divergence():
    assert quadrature.power_integral(-1.0, 0.0, 1.0) == math.inf
    assert quadrature.power_integral(-0.5, 1.0, math.inf) == math.inf


def test_integrate_interval_splits_at_zero():
    val = quadrature.integrate_interval(lambda x: abs(x) ** -0.5, -1.0, 4.0)
    assert val == pytest.approx(2.0 + 4.0, rel=1e-9)


def test_csv_float_round_trip(tmp_path):
    vals = [0.1, 1 / 3, 1e-300, -2.5e17, math.inf]
    csvio.write(tmp_path / "f.csv", ["v"], [[v] for v in vals], ["note"])
    meta, cols = csvio.read_columns(tmp_path / "f.csv")
    assert meta == ["# note"]
    assert list(cols["v"]) == vals
    assert csvio.fmt(True) == "true" and csvio.fmt(np.int64(3)) == "3"
