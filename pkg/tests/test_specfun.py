import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cloakforge import specfun as sf
from cloakforge.errors import DomainError, InvalidArgumentError


def test_j_at_zero():
    assert sf.bessel_j(0, 0.0) == 1.0
    assert sf.bessel_j(1, 0.0) == 0.0


def test_j_matches_ascending_series():
    assert sf.bessel_j(5, 2.0) == pytest.approx(sf.j_series(5, 2.0), rel=1e-13)


def test_y_matches_ascending_series():
    assert sf.bessel_y(2, 1.0) == pytest.approx(sf.y_series(2, 1.0), rel=1e-13)


def test_y0_small_argument():
    t = 1e-6
    expected = (2 / math.pi) * (math.log(t / 2) + sf.EULER_GAMMA)
    assert abs(sf.bessel_y(0, t) - expected) < 1e-10


def test_domain_errors():
    with pytest.raises(DomainError):
        sf.bessel_y(0, 0.0)
    with pytest.raises(DomainError):
        sf.bessel_y(1, -1.0)
    with pytest.raises(InvalidArgumentError):
        sf.bessel_j(0, float("nan"))
    with pytest.raises(InvalidArgumentError):
        sf.bessel_j(0, math.inf)


def test_wronskian_grid():
    worst = max(sf.wronskian_residual(n, t) for n in range(31) for t in np.logspace(-3, 3, 61))
    assert worst < 1e-12


def test_wronskian_single_point():
    assert sf.wronskian_residual(3, 0.7) < 1e-12


def test_hankel_large_argument():
    t = 200.0
    approx = math.sqrt(2 / (math.pi * t)) * np.exp(1j * (t - math.pi / 4))
    h = sf.hankel1(0, t)
    assert abs(h - approx) / abs(h) < 2.0 / t


def test_h1p0_is_minus_h1():
    for t in (0.1, 1.0, 7.5):
        assert abs(sf.hankel1p(0, t) + sf.hankel1(1, t)) < 1e-14 * abs(sf.hankel1(1, t))


def test_jp_finite_difference():
    h = 1e-6
    fd = (sf.bessel_j(3, 1.5 + h) - sf.bessel_j(3, 1.5 - h)) / (2 * h)
    assert abs(sf.bessel_jp(3, 1.5) - fd) < 1e-8


@given(st.integers(0, 20), st.floats(0.05, 50.0))
def test_derivative_recurrence(n, t):
    for f, fp in ((sf.bessel_j, sf.bessel_jp), (sf.bessel_y, sf.bessel_yp)):
        lhs = fp(n, t)
        rhs = f(n - 1, t) - n / t * f(n, t)
        scale = max(abs(f(n - 1, t)), abs(n / t * f(n, t)), 1e-300)
        assert abs(lhs - rhs) <= 1e-12 * scale


@given(st.integers(1, 30), st.floats(0.01, 100.0))
def test_negative_order_reflection(n, t):
    sign = (-1) ** n
    assert sf.bessel_j(-n, t) == sign * sf.bessel_j(n, t)
    assert sf.bessel_y(-n, t) == sign * sf.bessel_y(n, t)
    v, w = sf.cyl_values(-n, t), sf.cyl_values(n, t)
    assert (v.jp, v.yp) == (sign * w.jp, sign * w.yp)


@given(st.integers(0, 15), st.floats(0.1, 20.0))
def test_derivatives_against_finite_differences(n, t):
    h = 1e-5 * t
    for f, fp in ((sf.bessel_j, sf.bessel_jp), (sf.bessel_y, sf.bessel_yp)):
        fd = (f(n, t + h) - f(n, t - h)) / (2 * h)
        scale = max(abs(fp(n, t)), abs(f(n, t)) / t)
        assert abs(fp(n, t) - fd) <= 1e-7 * scale


def test_large_order_bound():
    for t in (0.1, 1.0, 5.0):
        for n in range(max(2, math.ceil(2 * t)), 40):
            assert abs(sf.bessel_j(n, t)) <= 1.1 * sf.large_order_bound(n, t)


def test_digamma_int():
    assert sf.digamma_int(1) == pytest.approx(-sf.EULER_GAMMA, abs=1e-16)
    assert sf.digamma_int(4) == pytest.approx(-sf.EULER_GAMMA + 1 + 0.5 + 1 / 3, abs=1e-15)
