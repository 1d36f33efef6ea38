import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import zeta

from casimir_mirrors.errors import ConvergenceError, NoSignChangeError, SeriesDivergenceError
from casimir_mirrors.numerics import (
    bisect_array,
    find_root_bisect,
    integrate_adaptive,
    sum_tail_bounded,
)


def test_exponential_half_line():
    res = integrate_adaptive(lambda x: np.exp(-x), 0.0, math.inf)
    assert abs(res.value - 1.0) < 1e-10


def test_cubic_exact():
    res = integrate_adaptive(lambda x: x ** 3, 0.0, 1.0, rel_tol=1e-12, abs_tol=1e-16)
    assert abs(res.value - 0.25) < 1e-12


def test_casimir_log_integral():
    # sum_n (1/n) int k e^{-2nk} dk = zeta(3)/4, evaluated independently
    res = integrate_adaptive(lambda k: k * np.log1p(-np.exp(-2 * k)), 0.0, math.inf, rel_tol=1e-12)
    assert abs(res.value + zeta(3) / 4) < 1e-10


# (integrand, a, b, exact); exact values from closed forms
BATTERY = [
    (lambda x: np.exp(-x), 0.0, math.inf, 1.0),
    (lambda x: x ** 3, 0.0, 1.0, 0.25),
    (lambda x: 1 / np.sqrt(x), 0.0, 1.0, 2.0),
    (lambda x: np.log(x), 0.0, 1.0, -1.0),
    (lambda x: np.sin(x), 0.0, math.pi, 2.0),
    (lambda x: 1 / (1 + x * x), 0.0, math.inf, math.pi / 2),
    (lambda x: np.exp(-x * x), 0.0, math.inf, math.sqrt(math.pi) / 2),
    (lambda x: x * np.exp(-2 * x), 0.0, math.inf, 0.25),
    (lambda x: x ** 3 * np.exp(-x) / -np.expm1(-x), 0.0, math.inf, math.pi ** 4 / 15),
    (lambda x: np.cos(10 * x), 0.0, 1.0, math.sin(10.0) / 10),
    (lambda x: np.exp(-x) / np.sqrt(x), 0.0, math.inf, math.sqrt(math.pi)),
    (lambda x: np.sqrt(x) * np.log(x), 0.0, 1.0, -4.0 / 9.0),
]


@pytest.mark.parametrize("case", range(len(BATTERY)))
def test_error_estimate_bounds_true_error(case):
    f, a, b, exact = BATTERY[case]
    res = integrate_adaptive(f, a, b, rel_tol=1e-9, abs_tol=1e-13, max_subdivisions=5000)
    assert res.abs_error >= 0
    assert abs(res.value - exact) <= max(res.abs_error, 1e-15 * abs(exact))
    assert abs(res.value - exact) <= max(1e-13, 1e-9 * abs(exact)) * 10


def test_vector_integrand():
    res = integrate_adaptive(
        lambda x: np.stack([np.exp(-x), x * np.exp(-x)], axis=-1), 0.0, math.inf, rel_tol=1e-12
    )
    assert np.allclose(res.value, [1.0, 1.0], rtol=1e-11)


def test_deterministic():
    f = lambda x: np.exp(-x) * np.cos(x) ** 2
    a = integrate_adaptive(f, 0.0, math.inf, rel_tol=1e-12)
    b = integrate_adaptive(f, 0.0, math.inf, rel_tol=1e-12)
    assert a.value == b.value and a.abs_error == b.abs_error


def test_nonconvergence_keeps_partial():
    with pytest.raises(ConvergenceError) as info:
        integrate_adaptive(lambda x: np.sin(1 / x) / x, 0.0, 1.0, rel_tol=1e-14, max_subdivisions=20)
    assert info.value.partial is not None


def test_bisect_sqrt2():
    r = find_root_bisect(lambda x: x * x - 2, 1.0, 2.0, tol=1e-10)
    assert abs(r.root - math.sqrt(2)) < 1e-6
    assert abs(r.residual) < 1e-9


def test_bisect_cos():
    r = find_root_bisect(math.cos, 1.0, 2.0, tol=1e-10)
    assert abs(r.root - math.pi / 2) < 1e-6


def test_bisect_no_sign_change():
    with pytest.raises(NoSignChangeError):
        find_root_bisect(lambda x: x * x + 1, 0.0, 1.0)


def test_bisect_array_matches_scalar():
    c = np.array([2.0, 3.0, 5.0])
    roots = bisect_array(lambda x: x * x - c, np.ones(3), np.full(3, 3.0))
    assert np.allclose(roots, np.sqrt(c), rtol=1e-14)


def test_geometric_sum():
    s = sum_tail_bounded(lambda n: 0.5 ** n, tol=1e-14, ratio_bound=0.5)
    assert abs(s - 1.0) < 1e-12


def test_zeta4_sum():
    s = sum_tail_bounded(
        lambda n: 1.0 / n ** 4, tol=1e-12, tail_bound=lambda n: 1.0 / (3.0 * n ** 3)
    )
    assert abs(s - math.pi ** 4 / 90) < 1e-10


def test_li4_minus_one():
    s = sum_tail_bounded(
        lambda n: (-1.0) ** n / n ** 4, tol=1e-13, tail_bound=lambda n: 1.0 / (n + 1) ** 4
    )
    assert abs(s + 7 * math.pi ** 4 / 720) < 1e-12


def test_vectorized_matches_scalar():
    term = lambda n: 1.0 / np.asarray(n, float) ** 4
    tail = lambda n: 1.0 / (3.0 * n ** 3)
    a = sum_tail_bounded(term, tol=1e-12, tail_bound=tail, vectorized=True)
    assert abs(a - math.pi ** 4 / 90) < 1e-11


def test_divergence_detected():
    with pytest.raises(SeriesDivergenceError):
        sum_tail_bounded(lambda n: 1.1 ** n, tol=1e-12, ratio_bound=0.5)


@given(st.floats(0.01, 0.95))
@settings(max_examples=30, deadline=None)
def test_geometric_property(r):
    s = sum_tail_bounded(lambda n: r ** n, tol=1e-13, ratio_bound=min(0.99, r + 1e-9), start=0)
    assert abs(s - 1 / (1 - r)) <= 1e-11 / (1 - r)


@given(st.floats(0.1, 20.0), st.floats(0.0, 5.0))
@settings(max_examples=30, deadline=None)
def test_exponential_scale_property(lam, a):
    res = integrate_adaptive(lambda x: lam * np.exp(-lam * (x - a)), a, math.inf, rel_tol=1e-10)
    assert abs(res.value - 1.0) < 1e-9
