import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jsobolev.analysis import (asym_ratio, asym_ratio_check, conjugate, convergence_experiment,
                               critical_window, expected_jacobi_exponent, fit_growth,
                               jacobi_lp_growth, jacobi_partial_sum_window, norm_product,
                               norm_product_growth)
from jsobolev.bundles import exp_bundle, polynomial_bundle
from jsobolev.quadrature import QuadratureError
from jsobolev.sobolev import SobolevParams

# dyadic rationals keep the Fraction conversion exact and readable
params_st = st.builds(lambda a, b, m: (a / 8, b / 8, m),
                      st.integers(-7, 24), st.integers(-7, 24), st.integers(1, 4))


def test_window_example():
    w = critical_window(0, 0, 1)
    assert w.p_lower == 1.6
    assert w.p_upper == 8 / 3
    assert w.lower_exact == Fraction(8, 5) and w.upper_exact == Fraction(8, 3)


def test_window_bounds_are_strict():
    w = critical_window(0, 0, 1)
    assert not w.contains(1.6) and not w.contains(8 / 3)
    assert w.contains(2.0)


def test_asymmetric_window_takes_the_tighter_side():
    w = critical_window(2, 0, 1)
    # the larger shifted exponent gamma = 3 narrows both ends
    assert w.lower_exact == Fraction(16, 9)
    assert w.upper_exact == Fraction(16, 7)


def test_jacobi_window_edge_cases():
    assert jacobi_partial_sum_window(-0.5, -0.5).p_upper == math.inf
    assert jacobi_partial_sum_window(-0.5, -0.5).p_lower == 1.0
    with pytest.raises(ValueError):
        jacobi_partial_sum_window(-0.75, 0)


@settings(max_examples=60, deadline=None)
@given(params_st)
def test_window_reduces_to_shifted_jacobi_window(params):
    alpha, beta, m = params
    w = critical_window(alpha, beta, m)
    j = jacobi_partial_sum_window(alpha + m, beta + m)
    assert (w.lower_exact, w.upper_exact) == (j.lower_exact, j.upper_exact)
    assert (w.p_lower, w.p_upper) == (j.p_lower, j.p_upper)


@settings(max_examples=60, deadline=None)
@given(params_st)
def test_window_conjugate_symmetry(params):
    # the interval maps to itself under p -> p' when alpha = beta
    alpha, _, m = params
    w = critical_window(alpha, alpha, m)
    assert 1 / w.lower_exact + 1 / w.upper_exact == 1
    assert 1 < w.p_lower < 2 < w.p_upper


def test_conjugate():
    assert conjugate(2.0) == 2.0
    assert conjugate(4.0) == pytest.approx(4 / 3)
    assert conjugate(math.inf) == 1.0
    with pytest.raises(ValueError):
        conjugate(1.0)


def test_fit_growth_recovers_power_law():
    n = np.array([10, 20, 40, 80, 160])
    fit = fit_growth(n, 3.0 * n ** 0.25)
    assert fit.exponent == pytest.approx(0.25, abs=1e-12)
    assert fit.r2 == pytest.approx(1.0)
    with pytest.raises(ValueError):
        fit_growth([1, 2, 3, 4], [1, 1, 1, 1])
    with pytest.raises(ValueError):
        fit_growth([10, 11, 12, 13, 14], [1, 1, 1, 1, 1])


def test_expected_exponent_regimes():
    assert expected_jacobi_exponent(0, 3) == 0
    assert expected_jacobi_exponent(0, 6) == pytest.approx(1 / 6)
    assert expected_jacobi_exponent(1, 8 / 3) == pytest.approx(0.0)


def test_jacobi_growth_power_regime():
    fit = jacobi_lp_growth((0, 0), 8.0, [32, 64, 128, 256, 512])
    assert fit.regime == "power"
    assert fit.exponent == pytest.approx(fit.expected_exponent, abs=0.03)


def test_jacobi_growth_reflection_and_checks():
    a = jacobi_lp_growth((0.5, 1.5), 3.0, [16, 32, 64, 128, 256])
    b = jacobi_lp_growth((1.5, 0.5), 3.0, [16, 32, 64, 128, 256])
    np.testing.assert_allclose(a.values, b.values, rtol=1e-10)
    with pytest.raises(ValueError):
        jacobi_lp_growth((0, 0), 3.0, [64, 32, 128, 256, 512])
    with pytest.raises(QuadratureError):
        jacobi_lp_growth((0, 0), 3.0, [16, 32, 64, 128, 256], check_tol=0.0)


def test_norm_product_at_two_is_one():
    sp = SobolevParams(0, 0, 1)
    assert norm_product(sp, 50, 2.0) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(ValueError):
        norm_product(sp, 50, 1.0)


def test_norm_product_symmetric_in_conjugates():
    sp = SobolevParams(0.5, 0.5, 1)
    assert norm_product(sp, 40, 3.0) == pytest.approx(norm_product(sp, 40, 1.5), rel=1e-12)


def test_norm_product_growth_classification():
    sp = SobolevParams(0, 0, 1)
    inside = norm_product_growth(sp, 2.0, [16, 32, 64, 128, 256])
    outside = norm_product_growth(sp, 3.5, [16, 32, 64, 128, 256])
    assert inside.regime == "bounded" and abs(inside.exponent) < 1e-10
    assert outside.regime == "unbounded" and outside.exponent > 0.1


def test_asym_ratio_limits():
    sp = SobolevParams(0, 0, 1)
    # k = ell = m: ratio = r_{j,1}/s_{j,1} = lambda/(1+lambda) -> 1
    j = 100
    lam = j * (j + 1)
    assert asym_ratio(sp, 1, 1, j) == pytest.approx(lam / (1 + lam), rel=1e-14)
    fit = asym_ratio_check(sp, 1, 1, [100, 1000, 2000])
    assert fit.limit == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(ValueError):
        asym_ratio_check(sp, 2, 0, [10])


def test_convergence_exponential():
    sp = SobolevParams(0, 0, 1)
    res = convergence_experiment(sp, exp_bundle(), 2.0, [2, 6, 10, 14, 18])
    assert res.monotone
    assert res.errors[-1] < 1e-10
    assert res.slope < 0


def test_convergence_polynomial_exact_beyond_degree():
    sp = SobolevParams(1, 0, 2)
    f = polynomial_bundle([1, 0, 0, -2])
    res = convergence_experiment(sp, f, 3.0, [1, 2, 3, 5])
    assert res.errors[0] > 0.1
    assert max(res.errors[2:]) < 1e-12
    with pytest.raises(ValueError):
        convergence_experiment(sp, f, 3.0, [3, 2])
