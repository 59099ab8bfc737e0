import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import grid
from jsobolev.bundles import (FunctionBundle, exp_bundle, parse_bundle, polynomial_bundle,
                              power_bundle, sin_bundle)
from jsobolev.jacobi import derivative_factor, orthonormal_eval
from jsobolev.quadrature import gauss_jacobi_rule, lp_norm
from jsobolev.sobolev import (Expansion, SobolevParams, decomposed_partial_sum,
                              evaluate_expansion, evaluate_truncations, fourier_coefficient,
                              fourier_coefficients, partial_sum, q_bundle, q_eval,
                              q_sobolev_norm, s_factor, sobolev_inner, sobolev_norm)


def exact_s(alpha: int, beta: int, m: int, n: int) -> Fraction:
    """``s_{n,m}`` in rational arithmetic for integer parameters."""
    total, r = Fraction(0), Fraction(1)
    for k in range(m + 1):
        if k > n:
            break
        total += r
        j = n - k
        r *= j * (j + alpha + k + beta + k + 1)
    return total


def test_params_validation():
    with pytest.raises(ValueError):
        SobolevParams(0, 0, 0)
    with pytest.raises(ValueError):
        SobolevParams(-1.5, 0, 1)
    with pytest.raises(ValueError):
        SobolevParams(0, 0, 1.5)


@pytest.mark.parametrize("alpha,beta,m", [(0, 0, 1), (1, 2, 2), (3, 0, 3)])
def test_s_factor_rational_oracle(alpha, beta, m):
    sp = SobolevParams(alpha, beta, m)
    for n in (0, 1, 2, 5, 30, 200):
        assert s_factor(sp, n) == pytest.approx(float(exact_s(alpha, beta, m, n)), rel=1e-14)


def test_s_factor_small_values():
    sp = SobolevParams(0, 0, 1)
    assert s_factor(sp, 0) == 1.0
    assert s_factor(sp, 3) == 13.0  # 1 + 3*4


def test_q_eval_is_scaled_jacobi():
    sp = SobolevParams(0.5, 0.0, 2)
    x = grid()
    n = 9
    ref = orthonormal_eval((0.5, 0.0), n, x) / math.sqrt(s_factor(sp, n))
    np.testing.assert_allclose(q_eval(sp, n, 0, x), ref, rtol=1e-13, atol=1e-13)
    scale = math.sqrt(derivative_factor((0.5, 0.0), n, 2) / s_factor(sp, n))
    np.testing.assert_allclose(q_eval(sp, n, 2, x), scale * orthonormal_eval((2.5, 2.0), n - 2, x),
                               rtol=1e-13, atol=1e-12)
    assert q_eval(sp, 1, 2, 0.3) == 0.0


def test_constant_coefficient():
    sp = SobolevParams(0, 0, 1)
    one = polynomial_bundle([1.0])
    assert fourier_coefficient(sp, one, 0) == pytest.approx(math.sqrt(2), rel=1e-14)
    np.testing.assert_allclose(fourier_coefficients(sp, one, 6)[1:], 0, atol=1e-14)


def test_gram_small():
    sp = SobolevParams(1, 1, 2)
    gram = np.array([[sobolev_inner(sp, q_bundle(sp, i), q_bundle(sp, j)) for j in range(8)]
                     for i in range(8)])
    np.testing.assert_allclose(gram, np.eye(8), atol=1e-12)


def test_power_bundle_coefficients_against_gauss_jacobi_oracle():
    # <(1-x)^g, q_j> splits into integrals with weight (1-x)^{a+g} (1+x)^{b+k}
    alpha, beta, gamma = 0.0, 0.0, 0.7
    sp = SobolevParams(alpha, beta, 1)
    f = power_bundle(gamma)
    coeffs = fourier_coefficients(sp, f, 24)
    for j in (0, 1, 5, 24):
        ref = 0.0
        for k in range(min(j, 1) + 1):
            rule = gauss_jacobi_rule((alpha + gamma, beta + k), 40)
            deriv = math.prod(gamma - i for i in range(k)) * (-1) ** k
            ref += (math.sqrt(derivative_factor((alpha, beta), j, k) / s_factor(sp, j))
                    * deriv * rule.integrate(lambda x: orthonormal_eval((alpha + k, beta + k), j - k, x)))
        assert coeffs[j] == pytest.approx(ref, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_polynomial_reproduction(m):
    sp = SobolevParams(0.5, -0.25, m)
    f = polynomial_bundle([0.3, -1.0, 0.0, 2.0, 0.5])
    e = partial_sum(sp, f, 6)
    x = grid()
    for ell in range(m + 1):
        np.testing.assert_allclose(evaluate_expansion(e, ell, x), f.eval(ell, x), atol=1e-12)
    np.testing.assert_allclose(e.coeffs[5:], 0, atol=1e-13)


def test_basis_element_reproduction():
    sp = SobolevParams(0, 0, 1)
    c = fourier_coefficients(sp, q_bundle(sp, 7), 10)
    expected = np.zeros(11)
    expected[7] = 1
    np.testing.assert_allclose(c, expected, atol=1e-13)


def test_decomposition_sums_to_partial_sum():
    sp = SobolevParams(1, 0.5, 2)
    f = exp_bundle(0.7)
    total = sum(decomposed_partial_sum(sp, f, 20, k).coeffs for k in range(3))
    np.testing.assert_allclose(total, partial_sum(sp, f, 20).coeffs, atol=1e-13)
    # channel k vanishes below degree k
    assert np.all(decomposed_partial_sum(sp, f, 20, 2).coeffs[:2] == 0)
    with pytest.raises(ValueError):
        decomposed_partial_sum(sp, f, 20, 3)
    with pytest.raises(ValueError):
        decomposed_partial_sum(sp, f, 1, 2)


def test_clenshaw_matches_direct_sum():
    sp = SobolevParams(0.3, 1.1, 2)
    rng = np.random.default_rng(3)
    e = Expansion(sp, rng.normal(size=30))
    x = grid(57)
    for ell in range(3):
        direct = sum(c * q_eval(sp, j, ell, x) for j, c in enumerate(e.coeffs))
        np.testing.assert_allclose(evaluate_expansion(e, ell, x), direct,
                                   atol=1e-11 * np.abs(direct).max())
        trunc = evaluate_truncations(e, ell, x, [0, 5, 29])
        np.testing.assert_allclose(trunc[-1], direct, atol=1e-11 * np.abs(direct).max())
        partial = sum(c * q_eval(sp, j, ell, x) for j, c in enumerate(e.coeffs[:6]))
        np.testing.assert_allclose(trunc[1], partial, atol=1e-11 * max(1, np.abs(partial).max()))


def test_expansion_json_round_trip():
    sp = SobolevParams(0.5, 0.0, 1)
    e = partial_sum(sp, sin_bundle(2.0), 12)
    text = e.to_json()
    back = Expansion.from_json(text)
    assert back.params == sp
    assert np.array_equal(back.coeffs, e.coeffs)
    assert back.to_json() == text
    with pytest.raises(ValueError):
        Expansion(sp, np.array([1.0, np.nan])).to_json()


def test_sobolev_norm_closed_form():
    # f = x with m = 1 and Legendre weights: ||x||_2^2 = 2/3, ||1||_{L^2((1-x)(1+x))}^2 = 4/3
    sp = SobolevParams(0, 0, 1)
    f = polynomial_bundle([0.0, 1.0])
    assert sobolev_norm(sp, f, 2) == pytest.approx(math.sqrt(2 / 3 + 4 / 3), rel=1e-13)
    # p = 1: int |x| = 1, int (1-x^2) = 4/3
    assert sobolev_norm(sp, f, 1) == pytest.approx(1 + 4 / 3, rel=1e-6)
    with pytest.raises(ValueError):
        sobolev_norm(sp, f, math.inf)


def test_q_sobolev_norm_matches_generic_norm():
    sp = SobolevParams(0.5, 0.0, 2)
    assert q_sobolev_norm(sp, 9, 2) == pytest.approx(1.0, rel=1e-12)
    ref = sobolev_norm(sp, q_bundle(sp, 9), 3, resolution=400)
    assert q_sobolev_norm(sp, 9, 3) == pytest.approx(ref, rel=1e-8)


def test_bundles():
    f = parse_bundle("poly:1,2,3")
    assert f.eval(1, 0.5) == pytest.approx(5.0)
    assert f.eval(3, 0.5) == 0.0
    assert parse_bundle("expx").eval(2, 0.0) == 1.0
    assert parse_bundle("sin:3").eval(1, 0.0) == pytest.approx(3.0)
    g = parse_bundle("onemx:0.7")
    assert not g.smooth and g.eval(1, 0.0) == pytest.approx(-0.7)
    assert power_bundle(2).smooth and power_bundle(2).degree == 2
    sp = SobolevParams(0, 0, 1)
    assert parse_bundle("q3", sp).eval(0, 0.2) == pytest.approx(q_eval(sp, 3, 0, 0.2))
    for bad in ("q3", "cos:1", "onemx:-1", ""):
        with pytest.raises(ValueError):
            parse_bundle(bad)
    with pytest.raises(ValueError):
        power_bundle(0.5, max_order=1).eval(2, 0.0)


def test_missing_derivatives_rejected():
    sp = SobolevParams(0, 0, 3)
    short = FunctionBundle(lambda k, x: np.ones_like(x), max_order=2)
    with pytest.raises(ValueError):
        partial_sum(sp, short, 5)


def test_singular_bundle_error_decreases():
    sp = SobolevParams(0, 0, 1)
    f = power_bundle(1.7)
    errs = []
    for n in (8, 32):
        e = partial_sum(sp, f, n)
        err = lp_norm(lambda x: evaluate_expansion(e, 0, x) - f.eval(0, x), 2, (0, 0), 256,
                      grading=24)
        errs.append(err)
    assert errs[1] < errs[0] / 4


@settings(max_examples=20, deadline=None)
@given(st.floats(-0.9, 2.0), st.floats(-0.9, 2.0), st.integers(1, 3),
       st.lists(st.floats(-2, 2), min_size=1, max_size=6))
def test_projection_is_idempotent(alpha, beta, m, coeffs):
    sp = SobolevParams(alpha, beta, m)
    e = partial_sum(sp, polynomial_bundle(coeffs), 8)
    again = partial_sum(sp, FunctionBundle(lambda k, x: evaluate_expansion(e, k, x), None,
                                           "S", 8, True), 8)
    np.testing.assert_allclose(again.coeffs, e.coeffs, atol=1e-10 * max(1, np.abs(e.coeffs).max()))


@settings(max_examples=20, deadline=None)
@given(st.floats(-0.9, 2.0), st.floats(-0.9, 2.0), st.integers(1, 3), st.integers(0, 12),
       st.integers(0, 12))
def test_basis_orthonormality_property(alpha, beta, m, i, j):
    sp = SobolevParams(alpha, beta, m)
    val = sobolev_inner(sp, q_bundle(sp, i), q_bundle(sp, j))
    assert val == pytest.approx(1.0 if i == j else 0.0, abs=1e-11)
