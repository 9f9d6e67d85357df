import math

import mpmath
import numpy as np
import pytest

from tmellin import quadrature as q
from tmellin.errors import DivergenceError, DomainError
from tmellin.functions import ExpDecay, Gaussian, Geom, LogPower, Poly, Power, RationalDecay, Todd
from tmellin.specfun import gamma_ratio, ln_gamma


def test_jacobi_matrix_entries():
    d, e = q.jacobi_matrix(0.5, 4)
    np.testing.assert_allclose(d, [1.5, 3.5, 5.5, 7.5])
    np.testing.assert_allclose(e[:3], np.sqrt([1 * 1.5, 2 * 2.5, 3 * 3.5]))


def test_two_point_rule():
    rule = q.build_rule(0.0, 2)
    r2 = math.sqrt(2.0)
    np.testing.assert_allclose(rule.nodes, [2 - r2, 2 + r2], rtol=1e-15)
    np.testing.assert_allclose(rule.weights, [(2 + r2) / 4, (2 - r2) / 4], rtol=1e-14)


def test_matches_numpy_laguerre_rule():
    x, w = np.polynomial.laguerre.laggauss(40)
    rule = q.build_rule(0.0, 40)
    np.testing.assert_allclose(rule.nodes, x, rtol=1e-12)
    big = w > 1e-200
    np.testing.assert_allclose(rule.weights[big], w[big], rtol=1e-9)


@pytest.mark.parametrize("s", [0.0, 0.5, 3.7, 20.0])
@pytest.mark.parametrize("n", [1, 5, 20, 64])
def test_rule_moments_exact(s, n):
    rule = q.build_rule(s, n)
    assert np.all(rule.weights > 0)
    np.testing.assert_allclose(rule.weights.sum(), 1.0, rtol=1e-13)
    logw = np.log(rule.weights)
    for k in range(2 * n):
        terms = logw + k * np.log(rule.nodes)
        top = terms.max()
        log_moment = top + math.log(np.exp(terms - top).sum())
        want = ln_gamma(s + k + 1.0) - ln_gamma(s + 1.0)
        np.testing.assert_allclose(log_moment, want, atol=1e-11 * max(1.0, abs(want)))


def test_rule_nodes_against_mpmath_laguerre_roots():
    s, n = 1.5, 12
    rule = q.build_rule(s, n)
    for x in rule.nodes:
        # nodes are zeros of L_n^(s)
        val = mpmath.laguerre(n, s, x)
        scale = max(abs(mpmath.laguerre(n, s, x * (1 + 1e-6))), 1e-300)
        assert abs(val) <= 1e-6 * scale


def test_large_rule_tail_underflow():
    rule = q.build_rule(0.0, 512)
    assert np.all(np.diff(rule.nodes) > 0)
    np.testing.assert_allclose(rule.weights.sum(), 1.0, rtol=1e-13)
    assert np.all(rule.weights[:300] > 0)
    assert np.all(rule.weights >= 0)


def test_rule_cache_and_immutability():
    a = q.build_rule(2.25, 30)
    assert q.build_rule(2.25, 30) is a
    with pytest.raises(ValueError):
        a.nodes[0] = 1.0
    with pytest.raises(Exception):
        a.n = 3


@pytest.mark.parametrize("s,n", [(-1.0, 4), (-2.0, 4), (0.0, 0), (0.0, 513), (0.0, 2.5), (math.nan, 3)])
def test_build_rule_domain(s, n):
    with pytest.raises(DomainError):
        q.build_rule(s, n)


def test_integrate_scalar_function():
    rule = q.build_rule(1.0, 8)
    assert q.integrate(rule, lambda x: 1.0) == pytest.approx(1.0, rel=1e-14)


def test_adaptive_exp_decay():
    tv = q.adaptive_transform(ExpDecay(1.0), 2.0, tol=1e-12)
    assert tv.converged and tv.method == "quadrature"
    np.testing.assert_allclose(tv.value, 2.0 ** -3, rtol=1e-13)
    assert tv.error_estimate <= 1e-12 * (1 + tv.value)


@pytest.mark.parametrize("s", [0.0, 0.5, 3.0, 12.0])
def test_adaptive_rational_decay_vs_mpmath(s):
    want = mpmath.quad(lambda x: x ** s * mpmath.exp(-x) / (1 + x), [0, 1, 10, mpmath.inf]) / mpmath.gamma(s + 1)
    np.testing.assert_allclose(q.adaptive_transform(RationalDecay(), s, tol=1e-12).value, float(want), rtol=1e-11)


@pytest.mark.parametrize("s", [0.0, 1.0, 4.0])
def test_adaptive_gaussian_vs_mpmath(s):
    want = mpmath.quad(lambda x: x ** s * mpmath.exp(-x - x * x / 2), [0, 2, mpmath.inf]) / mpmath.gamma(s + 1)
    np.testing.assert_allclose(q.adaptive_transform(Gaussian(), s, tol=1e-12).value, float(want), rtol=1e-11)


def test_adaptive_non_convergence_is_reported():
    tv = q.adaptive_transform(RationalDecay(), 0.5, tol=1e-13, max_nodes=32)
    assert not tv.converged
    assert tv.nodes_used == 32
    assert tv.error_estimate > 1e-13


def test_power_singularity_moved_into_weight():
    tv = q.adaptive_transform(Power(-0.5), 0.25, tol=1e-12)
    np.testing.assert_allclose(tv.value, gamma_ratio(0.25, -0.5), rtol=1e-13)
    tv = q.adaptive_transform(Geom(), 0.5, tol=1e-12)
    np.testing.assert_allclose(tv.value, float(mpmath.zeta(1.5)), rtol=1e-12)


def test_divergence_and_domain():
    with pytest.raises(DivergenceError):
        q.adaptive_transform(Geom(), 0.0)
    with pytest.raises(DivergenceError):
        q.adaptive_transform(Power(-1.5), 0.2)
    with pytest.raises(DomainError):
        q.adaptive_transform(Todd(), -0.1)
    with pytest.raises(DomainError):
        q.adaptive_transform(Todd(), 1.0, tol=1e-14)


@pytest.mark.parametrize("s", [0.0, 0.5, 2.0])
def test_log_grid_against_digamma(s):
    tv = q.adaptive_transform(LogPower(1), s, tol=1e-12)
    np.testing.assert_allclose(tv.value, float(mpmath.digamma(s + 1)), rtol=1e-11, atol=1e-13)


def test_monte_carlo_oracle():
    mean, se = q.monte_carlo_oracle(Poly((0.0, 1.0)), 3.0, samples=50_000, seed=11)
    assert abs(mean - 4.0) <= 5 * se
    assert q.monte_carlo_oracle(Poly((0.0, 1.0)), 3.0, samples=5000, seed=3) == \
        q.monte_carlo_oracle(Poly((0.0, 1.0)), 3.0, samples=5000, seed=3)
    with pytest.raises(DomainError):
        q.monte_carlo_oracle(Poly((1.0,)), 1.0, samples=10)


def test_transform_value_validation():
    with pytest.raises(ValueError):
        q.TransformValue(1.0, 0.0, 1, "guess")
    with pytest.raises(ValueError):
        q.TransformValue(1.0, -1.0, 1, "quadrature")
    with pytest.raises(ValueError):
        q.TransformValue(1.0, 0.0, 0, "quadrature")
