import math
import warnings

import mpmath
import numpy as np
import pytest

from tmellin import functions as fn
from tmellin import transform as tr
from tmellin.errors import DivergenceError, DomainError, TruncationWarning, UnsupportedError
from tmellin.quadrature import adaptive_transform, monte_carlo_oracle


def _mp_transform(f_mp, s, points=(0, 1, 10, 60, mpmath.inf)):
    with mpmath.workdps(30):
        s = mpmath.mpf(s)
        val = mpmath.quad(lambda x: f_mp(x) * x ** s * mpmath.exp(-x), list(points)) / mpmath.gamma(s + 1)
    return float(val)


@pytest.mark.parametrize("n", range(0, 7))
@pytest.mark.parametrize("s", [0.0, 1.0, 3.5])
def test_monomials_are_rising_factorials(n, s):
    tv = tr.twisted_mellin(fn.Power(n), s)
    assert tv.method == "closed_form"
    np.testing.assert_allclose(tv.value, math.prod(s + k for k in range(1, n + 1)), rtol=1e-14)


def test_todd_at_zero_and_constant():
    np.testing.assert_allclose(tr.twisted_mellin(fn.Todd(), 0.0).value, math.pi ** 2 / 6, rtol=1e-15)
    assert tr.twisted_mellin(fn.Const(1.0), 7.3).value == 1.0


def test_geom_pole():
    with pytest.raises(DivergenceError):
        tr.twisted_mellin(fn.Geom(), 0.0)
    with pytest.raises(DivergenceError):
        tr.closed_form(fn.Geom(), 0.0)


def test_closed_form_examples():
    np.testing.assert_allclose(tr.closed_form(fn.Sine(1.0), 1.0), 0.5, rtol=1e-15)
    np.testing.assert_allclose(tr.closed_form(fn.Power(0.5), 0.0), 0.8862269255, atol=1e-10)
    np.testing.assert_allclose(tr.closed_form(fn.LogPower(1), 0.0), -0.5772156649015329, atol=1e-14)
    assert tr.closed_form(fn.Scaled(fn.Todd(), 2.0), 1.0) is None
    assert tr.closed_form(fn.Damped(fn.Sine(1.0), 1.0), 1.0) is None
    with pytest.raises(UnsupportedError):
        tr.closed_form(fn.LogPower(4), 1.0)
    with pytest.raises(DomainError):
        tr.closed_form(fn.Todd(), -1.0)


@pytest.mark.parametrize("a", [0.3, 1.0, 2.0, 5.0])
@pytest.mark.parametrize("s", [0.0, 0.5, 2.5, 7.0])
def test_trig_closed_form_against_mpmath(a, s):
    pts = [0] + [k * math.pi / a for k in range(1, 40)] + [mpmath.inf]
    np.testing.assert_allclose(fn.Sine(a).closed_form(s), _mp_transform(lambda x: mpmath.sin(a * x), s, pts),
                               rtol=1e-10, atol=1e-13)
    np.testing.assert_allclose(fn.Cosine(a).closed_form(s), _mp_transform(lambda x: mpmath.cos(a * x), s, pts),
                               rtol=1e-10, atol=1e-13)


def test_uncorrected_trig_display_disagrees():
    # (1+a^2)^(-s) sin(s arctan a) misses the shift s -> s+1
    a, s = 2.0, 1.5
    naive = (1 + a * a) ** (-s) * math.sin(s * math.atan(a))
    truth = adaptive_transform(fn.Sine(a), s, tol=1e-12).value
    assert abs(naive - truth) > 1e-2
    np.testing.assert_allclose(fn.Sine(a).closed_form(s), truth, atol=1e-12)


@pytest.mark.parametrize("f,f_mp", [
    (fn.Todd(), lambda x: x / (1 - mpmath.exp(-x))),
    (fn.LogPower(2), lambda x: mpmath.log(x) ** 2),
    (fn.ProductPower(fn.ExpDecay(0.5), 1.5), lambda x: x ** 1.5 * mpmath.exp(-x / 2)),
    (fn.Gaussian(), lambda x: mpmath.exp(-x * x / 2)),
])
@pytest.mark.parametrize("s", [0.5, 2.5])
def test_transform_against_mpmath(f, f_mp, s):
    np.testing.assert_allclose(tr.twisted_mellin(f, s).value, _mp_transform(f_mp, s), rtol=1e-11)


@pytest.mark.parametrize("s", [0.5, 1.0, 2.5, 10.0])
def test_catalog_vs_quadrature(s):
    for name, f in fn.catalog().items():
        budget = 1e-7 if name in ("geom", "todd") else 1e-9
        q = tr.quadrature_value(f, s, tol=1e-12)
        assert abs(q.value - f.closed_form(s)) <= budget, name


def test_alpha_twisted():
    f = fn.RationalDecay()
    assert tr.alpha_twisted(f, 2.0, 1.0) == tr.twisted_mellin(f, 2.0)
    for alpha in (0.5, 2.0, 3.0):
        tv = tr.alpha_twisted(fn.Poly((0.0, 1.0)), 2.0, alpha)
        np.testing.assert_allclose(tv.value, 3.0 / alpha, rtol=1e-12)
    for c, alpha in ((2.0, 3.0), (0.5, 1.5)):
        lhs = tr.alpha_twisted(fn.Scaled(f, c), 1.5, alpha).value
        rhs = tr.alpha_twisted(f, 1.5, alpha / c).value
        assert abs(lhs - rhs) <= 1e-10
    # direct definition with the e^(-alpha x) weight
    with mpmath.workdps(30):
        num = mpmath.quad(lambda x: x ** 1.5 * mpmath.exp(-2 * x) / (1 + x), [0, 1, mpmath.inf])
        den = mpmath.quad(lambda x: x ** 1.5 * mpmath.exp(-2 * x), [0, 1, mpmath.inf])
    np.testing.assert_allclose(tr.alpha_twisted(f, 1.5, 2.0).value, float(num / den), rtol=1e-11)
    with pytest.raises(DomainError):
        tr.alpha_twisted(f, 1.0, 0.0)


def test_identity_examples():
    rep = tr.check_identity("intertwining", fn.Power(3), 4.0)
    np.testing.assert_allclose([rep.lhs, rep.rhs], [90.0, 90.0], rtol=1e-12)
    assert rep.passed
    rep = tr.check_identity("antiderivative_integer", fn.Const(1.0), 3.0)
    np.testing.assert_allclose([rep.lhs, rep.rhs], [4.0, 4.0], rtol=1e-12)
    rep = tr.check_identity("damping", fn.Const(1.0), 0.0, c=1.0)
    np.testing.assert_allclose([rep.lhs, rep.rhs], [0.5, 0.5], rtol=1e-12)


@pytest.mark.parametrize("tag", tr.IDENTITIES)
@pytest.mark.parametrize("f", [fn.Poly((1.0, 0.5, 2.0)), fn.ExpDecay(1.0), fn.Sine(0.7), fn.Cosine(1.3)])
def test_all_identities_hold(tag, f):
    s = 3.0 if tag in ("antiderivative_integer", "iterated_intertwining") else 3.4
    rep = tr.check_identity(tag, f, s, tol=1e-7, a=0.75, c=0.5, n=3)
    assert rep.passed, rep


def test_log_derivative_near_zero_uses_one_sided_stencil():
    rep = tr.check_identity("log_derivative", fn.ExpDecay(1.0), 0.0, tol=1e-7)
    assert rep.passed
    # d/ds 2^(-s-1) at 0 = -log(2)/2
    np.testing.assert_allclose(rep.lhs, -math.log(2) / 2, rtol=1e-8)


def test_identity_errors():
    with pytest.raises(DomainError):
        tr.check_identity("intertwining", fn.Todd(), 0.5)
    with pytest.raises(DomainError):
        tr.check_identity("antiderivative_integer", fn.Const(1.0), 2.5)
    with pytest.raises(DomainError):
        tr.check_identity("no_such_identity", fn.Todd(), 2.0)
    with pytest.raises(UnsupportedError):
        tr.check_identity("antiderivative_step", fn.Todd(), 2.0)


def test_linearity():
    f, g = fn.Gaussian(), fn.Todd()
    combo = tr.linear_combination(((1.5, f), (-0.25, g)))
    for s in (0.5, 4.0):
        want = 1.5 * adaptive_transform(f, s, tol=1e-12).value - 0.25 * adaptive_transform(g, s, tol=1e-12).value
        assert abs(adaptive_transform(combo, s, tol=1e-12).value - want) <= 1e-10


def test_schwartz_probe():
    rep = tr.schwartz_decay_probe(fn.Gaussian(), 3, [10, 20, 40, 80])
    assert rep.passed
    for s, v in zip(rep.s_grid[:2], rep.values[:2]):
        np.testing.assert_allclose(v, _mp_transform(lambda x: mpmath.exp(-x * x / 2), s, (0, 2, 5, 10, mpmath.inf)),
                                   rtol=1e-9)
    rep = tr.schwartz_decay_probe(fn.ExpDecay(1.0), 0, [0, 1, 2, 3])
    assert rep.passed
    np.testing.assert_allclose(rep.values, [0.5, 0.25, 0.125, 0.0625])
    rep = tr.schwartz_decay_probe(fn.Const(1.0), 0, [1, 2, 3])
    assert rep.bounded and rep.monotone_tail


def test_gaussian_far_tail_relative_accuracy():
    with mpmath.workdps(40):
        want = mpmath.quad(lambda x: x ** 80 * mpmath.exp(-x - x * x / 2), [0, 5, 9, 15, 30, mpmath.inf]) / mpmath.gamma(81)
    got = tr.schwartz_decay_probe(fn.Gaussian(), 0, [80]).values[0]
    np.testing.assert_allclose(got, float(want), rtol=1e-9)


def test_polynomial_growth_preserved():
    ratios = tr.growth_ratio(fn.Poly((0.0, 1.0, 0.0, 1.0)), [10.0, 1e2, 1e3, 1e4], 3.0)
    assert max(ratios) < 3.0 and min(ratios) > 0.99


@pytest.mark.parametrize("f,x,want,tol", [
    (fn.Poly((0.0, 1.0)), 1.0, 1.0, 1e-4),
    (fn.Poly((0.0, 0.0, 1.0)), 2.0, 4.0, 1e-3),
    (fn.ExpDecay(1.0), 1.0, math.exp(-1.0), 1e-3),
    (fn.Poly((0.0, 0.0, 1.0)), 0.5, 0.25, 1e-3),
    (fn.Power(1.5), 1.3, 1.3 ** 1.5, 1e-6),
])
def test_inversion_roundtrip(f, x, want, tol):
    assert abs(tr.invert(tr.complex_closed_form(f), x) - want) <= tol


def test_inversion_truncation_warning():
    with pytest.warns(TruncationWarning):
        tr.invert(tr.complex_closed_form(fn.Poly((0.0, 1.0))), 1.0, height=3.0, steps=200)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        tr.invert(tr.complex_closed_form(fn.Poly((0.0, 1.0))), 1.0)


def test_inversion_unsupported_and_domain():
    with pytest.raises(UnsupportedError):
        tr.complex_closed_form(fn.Todd())
    with pytest.raises(DomainError):
        tr.invert(tr.complex_closed_form(fn.Poly((1.0,))), -1.0)


def test_complex_closed_forms_against_mpmath():
    z = np.array([1.0 + 2.0j, 2.5 - 4.0j])
    got = tr.complex_closed_form(fn.Power(1.5))(z)
    want = [complex(mpmath.gamma(v + 2.5) / mpmath.gamma(v + 1)) for v in z]
    np.testing.assert_allclose(got, want, rtol=1e-10)
    got = tr.complex_closed_form(fn.ExpDecay(0.5))(z)
    np.testing.assert_allclose(got, [complex(mpmath.power(1.5, -(1 + v))) for v in z], rtol=1e-13)


@pytest.mark.parametrize("f", [fn.RationalDecay(), fn.Cosine(1.0), fn.Todd()])
def test_integer_s_matches_sampled_gamma_mean(f):
    mean, se = monte_carlo_oracle(f, 3.0, samples=200_000, seed=7)
    assert abs(mean - tr.twisted_mellin(f, 3.0).value) <= 5 * se
