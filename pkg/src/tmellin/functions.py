"""Catalog of functions the transform knows about, plus combinators.

Every :class:`FunctionSpec` evaluates vectorially on positive reals,
supplies derivatives of any order analytically, declares a polynomial
growth degree, and may carry a closed-form transform. Two attributes steer
the quadrature: ``endpoint_power`` (f = x**p * regular(x) near the origin)
and ``log_singular`` (the integrand needs the log-variable grid).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import specfun
from .errors import DivergenceError, DomainError, UnsupportedError

FD_MAX_ORDER = 4


def _falling(a, j):
    out = 1.0
    for t in range(j):
        out *= a - t
    return out


def _is_nonneg_int(a):
    return float(a).is_integer() and a >= 0


class FunctionSpec:
    """Base class; subclasses are frozen dataclasses."""

    kind = "abstract"
    endpoint_power = 0.0
    log_singular = False
    # None means analytic derivatives of every order
    max_derivative: int | None = None

    @property
    def growth_degree(self) -> float:
        raise NotImplementedError

    def __call__(self, x):
        return self.derivative(0, x)

    def derivative(self, r: int, x):
        raise NotImplementedError

    def regular(self, x):
        """x**(-endpoint_power) * f(x)."""
        x = np.asarray(x, dtype=float)
        return x ** (-self.endpoint_power) * self(x)

    def antiderivative(self) -> "FunctionSpec":
        """The function x -> integral_0^x f(t) dt."""
        raise UnsupportedError(f"no analytic antiderivative for {self.describe()}")

    @property
    def has_closed_form(self) -> bool:
        return False

    def closed_form(self, s: float):
        """Closed-form transform value at s, or None when there is none."""
        return None

    def complex_transform(self):
        """Callable s -> transform at complex s, or None."""
        return None

    def exact_value(self, x):
        """Pointwise value used as ground truth by inversion round-trips."""
        return float(self(np.array([x]))[0])

    def describe(self) -> str:
        return self.kind

    def __str__(self):
        return self.describe()


def _fmt(v):
    return repr(float(v)) if not float(v).is_integer() else str(int(v))


# --- catalog -----------------------------------------------------------------


@dataclass(frozen=True)
class Power(FunctionSpec):
    """x**a."""

    a: float
    kind = "power"

    @property
    def endpoint_power(self):
        return 0.0 if _is_nonneg_int(self.a) else float(self.a)

    @property
    def growth_degree(self):
        return float(self.a)

    def derivative(self, r, x):
        x = np.asarray(x, dtype=float)
        if _is_nonneg_int(self.a) and r > self.a:
            return np.zeros_like(x)
        return _falling(self.a, r) * x ** (self.a - r)

    def regular(self, x):
        if self.endpoint_power == 0.0:
            return self(x)
        return np.ones_like(np.asarray(x, dtype=float))

    def antiderivative(self):
        if self.a <= -1:
            raise DivergenceError("integral_0^x t**a dt diverges for a <= -1")
        return Combination(((1.0 / (self.a + 1), Power(self.a + 1)),))

    @property
    def has_closed_form(self):
        return True

    def closed_form(self, s):
        return specfun.gamma_ratio(s, self.a)

    def complex_transform(self):
        a = self.a

        def mf(s):
            s = np.asarray(s, dtype=complex)
            return np.exp(specfun.complex_ln_gamma(s + a + 1) - specfun.complex_ln_gamma(s + 1))
        return mf

    def describe(self):
        return f"power({_fmt(self.a)})"


@dataclass(frozen=True)
class Poly(FunctionSpec):
    """sum_k coeffs[k] x**k."""

    coeffs: tuple
    kind = "monomial_poly"

    def __post_init__(self):
        coeffs = [float(c) for c in self.coeffs]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs) or (0.0,))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def growth_degree(self):
        return float(self.degree)

    def _deriv_coeffs(self, r):
        return np.polynomial.polynomial.polyder(np.array(self.coeffs), r) if r else np.array(self.coeffs)

    def derivative(self, r, x):
        x = np.asarray(x, dtype=float)
        if r > self.degree:
            return np.zeros_like(x)
        return np.polynomial.polynomial.polyval(x, self._deriv_coeffs(r))

    def antiderivative(self):
        return Poly((0.0,) + tuple(c / (k + 1) for k, c in enumerate(self.coeffs)))

    @property
    def has_closed_form(self):
        return True

    def closed_form(self, s):
        # sum_k c_k (s+1)(s+2)...(s+k)
        total = 0.0
        rising = 1.0
        for k, c in enumerate(self.coeffs):
            if k:
                rising *= s + k
            total += c * rising
        return total

    def complex_transform(self):
        coeffs = self.coeffs

        def mf(s):
            s = np.asarray(s, dtype=complex)
            total = np.zeros_like(s)
            rising = np.ones_like(s)
            for k, c in enumerate(coeffs):
                if k:
                    rising = rising * (s + k)
                total = total + c * rising
            return total
        return mf

    def describe(self):
        return "poly(" + ",".join(_fmt(c) for c in self.coeffs) + ")"


def Const(c: float) -> Poly:
    return Poly((float(c),))


@dataclass(frozen=True)
class ExpDecay(FunctionSpec):
    """exp(-c x), c > 0; equivalently a**-x with log a = c."""

    c: float
    kind = "exp_decay"

    def __post_init__(self):
        if not self.c > 0:
            raise DomainError("exp_decay needs c > 0")

    @property
    def growth_degree(self):
        return 0.0

    def derivative(self, r, x):
        x = np.asarray(x, dtype=float)
        return (-self.c) ** r * np.exp(-self.c * x)

    def antiderivative(self):
        return Combination(((1.0 / self.c, Const(1.0)), (-1.0 / self.c, self)))

    @property
    def has_closed_form(self):
        return True

    def closed_form(self, s):
        return (self.c + 1.0) ** (-1.0 - s)

    def complex_transform(self):
        c = self.c

        def mf(s):
            return np.exp(-(1.0 + np.asarray(s, dtype=complex)) * math.log(c + 1.0))
        return mf

    def describe(self):
        return f"exp_decay({_fmt(self.c)})"


@lru_cache(maxsize=None)
def _geom_poly(r):
    # d^r/dx^r of u = 1/(e^x - 1) as an integer polynomial in u; u' = -u - u**2
    coeffs = [0, 1]
    for _ in range(r):
        der = [k * coeffs[k] for k in range(1, len(coeffs))]
        out = [0] * (len(der) + 2)
        for k, c in enumerate(der):
            out[k + 1] -= c
            out[k + 2] -= c
        coeffs = out
    return tuple(coeffs)


def _geom_derivative(r, x):
    with np.errstate(over="ignore"):
        u = 1.0 / np.expm1(x)
    if r == 0:
        return 1.0 + u
    return np.polynomial.polynomial.polyval(u, np.array(_geom_poly(r), dtype=float))


@dataclass(frozen=True)
class Geom(FunctionSpec):
    """1 / (1 - exp(-x))."""

    kind = "geom"
    endpoint_power = -1.0

    @property
    def growth_degree(self):
        return 0.0

    def derivative(self, r, x):
        return _geom_derivative(r, np.asarray(x, dtype=float))

    def regular(self, x):
        return Todd()(x)

    @property
    def has_closed_form(self):
        return True

    def closed_form(self, s):
        if s <= 0:
            raise DivergenceError("the transform of 1/(1-exp(-x)) has a pole at s = 0")
        return specfun.zeta(s + 1.0)

    def describe(self):
        return "geom"


TODD_CAUCHY_LIMIT = 10.0
CAUCHY_POINTS = 256


def _todd_complex(z):
    with np.errstate(all="ignore"):
        return z / -np.expm1(-z)


def _todd_cauchy(r, x):
    # r!/(2 pi i) times the contour integral on a circle at 0.85 of the distance
    # to the nearest poles +-2 pi i; avoids the cancellation of the Leibniz form
    radius = 0.85 * np.sqrt(x * x + 4.0 * math.pi ** 2)
    theta = 2.0 * math.pi * np.arange(CAUCHY_POINTS) / CAUCHY_POINTS
    ring = np.exp(1j * theta)
    z = x[:, None] + radius[:, None] * ring[None, :]
    vals = _todd_complex(z) * ring[None, :] ** (-r)
    return math.factorial(r) * vals.mean(axis=1).real / radius ** r


@dataclass(frozen=True)
class Todd(FunctionSpec):
    """x / (1 - exp(-x))."""

    kind = "todd"

    @property
    def growth_degree(self):
        return 1.0

    def derivative(self, r, x):
        x = np.asarray(x, dtype=float)
        if r == 0:
            return x / -np.expm1(-x)
        with np.errstate(all="ignore"):
            out = x * _geom_derivative(r, x) + r * _geom_derivative(r - 1, x)
        small = np.atleast_1d(x) <= TODD_CAUCHY_LIMIT
        if np.any(small):
            out = np.array(out, dtype=float, ndmin=1)
            out[small] = _todd_cauchy(r, np.atleast_1d(x)[small])
            out = out.reshape(x.shape)
        return out

    @property
    def has_closed_form(self):
        return True

    def closed_form(self, s):
        return (s + 1.0) * specfun.zeta(s + 2.0)

    def describe(self):
        return "todd"


@lru_cache(maxsize=None)
def _log_power_polys(n, r):
    # D^r (log x)^n = x^-r * Q_r(log x); Q_{k+1} = Q_k' - k Q_k
    q = [0] * n + [1]
    for k in range(r):
        der = [j * q[j] for j in range(1, len(q))] + [0]
        q = [der[j] - k * q[j] for j in range(len(q))]
    return tuple(q)


@dataclass(frozen=True)
class LogPower(FunctionSpec):
    """(log x)**n."""

    n: int
    kind = "log_power"
    log_singular = True

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise DomainError("log_power needs a non-negative integer exponent")
        object.__setattr__(self, "n", int(self.n))

    @property
    def log_singular(self):
        return self.n > 0

    @property
    def growth_degree(self):
        return 0.5 if self.n else 0.0

    def derivative(self, r, x):
        x = np.asarray(x, dtype=float)
        q = np.array(_log_power_polys(self.n, r), dtype=float)
        return x ** (-r) * np.polynomial.polynomial.polyval(np.log(x), q)

    @property
    def has_closed_form(self):
        return self.n <= 3

    def closed_form(self, s):
        if self.n > 3:
            raise UnsupportedError("closed form for (log x)**n is only tabulated for n <= 3")
        return specfun.gamma_derivative_ratio(self.n, s + 1.0)

    def describe(self):
        return f"log_power({self.n})"


@dataclass(frozen=True)
class Sine(FunctionSpec):
    """sin(a x).

    M f(s) = (1+a**2)**(-(s+1)/2) sin((s+1) arctan a). The variant
    (1+a**2)**(-s) sin(s arctan a) that is sometimes quoted has the wrong
    exponent and phase; at a = 1 it disagrees with 2**(-(s+1)/2) sin((s+1) pi/4).
    """

    a: float = 1.0
    kind = "sine"

    @property
    def growth_degree(self):
        return 0.0

    def derivative(self, r, x):
        x = np.asarray(x, dtype=float)
        return self.a ** r * np.sin(self.a * x + r * math.pi / 2)

    def antiderivative(self):
        if self.a == 0:
            return Const(0.0)
        return Combination(((1.0 / self.a, Const(1.0)), (-1.0 / self.a, Cosine(self.a))))

    @property
    def has_closed_form(self):
        return True

    def closed_form(self, s):
        # M[exp(i a x)](s) = (1 - i a)**-(s+1)
        return (1.0 + self.a ** 2) ** (-(s + 1.0) / 2) * math.sin((s + 1.0) * math.atan(self.a))

    def describe(self):
        return f"sin({_fmt(self.a)})"


@dataclass(frozen=True)
class Cosine(FunctionSpec):
    """cos(a x)."""

    a: float = 1.0
    kind = "cosine"

    @property
    def growth_degree(self):
        return 0.0

    def derivative(self, r, x):
        x = np.asarray(x, dtype=float)
        return self.a ** r * np.cos(self.a * x + r * math.pi / 2)

    def antiderivative(self):
        if self.a == 0:
            return Poly((0.0, 1.0))
        return Combination(((1.0 / self.a, Sine(self.a)),))

    @property
    def has_closed_form(self):
        return True

    def closed_form(self, s):
        return (1.0 + self.a ** 2) ** (-(s + 1.0) / 2) * math.cos((s + 1.0) * math.atan(self.a))

    def describe(self):
        return f"cos({_fmt(self.a)})"


@dataclass(frozen=True)
class RationalDecay(FunctionSpec):
    """1 / (1 + x); a symbol of degree -1."""

    kind = "rational_decay"

    @property
    def growth_degree(self):
        return -1.0

    def derivative(self, r, x):
        x = np.asarray(x, dtype=float)
        return (-1.0) ** r * math.factorial(r) / (1.0 + x) ** (r + 1)

    def describe(self):
        return "rational_decay"


@lru_cache(maxsize=None)
def _hermite_e(r):
    # probabilists' Hermite: He_{k+1} = x He_k - k He_{k-1}
    prev, cur = (1,), (0, 1)
    if r == 0:
        return prev
    for k in range(1, r):
        nxt = [0] * (len(cur) + 1)
        for j, c in enumerate(cur):
            nxt[j + 1] += c
        for j, c in enumerate(prev):
            nxt[j] -= k * c
        prev, cur = cur, tuple(nxt)
    return cur


@dataclass(frozen=True)
class Gaussian(FunctionSpec):
    """exp(-x**2 / 2)."""

    kind = "gaussian"

    @property
    def growth_degree(self):
        return 0.0

    def derivative(self, r, x):
        x = np.asarray(x, dtype=float)
        he = np.array(_hermite_e(r), dtype=float)
        return (-1.0) ** r * np.polynomial.polynomial.polyval(x, he) * np.exp(-0.5 * x * x)

    def describe(self):
        return "gaussian"


# --- combinators -------------------------------------------------------------


@dataclass(frozen=True)
class Scaled(FunctionSpec):
    """x -> inner(k x)."""

    inner: FunctionSpec
    k: float
    kind = "scaled"

    def __post_init__(self):
        if not self.k > 0:
            raise DomainError("scaled needs a positive dilation")

    @property
    def endpoint_power(self):
        return self.inner.endpoint_power

    @property
    def log_singular(self):
        return self.inner.log_singular

    @property
    def max_derivative(self):
        return self.inner.max_derivative

    @property
    def growth_degree(self):
        return self.inner.growth_degree

    def derivative(self, r, x):
        x = np.asarray(x, dtype=float)
        return self.k ** r * self.inner.derivative(r, self.k * x)

    def regular(self, x):
        x = np.asarray(x, dtype=float)
        return self.k ** self.endpoint_power * self.inner.regular(self.k * x)

    def antiderivative(self):
        return Combination(((1.0 / self.k, Scaled(self.inner.antiderivative(), self.k)),))

    def describe(self):
        return f"scaled({self.inner.describe()},{_fmt(self.k)})"


@dataclass(frozen=True)
class ProductPower(FunctionSpec):
    """x -> x**a * inner(x)."""

    inner: FunctionSpec
    a: float
    kind = "product_power"

    @property
    def endpoint_power(self):
        if self.inner.endpoint_power == 0.0 and _is_nonneg_int(self.a):
            return 0.0
        return self.inner.endpoint_power + self.a

    @property
    def log_singular(self):
        return self.inner.log_singular

    @property
    def max_derivative(self):
        return self.inner.max_derivative

    @property
    def growth_degree(self):
        return self.inner.growth_degree + self.a

    def derivative(self, r, x):
        x = np.asarray(x, dtype=float)
        total = np.zeros_like(x)
        for j in range(r + 1):
            fj = _falling(self.a, j)
            if fj == 0.0:
                break
            total = total + math.comb(r, j) * fj * x ** (self.a - j) * self.inner.derivative(r - j, x)
        return total

    def regular(self, x):
        if self.endpoint_power == 0.0:
            return self(x)
        return self.inner.regular(x)

    @property
    def has_closed_form(self):
        return isinstance(self.inner, ExpDecay)

    def closed_form(self, s):
        if not isinstance(self.inner, ExpDecay):
            return None
        # x**b a**-x with log a = c
        c = self.inner.c
        return (c + 1.0) ** (-1.0 - self.a - s) * specfun.gamma_ratio(s, self.a)

    def describe(self):
        return f"xpow({self.inner.describe()},{_fmt(self.a)})"


@dataclass(frozen=True)
class Damped(FunctionSpec):
    """x -> exp(-c x) * inner(x)."""

    inner: FunctionSpec
    c: float
    kind = "damped"

    def __post_init__(self):
        if not self.c > 0:
            raise DomainError("damped needs c > 0")

    @property
    def endpoint_power(self):
        return self.inner.endpoint_power

    @property
    def log_singular(self):
        return self.inner.log_singular

    @property
    def max_derivative(self):
        return self.inner.max_derivative

    @property
    def growth_degree(self):
        return 0.0

    def derivative(self, r, x):
        x = np.asarray(x, dtype=float)
        damp = np.exp(-self.c * x)
        total = np.zeros_like(x)
        for j in range(r + 1):
            total = total + math.comb(r, j) * (-self.c) ** j * self.inner.derivative(r - j, x)
        return damp * total

    def regular(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-self.c * x) * self.inner.regular(x)

    def describe(self):
        return f"damped({self.inner.describe()},{_fmt(self.c)})"


@dataclass(frozen=True)
class Derivative(FunctionSpec):
    """x -> inner^(n)(x)."""

    inner: FunctionSpec
    n: int
    kind = "derivative"

    @property
    def endpoint_power(self):
        p = self.inner.endpoint_power
        return 0.0 if p == 0.0 else p - self.n

    @property
    def log_singular(self):
        return self.inner.log_singular

    @property
    def max_derivative(self):
        m = self.inner.max_derivative
        return None if m is None else max(m - self.n, 0)

    @property
    def growth_degree(self):
        return self.inner.growth_degree - self.n

    def derivative(self, r, x):
        return self.inner.derivative(self.n + r, x)

    def describe(self):
        return f"d{self.n}({self.inner.describe()})"


@dataclass(frozen=True)
class LogTimes(FunctionSpec):
    """x -> inner(x) * log x."""

    inner: FunctionSpec
    kind = "log_times"
    log_singular = True

    @property
    def endpoint_power(self):
        return self.inner.endpoint_power

    @property
    def max_derivative(self):
        return self.inner.max_derivative

    @property
    def growth_degree(self):
        return self.inner.growth_degree + 0.5

    def derivative(self, r, x):
        x = np.asarray(x, dtype=float)
        total = np.log(x) * self.inner.derivative(r, x)
        for j in range(1, r + 1):
            dlog = (-1.0) ** (j - 1) * math.factorial(j - 1) * x ** (-j)
            total = total + math.comb(r, j) * dlog * self.inner.derivative(r - j, x)
        return total

    def describe(self):
        return f"logtimes({self.inner.describe()})"


@dataclass(frozen=True)
class Combination(FunctionSpec):
    """Finite linear combination sum coef_i * f_i."""

    terms: tuple
    kind = "combination"

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((float(c), f) for c, f in self.terms))

    @property
    def _powers(self):
        return {f.endpoint_power for _, f in self.terms}

    @property
    def endpoint_power(self):
        return min(self._powers) if self.terms else 0.0

    @property
    def log_singular(self):
        return any(f.log_singular for _, f in self.terms) or len(self._powers) > 1

    @property
    def max_derivative(self):
        limits = [f.max_derivative for _, f in self.terms if f.max_derivative is not None]
        return min(limits) if limits else None

    @property
    def growth_degree(self):
        return max((f.growth_degree for _, f in self.terms), default=0.0)

    def derivative(self, r, x):
        x = np.asarray(x, dtype=float)
        total = np.zeros_like(x)
        for c, f in self.terms:
            total = total + c * f.derivative(r, x)
        return total

    def regular(self, x):
        x = np.asarray(x, dtype=float)
        total = np.zeros_like(x)
        for c, f in self.terms:
            total = total + c * f.regular(x)
        return total

    def antiderivative(self):
        return Combination(tuple((c, f.antiderivative()) for c, f in self.terms))

    def describe(self):
        return "+".join(f"{_fmt(c)}*{f.describe()}" for c, f in self.terms)


@dataclass(frozen=True)
class Sampled(FunctionSpec):
    """Wraps a plain callable; derivatives by central differences up to order 4."""

    fn: object
    growth: float = 0.0
    name: str = "callable"
    step: float = field(default=1e-3)
    kind = "callable"
    max_derivative = FD_MAX_ORDER

    @property
    def growth_degree(self):
        return float(self.growth)

    def derivative(self, r, x):
        x = np.asarray(x, dtype=float)
        if r == 0:
            return np.broadcast_to(np.asarray(self.fn(x), dtype=float), x.shape)
        if r > FD_MAX_ORDER:
            raise UnsupportedError(f"finite-difference derivatives are capped at order {FD_MAX_ORDER}")
        return central_difference(self.fn, r, x, self.step * (1.0 + np.abs(x)))

    def describe(self):
        return self.name


def central_difference(fn, r, x, h):
    """Second-order central stencil for the r-th derivative (r <= 4)."""
    stencils = {
        1: ((-1, -0.5), (1, 0.5)),
        2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
        3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
        4: ((-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)),
    }
    total = 0.0
    for offset, weight in stencils[r]:
        total = total + weight * np.asarray(fn(x + offset * h), dtype=float)
    return total / h ** r


def derivative_values(f: FunctionSpec, r: int, x):
    """f^(r)(x), honouring the finite-difference cap of callable wrappers."""
    limit = f.max_derivative
    if limit is not None and r > limit:
        raise UnsupportedError(f"{f.describe()} supports derivatives only up to order {limit}")
    return f.derivative(r, x)


def catalog(a: float = 1.0):
    """One instance of every catalog kind that has a closed form."""
    return {
        "power": Power(2.5),
        "monomial_poly": Poly((1.0, 0.0, 3.0, 0.5)),
        "exp_decay": ExpDecay(1.0),
        "power_exp": ProductPower(ExpDecay(0.5), 1.5),
        "geom": Geom(),
        "todd": Todd(),
        "log_power_1": LogPower(1),
        "log_power_2": LogPower(2),
        "log_power_3": LogPower(3),
        "sine": Sine(a),
        "cosine": Cosine(a),
        "sine_freq": Sine(2.0),
        "cosine_freq": Cosine(0.5),
    }
