"""The twisted Mellin transform

    M f(s) = int_0^oo f(x) x**s e**-x dx / Gamma(s+1),

its closed forms, structural identities, decay probes and numeric inversion.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DomainError, TruncationWarning, UnsupportedError
from .functions import (
    Combination,
    Damped,
    Derivative,
    FunctionSpec,
    LogTimes,
    ProductPower,
    Scaled,
)
from .quadrature import (
    MAX_NODES,
    TransformValue,
    adaptive_transform,
    log_grid_transform,
)

IDENTITIES = (
    "power_shift",
    "damping",
    "intertwining",
    "iterated_intertwining",
    "log_derivative",
    "antiderivative_sum",
    "antiderivative_integer",
    "antiderivative_step",
)


def _check_s(s):
    s = float(s)
    if not s >= 0 or math.isinf(s):
        raise DomainError(f"transform parameter must be a finite s >= 0, got {s}")
    return s


def closed_form(f: FunctionSpec, s: float):
    """Catalog value of M f(s), or None for kinds without a closed form."""
    s = _check_s(s)
    if not f.has_closed_form:
        if f.kind == "log_power":
            raise UnsupportedError("closed form for (log x)**n is only tabulated for n <= 3")
        return None
    return float(f.closed_form(s))


def twisted_mellin(f: FunctionSpec, s: float, tol: float = 1e-10,
                   max_nodes: int = MAX_NODES) -> TransformValue:
    """M f(s): the closed form when the catalog has one, else adaptive quadrature."""
    s = _check_s(s)
    if f.has_closed_form:
        value = f.closed_form(s)
        if value is not None:
            return TransformValue(float(value), 0.0, 1, "closed_form")
    return adaptive_transform(f, s, tol=tol, max_nodes=max_nodes)


def quadrature_value(f: FunctionSpec, s: float, tol: float = 1e-10,
                     max_nodes: int = MAX_NODES) -> TransformValue:
    """M f(s) by quadrature only, ignoring any closed form."""
    return adaptive_transform(f, _check_s(s), tol=tol, max_nodes=max_nodes)


def alpha_twisted(f: FunctionSpec, s: float, alpha: float, tol: float = 1e-10,
                  max_nodes: int = MAX_NODES) -> TransformValue:
    """int f x**s e**(-alpha x) / int x**s e**(-alpha x), via M[f(x/alpha)](s)."""
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    if alpha == 1.0:
        return twisted_mellin(f, s, tol, max_nodes)
    return twisted_mellin(Scaled(f, 1.0 / alpha), s, tol, max_nodes)


# --- identities --------------------------------------------------------------


@dataclass(frozen=True)
class IdentityReport:
    tag: str
    s: float
    lhs: float
    rhs: float
    residual: float
    tol: float
    passed: bool


def _mf(f, s, tol):
    return twisted_mellin(f, s, tol).value


def _ds_transform(f, s, tol):
    # central difference; one-sided second-order stencil near s = 0
    h = 1e-5 * (1.0 + s)
    if s - h < 0:
        return (-3.0 * _mf(f, s, tol) + 4.0 * _mf(f, s + h, tol) - _mf(f, s + 2 * h, tol)) / (2 * h)
    return (_mf(f, s + h, tol) - _mf(f, s - h, tol)) / (2 * h)


def _need_s(s, lower, tag):
    if s < lower:
        raise DomainError(f"identity {tag} needs s >= {lower}, got {s}")


def check_identity(tag: str, f: FunctionSpec, s: float, tol: float = 1e-8,
                   a: float = 1.0, c: float = 1.0, n: int = 2,
                   eval_tol: float = 1e-12) -> IdentityReport:
    """Evaluate both sides of a structural identity independently.

    power_shift            M[x**a f](s) = Gamma(s+a+1)/Gamma(s+1) M f(s+a)
    damping                M[e**(-c x) f](s) = (c+1)**(-s-1) M[f(x/(c+1))](s)
    intertwining           M[f'](s) = M f(s) - M f(s-1)
    iterated_intertwining  M[f^(n)](s) = sum_i (-1)**i C(n,i) M f(s-i)
    log_derivative         d/ds M f(s) = M[f log x](s) - M f(s) psi(s+1)
    antiderivative_sum     M F(s) = sum_{i<[s]} M f(s-i) + M F(s-[s])
    antiderivative_integer M F(n) = sum_{i<=n} M f(i)   (s must be an integer)
    antiderivative_step    M F(s) = M f(s) + M F(s-1)

    with F(x) = int_0^x f. Passes iff |lhs - rhs| <= tol (1 + |rhs|).
    """
    if tag not in IDENTITIES:
        raise DomainError(f"unknown identity {tag!r}; expected one of {', '.join(IDENTITIES)}")
    s = _check_s(s)
    et = eval_tol
    if tag == "power_shift":
        if s + a < 0:
            raise DomainError("power_shift needs s + a >= 0")
        lhs = _mf(ProductPower(f, a), s, et)
        rhs = specfun.gamma_ratio(s, a) * _mf(f, s + a, et)
    elif tag == "damping":
        if not c > 0:
            raise DomainError("damping needs c > 0")
        lhs = _mf(Damped(f, c), s, et)
        rhs = (c + 1.0) ** (-s - 1.0) * _mf(Scaled(f, 1.0 / (c + 1.0)), s, et)
    elif tag == "intertwining":
        _need_s(s, 1.0, tag)
        lhs = _mf(Derivative(f, 1), s, et)
        rhs = _mf(f, s, et) - _mf(f, s - 1.0, et)
    elif tag == "iterated_intertwining":
        _need_s(s, float(n), tag)
        lhs = _mf(Derivative(f, n), s, et)
        rhs = sum((-1) ** i * math.comb(n, i) * _mf(f, s - i, et) for i in range(n + 1))
    elif tag == "log_derivative":
        lhs = _ds_transform(f, s, et)
        rhs = _mf(LogTimes(f), s, et) - _mf(f, s, et) * specfun.digamma(s + 1.0)
    else:
        big_f = f.antiderivative()
        if tag == "antiderivative_sum":
            k = int(math.floor(s))
            lhs = _mf(big_f, s, et)
            rhs = sum(_mf(f, s - i, et) for i in range(k)) + _mf(big_f, s - k, et)
        elif tag == "antiderivative_integer":
            if not s.is_integer():
                raise DomainError("antiderivative_integer needs an integer s")
            lhs = _mf(big_f, s, et)
            rhs = sum(_mf(f, float(i), et) for i in range(int(s) + 1))
        else:
            _need_s(s, 1.0, tag)
            lhs = _mf(big_f, s, et)
            rhs = _mf(f, s, et) + _mf(big_f, s - 1.0, et)
    residual = abs(lhs - rhs)
    return IdentityReport(tag, s, float(lhs), float(rhs), residual, tol,
                          residual <= tol * (1.0 + abs(rhs)))


def linear_combination(terms) -> Combination:
    """sum coef_i f_i as a single FunctionSpec."""
    return Combination(tuple(terms))


# --- decay -------------------------------------------------------------------


@dataclass(frozen=True)
class DecayReport:
    s_grid: tuple
    values: tuple
    # scaled[alpha][i] = s_i**alpha * |M f(s_i)|
    scaled: tuple
    bounded: bool
    monotone_tail: bool

    @property
    def passed(self):
        return self.bounded and self.monotone_tail


def schwartz_decay_probe(f: FunctionSpec, alpha_max: int, s_grid) -> DecayReport:
    """Check that s**alpha |M f(s)| stays bounded and non-increasing on s_grid.

    For rapidly decaying f the integrand mass sits far in the left tail of the
    Gamma weight, so values come from the log-variable grid, which locates the
    integrand peak and keeps full relative accuracy.
    """
    grid = tuple(float(s) for s in s_grid)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("s_grid must be strictly increasing")
    values = []
    for s in grid:
        if f.has_closed_form:
            values.append(float(f.closed_form(s)))
        else:
            values.append(log_grid_transform(f, s, tol=1e-13).value)
    scaled = []
    bounded = True
    monotone = True
    for alpha in range(int(alpha_max) + 1):
        row = tuple(s ** alpha * abs(v) for s, v in zip(grid, values))
        scaled.append(row)
        bounded &= all(math.isfinite(v) for v in row)
        monotone &= all(b <= a * (1.0 + 1e-12) for a, b in zip(row, row[1:]))
    return DecayReport(grid, tuple(values), tuple(scaled), bounded, monotone)


def growth_ratio(f: FunctionSpec, s_values, degree: float):
    """M f(s) / s**degree over s_values; bounded for f of growth degree <= degree."""
    return [twisted_mellin(f, s).value / s ** degree for s in s_values]


# --- inversion ---------------------------------------------------------------


def complex_closed_form(f: FunctionSpec):
    """Callable s -> M f(s) for complex s, for kinds that support inversion."""
    mf = f.complex_transform()
    if mf is None:
        raise UnsupportedError(f"no complex-argument closed form for {f.describe()}")
    return mf


def invert(mf, x: float, c: float = 1.0, height: float = 40.0, steps: int = 4000) -> float:
    """Recover f(x) = e**x / (2 pi i) int_{c-iT}^{c+iT} Gamma(s+1) mf(s) x**(-s-1) ds.

    Trapezoid rule on the vertical segment s = c + i t, |t| <= height. Emits
    TruncationWarning if the integrand at the segment ends is not negligible.
    """
    if not x > 0:
        raise DomainError("inversion needs x > 0")
    if not height > 0 or int(steps) != steps or steps < 2:
        raise DomainError("height must be positive and steps an integer >= 2")
    if c + 1.0 < 0.5:
        raise DomainError("contour abscissa must satisfy c >= -1/2")
    t = np.linspace(-height, height, int(steps) + 1)
    s = c + 1j * t
    log_x = math.log(x)
    integrand = np.exp(specfun.complex_ln_gamma(s + 1.0) - (s + 1.0) * log_x) * np.asarray(mf(s), dtype=complex)
    dt = t[1] - t[0]
    total = dt * (integrand.sum() - 0.5 * (integrand[0] + integrand[-1]))
    value = math.exp(x) * total.real / (2.0 * math.pi)
    edge = max(abs(integrand[0]), abs(integrand[-1]))
    if edge > 1e-8 * abs(total):
        warnings.warn(
            f"contour truncated at height {height}: endpoint integrand {edge:.3g} "
            f"vs integral {abs(total):.3g}", TruncationWarning, stacklevel=2)
    return float(value)
