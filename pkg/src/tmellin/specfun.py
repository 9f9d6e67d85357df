"""Double-precision gamma, polygamma and zeta functions.

All routines are thin validating wrappers over the selected kernel backend
(see :mod:`tmellin._backend`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels as _k
from .errors import DomainError, UnsupportedError

MAX_POLYGAMMA_ORDER = 8


@dataclass(frozen=True)
class SpecFunConfig:
    """Truncation controls for the series evaluations.

    series_terms is the direct-summation length N in the Euler-Maclaurin zeta
    evaluation; asymptotic_threshold is the argument above which log-gamma
    and polygamma switch to their asymptotic series.
    """

    series_terms: int = 10
    asymptotic_threshold: float = 10.0

    def __post_init__(self):
        if int(self.series_terms) != self.series_terms or self.series_terms < 10:
            raise ValueError("series_terms must be an integer >= 10")
        if not self.asymptotic_threshold >= 6:
            raise ValueError("asymptotic_threshold must be >= 6")


DEFAULT_CONFIG = SpecFunConfig()


def _check_positive(name, x):
    if not (x > 0) or math.isinf(x):
        raise DomainError(f"{name} requires a finite positive argument, got {x!r}")


def ln_gamma(x: float, config: SpecFunConfig = DEFAULT_CONFIG) -> float:
    """log Gamma(x) for x > 0."""
    x = float(x)
    _check_positive("ln_gamma", x)
    return _k.ln_gamma(x, float(config.asymptotic_threshold))


def gamma_ratio(s: float, a: float, config: SpecFunConfig = DEFAULT_CONFIG) -> float:
    """Gamma(s+a+1) / Gamma(s+1), evaluated in log space."""
    s = float(s)
    a = float(a)
    if not (s + 1 > 0 and s + a + 1 > 0):
        raise DomainError(f"gamma_ratio needs s+1 > 0 and s+a+1 > 0 (s={s}, a={a})")
    if a == 0:
        return 1.0
    if a == int(a) and 0 < a <= 64:
        # short exact product avoids cancellation in the log difference
        out = 1.0
        for j in range(1, int(a) + 1):
            out *= s + j
        return out
    return math.exp(ln_gamma(s + a + 1, config) - ln_gamma(s + 1, config))


def polygamma(m: int, x: float, config: SpecFunConfig = DEFAULT_CONFIG) -> float:
    """The m-th derivative of the digamma function; m = 0 gives digamma."""
    if int(m) != m or m < 0:
        raise DomainError(f"polygamma order must be a non-negative integer, got {m!r}")
    if m > MAX_POLYGAMMA_ORDER:
        raise UnsupportedError(f"polygamma order {m} > {MAX_POLYGAMMA_ORDER} is not supported")
    x = float(x)
    _check_positive("polygamma", x)
    return _k.polygamma(int(m), x, float(config.asymptotic_threshold))


def digamma(x: float, config: SpecFunConfig = DEFAULT_CONFIG) -> float:
    return polygamma(0, x, config)


def zeta(x: float, config: SpecFunConfig = DEFAULT_CONFIG) -> float:
    """Riemann zeta for real x > 1."""
    x = float(x)
    if not x > 1:
        raise DomainError(f"zeta is only provided for real x > 1, got {x!r}")
    if math.isinf(x):
        return 1.0
    return _k.zeta(x, int(config.series_terms))


def complex_ln_gamma(z) -> np.ndarray:
    """log Gamma on an array of complex points with Re z >= 1/2."""
    z = np.ascontiguousarray(np.atleast_1d(z), dtype=complex)
    if np.any(z.real < 0.5):
        raise DomainError("complex_ln_gamma requires Re z >= 1/2")
    out = np.empty_like(z)
    _k.clgamma(z, out)
    return out


def gamma_derivative_ratio(n: int, x: float, config: SpecFunConfig = DEFAULT_CONFIG) -> float:
    """Gamma^(n)(x) / Gamma(x) for n <= 3, via Bell polynomials in polygammas."""
    if n == 0:
        return 1.0
    p0 = polygamma(0, x, config)
    if n == 1:
        return p0
    p1 = polygamma(1, x, config)
    if n == 2:
        return p1 + p0 * p0
    if n == 3:
        p2 = polygamma(2, x, config)
        return p2 + 3.0 * p0 * p1 + p0 ** 3
    raise UnsupportedError(f"Gamma^({n})/Gamma is only implemented for n <= 3")
