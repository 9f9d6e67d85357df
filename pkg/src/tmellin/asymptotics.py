"""Asymptotic expansion of the twisted transform for large s.

    M f(s) ~ sum_r f^(r)(s) f_r(s) / r!

and the N-twisted transform A_N, whose 1/N expansion reuses the same
polynomials through g_k = f_k / k!.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .functions import FunctionSpec, Scaled, derivative_values
from .polyseq import f_poly_recurrence
from .quadrature import TransformValue, adaptive_transform
from .transform import twisted_mellin

MAX_ORDER = 30
MAX_N_ORDER = 5
TRUTH_TOL = 1e-11


@dataclass(frozen=True)
class OrderTerm:
    r: int
    derivative_value: float
    poly_value: float
    term: float


@dataclass(frozen=True)
class ExpansionResult:
    s: float
    orders: tuple
    partial_sums: tuple

    @property
    def value(self):
        return self.partial_sums[-1]


def expansion(f: FunctionSpec, s: float, R: int) -> ExpansionResult:
    """Partial sums of sum_{r<=R} f^(r)(s) f_r(s) / r!."""
    if int(R) != R or not 0 <= R <= MAX_ORDER:
        raise DomainError(f"expansion order must be an integer in [0, {MAX_ORDER}]")
    s = float(s)
    if not s >= 0:
        raise DomainError("expansion needs s >= 0")
    orders = []
    sums = []
    total = 0.0
    for r in range(int(R) + 1):
        d = float(np.asarray(derivative_values(f, r, np.array([s])))[0])
        p = f_poly_recurrence(r).evaluate_float(s)
        term = d * p / math.factorial(r)
        total += term
        orders.append(OrderTerm(r, d, p, term))
        sums.append(total)
    return ExpansionResult(s, tuple(orders), tuple(sums))


def n_twisted(f: FunctionSpec, s: float, N: float, tol: float = 1e-10) -> TransformValue:
    """A_N f(s) = int f x**(Ns) e**(-Nx) / int x**(Ns) e**(-Nx), as M[f(x/N)](Ns)."""
    if not N > 0:
        raise DomainError("N must be positive")
    if N == 1:
        return twisted_mellin(f, s, tol)
    return twisted_mellin(Scaled(f, 1.0 / N), N * float(s), tol)


def n_expansion_terms(p: int) -> list:
    """Exact pieces of the N**-p coefficient: (k, c, e) meaning c * s**e * f^(k)(s).

    Collected from sum_k N**-k f^(k)(s) f_k(Ns)/k!: the monomial a_{k,i} (Ns)**i
    contributes to N**-(k-i), so p = k - i and p <= k <= 2p.
    """
    if int(p) != p or p < 0:
        raise DomainError("power of 1/N must be a non-negative integer")
    out = []
    for k in range(p, 2 * p + 1):
        a = f_poly_recurrence(k).coeff(k - p)
        if a:
            out.append((k, Fraction(a, math.factorial(k)), k - p))
    return out


def n_expansion_coefficients(f: FunctionSpec, s: float, order: int) -> list:
    """Numeric coefficients of N**0, ..., N**-order."""
    if int(order) != order or not 0 <= order <= MAX_N_ORDER:
        raise DomainError(f"order must be an integer in [0, {MAX_N_ORDER}]")
    s = float(s)
    x = np.array([s])
    coeffs = []
    for p in range(int(order) + 1):
        total = 0.0
        for k, c, e in n_expansion_terms(p):
            total += float(c) * s ** e * float(derivative_values(f, k, x)[0])
        coeffs.append(total)
    return coeffs


def n_expansion(f: FunctionSpec, s: float, N: float, order: int) -> float:
    """A_N f(s) summed through N**-order."""
    if not N > 0:
        raise DomainError("N must be positive")
    coeffs = n_expansion_coefficients(f, s, order)
    return float(sum(c * N ** -p for p, c in enumerate(coeffs)))


@dataclass(frozen=True)
class RemainderReport:
    R: int
    s_values: tuple
    errors: tuple
    slope: float
    bound: float
    decreasing: bool
    within_bound: bool
    converged: bool

    @property
    def passed(self):
        return self.decreasing and self.within_bound


def remainder_scan(f: FunctionSpec, R: int, s_values) -> RemainderReport:
    """E_R(s) = |M f(s) - partial_sum_R(s)| with quadrature as ground truth.

    The log-log slope of E_R against s should not exceed
    growth_degree - (R+1)/2 + 0.5. Identically zero remainders (terminating
    expansions) count as decreasing and within bound.
    """
    grid = tuple(float(s) for s in s_values)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("s_values must be strictly increasing")
    if not grid or grid[0] < 5:
        raise DomainError("remainder_scan needs s_values >= 5")
    errors = []
    converged = True
    for s in grid:
        truth = adaptive_transform(f, s, tol=TRUTH_TOL)
        converged &= truth.converged
        errors.append(abs(truth.value - expansion(f, s, R).value))
    bound = f.growth_degree - (R + 1) / 2 + 0.5
    errs = np.array(errors)
    # errors at the roundoff floor of the truth carry no decay information
    scale = np.array([abs(twisted_mellin(f, s).value) for s in grid])
    floor = 1e3 * np.finfo(float).eps * (1.0 + scale)
    if np.all(errs <= floor):
        return RemainderReport(R, grid, tuple(errors), -math.inf, bound, True, True, converged)
    slope = float(np.polyfit(np.log(grid), np.log(np.maximum(errs, floor)), 1)[0])
    decreasing = all(b < a for a, b in zip(errors, errors[1:]))
    return RemainderReport(R, grid, tuple(errors), slope, bound, decreasing, slope <= bound, converged)
