"""Verification suites behind ``tmellin verify``.

Each check yields one :class:`Check` with the largest residual seen and the
budget it must stay under. Exact checks report a residual of 0 or 1.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import polyseq, specfun
from .asymptotics import (
    expansion,
    n_expansion,
    n_expansion_terms,
    n_twisted,
    remainder_scan,
)
from .errors import TruncationWarning
from .functions import (
    Cosine,
    ExpDecay,
    Gaussian,
    Poly,
    Power,
    RationalDecay,
    Sine,
    catalog,
)
from .quadrature import adaptive_transform, monte_carlo_oracle
from .transform import (
    check_identity,
    complex_closed_form,
    growth_ratio,
    invert,
    linear_combination,
    schwartz_decay_probe,
    twisted_mellin,
)

SUITES = ("identities", "catalog", "polyseq", "asymptotics")
CATALOG_S = (0.5, 1.0, 2.5, 10.0)
ZETA_KINDS = ("geom", "todd")


@dataclass(frozen=True)
class Check:
    name: str
    max_residual: float
    budget: float

    @property
    def passed(self):
        return self.max_residual <= self.budget

    def line(self):
        res = "0" if self.max_residual == 0 else f"{self.max_residual:.3e}"
        budget = "0" if self.budget == 0 else f"{self.budget:.1e}"
        return f"{self.name}, {res}, {budget}, {'PASS' if self.passed else 'FAIL'}"


def _exact(name, ok):
    return Check(name, 0.0 if ok else 1.0, 0.0)


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# --- identities --------------------------------------------------------------


def intertwining_residual(f, s_grid=None):
    grid = np.linspace(1.0, 20.0, 20) if s_grid is None else s_grid
    return max(check_identity("intertwining", f, s).residual for s in grid)


def iterated_residual(f, ns=(2, 3), s_grid=(3.0, 4.5, 8.0, 15.0)):
    return max(check_identity("iterated_intertwining", f, s, n=n).residual
               for n in ns for s in s_grid if s >= n)


IDENTITY_CASES = {
    "power_shift": dict(fs=(Poly((1.0, 0.0, 3.0)), ExpDecay(1.0), Sine(1.0), RationalDecay()),
                        s=(0.0, 1.0, 2.5, 7.0), kw=dict(a=1.5)),
    "damping": dict(fs=(Poly((1.0,)), Poly((0.0, 2.0, 1.0)), Cosine(1.0), RationalDecay()),
                    s=(0.0, 1.0, 2.5, 7.0), kw=dict(c=0.75)),
    "log_derivative": dict(fs=(Poly((1.0, 1.0)), ExpDecay(1.0), Sine(1.0), RationalDecay()),
                           s=(0.5, 1.0, 2.5, 7.0), kw={}),
    "antiderivative_sum": dict(fs=(Poly((1.0, 0.0, 3.0)), ExpDecay(0.5), Sine(1.0), Cosine(2.0)),
                               s=(0.3, 1.7, 3.25, 6.5), kw={}),
    "antiderivative_integer": dict(fs=(Poly((1.0,)), Poly((2.0, 1.0)), ExpDecay(1.0), Cosine(1.0)),
                                   s=(0.0, 1.0, 3.0, 6.0), kw={}),
    "antiderivative_step": dict(fs=(Poly((0.0, 0.0, 1.0)), ExpDecay(2.0), Sine(0.5), Cosine(1.0)),
                                s=(1.0, 2.5, 4.0, 9.5), kw={}),
}


def identity_residual(tag, tol=1e-7):
    case = IDENTITY_CASES[tag]
    worst = 0.0
    for f in case["fs"]:
        for s in case["s"]:
            r = check_identity(tag, f, s, tol=tol, **case["kw"])
            worst = max(worst, r.residual / (1.0 + abs(r.rhs)))
    return worst


def linearity_residual():
    f, g = ExpDecay(1.0), RationalDecay()
    combo = linear_combination(((2.0, f), (-3.0, g)))
    worst = 0.0
    for s in (0.5, 2.0, 10.0):
        lhs = adaptive_transform(combo, s, tol=1e-13).value
        rhs = 2.0 * adaptive_transform(f, s, tol=1e-13).value - 3.0 * adaptive_transform(g, s, tol=1e-13).value
        worst = max(worst, abs(lhs - rhs))
    return worst


def suite_identities(tol=1e-8, seed=0):
    out = [Check(f"intertwining {f.describe()}", intertwining_residual(f), tol)
           for f in (Power(3), ExpDecay(1.0), Sine(1.0), RationalDecay())]
    out += [Check(f"iterated_intertwining {f.describe()}", iterated_residual(f), tol)
            for f in (Power(5), ExpDecay(1.0))]
    for tag in IDENTITY_CASES:
        out.append(Check(tag, identity_residual(tag), max(tol, 1e-7)))
    out.append(Check("linearity", linearity_residual(), 1e-10))
    return out


# --- catalog -----------------------------------------------------------------


def catalog_residual(name, f, s_values=CATALOG_S):
    worst = 0.0
    for s in s_values:
        if name == "geom" and s <= 0:
            continue
        q = adaptive_transform(f, s, tol=1e-12)
        worst = max(worst, abs(q.value - f.closed_form(s)))
    return worst


def polygamma_bound_margin(ms=range(1, 7), s_values=(0.0, 0.5, 1.0, 5.0, 50.0)):
    """max |psi^(m)(s+1)| / (zeta(m+1) m!) - 1; non-positive when the bound holds."""
    worst = -math.inf
    for m in ms:
        bound = specfun.zeta(m + 1.0) * math.factorial(m)
        for s in s_values:
            worst = max(worst, abs(specfun.polygamma(m, s + 1.0)) / bound - 1.0)
    return worst


def inversion_residual():
    worst = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", TruncationWarning)
        for f in (Poly((0.0, 1.0)), Poly((0.0, 0.0, 1.0)), ExpDecay(1.0)):
            mf = complex_closed_form(f)
            for x in (0.5, 1.0, 2.0):
                worst = max(worst, _rel(invert(mf, x), f.exact_value(x)))
    return worst


def monte_carlo_residual(seed=0, samples=200_000):
    """Distance from the k = 3 transform to the sampled mean, in standard errors."""
    worst = 0.0
    for f in (RationalDecay(), Cosine(1.0), Poly((0.0, 1.0, 0.5))):
        mean, se = monte_carlo_oracle(f, 3.0, samples=samples, seed=seed)
        worst = max(worst, abs(mean - twisted_mellin(f, 3.0).value) / se)
    return worst


def suite_catalog(tol=1e-9, seed=0):
    out = []
    for name, f in catalog().items():
        budget = 1e-7 if name in ZETA_KINDS else tol
        out.append(Check(f"closed_form {name}", catalog_residual(name, f), budget))
    ratios = growth_ratio(Poly((0.0, 1.0, 0.0, 1.0)), (10.0, 1e2, 1e3, 1e4), 3.0)
    out.append(Check("polynomial_growth ratio spread", max(ratios) - min(ratios), 3.0))
    probe = schwartz_decay_probe(Gaussian(), 3, (10.0, 20.0, 40.0, 80.0))
    out.append(_exact("schwartz_decay gaussian", probe.passed))
    probe = schwartz_decay_probe(ExpDecay(1.0), 0, (1.0, 2.0, 4.0, 8.0))
    out.append(_exact("schwartz_decay exp_decay", probe.passed))
    out.append(Check("polygamma_bound excess", max(polygamma_bound_margin(), 0.0), 1e-10))
    out.append(Check("inversion roundtrip", inversion_residual(), 1e-3))
    out.append(Check("monte_carlo k=3 (stderr units)", monte_carlo_residual(seed), 5.0))
    return out


# --- polyseq -----------------------------------------------------------------

DISPLAYED_F = (
    (1,), (1,), (2, 1), (6, 5), (24, 26, 3), (120, 154, 35),
)


def _double_factorial(n):
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def suite_polyseq(tol=0.0, seed=0):
    out = []
    out.append(_exact("f recurrence = alternating Stirling sum (r<=60)",
                      all(polyseq.f_poly_recurrence(r) == polyseq.f_poly_sum(r) for r in range(61))))
    out.append(_exact("deg f_r = floor(r/2) (r<=60)",
                      all(polyseq.f_poly_recurrence(r).degree == r // 2 for r in range(61))))
    table = polyseq.coefficient_table(60)
    out.append(_exact("a_{r,0} = r!", all(table[r][0] == math.factorial(r) for r in range(61))))
    out.append(_exact("a_{2k,k} = (2k-1)!!",
                      all(table[2 * k][k] == _double_factorial(2 * k - 1) for k in range(1, 31))))
    out.append(_exact("displayed f_0..f_5",
                      all(polyseq.f_poly_recurrence(r).coefficients == c for r, c in enumerate(DISPLAYED_F))))
    egf = polyseq.egf_truncation(40)
    out.append(_exact("generating function to order 40",
                      all(tuple(egf[r].coefficients)
                          == tuple(Fraction(c, math.factorial(r)) for c in polyseq.f_poly_recurrence(r))
                          for r in range(41))))
    out.append(_exact("vanishing identity 2j<r<=30",
                      all(polyseq.vanishing_identity(r, j) == 0
                          for r in range(1, 31) for j in range((r + 1) // 2))))
    out.append(_exact("vanishing identity nonzero at 2j=r<=12",
                      all(polyseq.vanishing_identity(2 * j, j) != 0 for j in range(1, 7))))
    ok = True
    for j in range(1, 7):
        try:
            polyseq.falling_factorial_fit(j, 40)
        except AssertionError:
            ok = False
    out.append(_exact("falling-factorial fit j<=6, i<=40", ok))
    reports = [rep for r in range(7) for rep in polyseq.brute_force_interpretations(r)]
    out.append(_exact("brute-force interpretations", all(rep.passed for rep in reports)))
    return out


# --- asymptotics -------------------------------------------------------------


def termination_residual(ns=range(9), s_values=(1.0, 5.0, 20.0)):
    worst = 0.0
    for n in ns:
        f = Power(n)
        for s in s_values:
            exact = math.prod(s + k for k in range(1, n + 1))
            worst = max(worst, _rel(expansion(f, s, n).value, exact))
    return worst


def display_match():
    """The order-2 regrouping equals f + (f' + f'' s/2)/N + (f'' + f''' 5s/6 + f'''' s^2/8)/N^2."""
    want = [
        [(0, Fraction(1), 0)],
        [(1, Fraction(1), 0), (2, Fraction(1, 2), 1)],
        [(2, Fraction(1), 0), (3, Fraction(5, 6), 1), (4, Fraction(1, 8), 2)],
    ]
    return [n_expansion_terms(p) for p in range(3)] == want


def n_ratio_min(f=None, s=3.0, Ns=(10.0, 20.0, 40.0)):
    f = RationalDecay() if f is None else f
    errs = [abs(n_twisted(f, s, N, tol=1e-13).value - n_expansion(f, s, N, 2)) for N in Ns]
    return min(a / b for a, b in zip(errs, errs[1:]))


def suite_asymptotics(tol=1e-10, seed=0):
    out = [Check("termination x^n, n<=8", termination_residual(), 1e-10)]
    out.append(_exact("order-2 regrouping matches displayed formula", display_match()))
    cubic = [abs(n_twisted(Power(3), 2.0, N).value - n_expansion(Power(3), 2.0, N, 3)) for N in (10.0, 20.0)]
    out.append(Check("A_N x^3 exact through N^-3", max(cubic), 1e-10))
    ratio = n_ratio_min()
    out.append(Check("A_N error drop per doubling (6/ratio)", 6.0 / ratio, 1.0))
    rep = remainder_scan(RationalDecay(), 2, (25.0, 50.0, 100.0, 200.0))
    out.append(_exact("remainder E_2 strictly decreasing", rep.decreasing))
    out.append(Check("remainder E_2 log-log slope + 1", max(rep.slope + 1.0, 0.0), 0.0))
    return out


def run_suite(name, tol=None, seed=0):
    """Collect the checks of one suite (or all of them, in a fixed order)."""
    names = SUITES if name == "all" else (name,)
    out = []
    for n in names:
        fn = {"identities": suite_identities, "catalog": suite_catalog,
              "polyseq": suite_polyseq, "asymptotics": suite_asymptotics}[n]
        out.extend(fn(seed=seed) if tol is None else fn(tol=tol, seed=seed))
    return out
