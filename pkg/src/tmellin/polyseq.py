"""Exact polynomial sequences attached to the twisted transform.

Everything here is exact: big integers and :class:`fractions.Fraction`.
Polynomials are dense coefficient tuples indexed by the power of ``s``.

The central objects are the expansion polynomials

    f_r(s) = M[(x - s)**r](s) = sum_i (-1)**(r-i) C(r, i) s^[i] s**(r-i),

where ``s^[n] = (s+1)(s+2)...(s+n)`` is the transform of ``x**n``. They obey
``f_r = r f_{r-1} + (r-1) s f_{r-2}`` with ``f_0 = f_1 = 1``, have degree
``r // 2`` and exponential generating function ``exp(-s x) (1-x)**-(1+s)``.
"""
from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, FitError, ScaleError

STIRLING_MAX = 200


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class _DensePoly:
    __slots__ = ()
    coefficients: tuple

    @classmethod
    def _wrap(cls, value):
        raise NotImplementedError

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient; -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def coeff(self, k: int):
        return self.coefficients[k] if 0 <= k < len(self.coefficients) else 0

    def __len__(self):
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def __bool__(self):
        return bool(self.coefficients)

    def _coerce(self, other):
        if isinstance(other, _DensePoly):
            return other
        if isinstance(other, (int, Fraction)):
            return _poly_of((other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self), len(other))
        return _poly_of([self.coeff(k) + other.coeff(k) for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return _poly_of([-c for c in self.coefficients])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return _poly_of([c * other for c in self.coefficients])
        if not isinstance(other, _DensePoly):
            return NotImplemented
        if not self or not other:
            return _poly_of(())
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coefficients):
            if a:
                for j, b in enumerate(other.coefficients):
                    out[i + j] += a * b
        return _poly_of(out)

    __rmul__ = __mul__

    def shift(self, k: int):
        """Multiply by s**k."""
        if not self:
            return self
        return _poly_of((0,) * k + self.coefficients)

    def __call__(self, s):
        """Horner evaluation; exact for int/Fraction arguments."""
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * s + c
        return acc

    def evaluate_float(self, s: float) -> float:
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * s + float(c)
        return acc

    def __str__(self):
        return " ".join(str(c) for c in self.coefficients) if self else "0"


@dataclass(frozen=True)
class IntPoly(_DensePoly):
    """Dense polynomial with big-integer coefficients."""

    coefficients: tuple = ()

    def __post_init__(self):
        if any(not isinstance(c, int) for c in self.coefficients):
            raise TypeError("IntPoly coefficients must be integers")
        object.__setattr__(self, "coefficients", _trim(self.coefficients))


@dataclass(frozen=True)
class RatPoly(_DensePoly):
    """Dense polynomial with exact rational coefficients."""

    coefficients: tuple = ()

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", _trim(coeffs))

    def __truediv__(self, other):
        return RatPoly([c / other for c in self.coefficients])


def _poly_of(coeffs):
    coeffs = tuple(coeffs)
    if all(isinstance(c, int) for c in coeffs):
        return IntPoly(coeffs)
    rat = tuple(Fraction(c) for c in coeffs)
    if all(c.denominator == 1 for c in rat):
        return IntPoly(tuple(c.numerator for c in rat))
    return RatPoly(rat)


def as_ratpoly(p) -> RatPoly:
    return RatPoly(tuple(p.coefficients))


S = IntPoly((0, 1))


# --- Stirling numbers ------------------------------------------------------


class StirlingTable:
    """Triangular table of unsigned Stirling numbers of the first kind.

    ``rows[n][k] = c(n, k)`` for 0 <= k <= n. Filled lazily with the
    recurrence ``c(n+1, k) = c(n, k-1) + n c(n, k)``; growth is guarded by a
    lock and rows are append-only, so concurrent readers are safe.
    """

    def __init__(self):
        self._rows = [[1]]
        self._lock = threading.Lock()

    @property
    def n_max(self) -> int:
        return len(self._rows) - 1

    def _extend(self, n):
        with self._lock:
            while len(self._rows) <= n:
                m = len(self._rows) - 1
                prev = self._rows[m]
                row = [0] * (m + 2)
                for k in range(1, m + 2):
                    row[k] = (prev[k - 1] if k - 1 <= m else 0) + m * (prev[k] if k <= m else 0)
                self._rows.append(row)

    def row(self, n: int) -> list:
        if n > self.n_max:
            self._extend(n)
        return list(self._rows[n])

    def get(self, n: int, k: int) -> int:
        if n < 0 or k < 0 or k > n:
            return 0
        if n > self.n_max:
            self._extend(n)
        return self._rows[n][k]


_STIRLING = StirlingTable()


def stirling_unsigned(n: int, k: int) -> int:
    """c(n, k): permutations of n elements with exactly k cycles."""
    if not (1 <= k <= n <= STIRLING_MAX):
        raise DomainError(f"stirling_unsigned needs 1 <= k <= n <= {STIRLING_MAX}, got ({n}, {k})")
    return _STIRLING.get(n, k)


def _c(n, k):
    # total version used inside identities: 0 outside the triangle
    return _STIRLING.get(n, k)


def stirling_row(n: int) -> list:
    """[c(n, 1), ..., c(n, n)]."""
    if not 1 <= n <= STIRLING_MAX:
        raise DomainError(f"stirling_row needs 1 <= n <= {STIRLING_MAX}")
    return _STIRLING.row(n)[1:]


# --- rising factorials and the expansion polynomials -------------------------


@lru_cache(maxsize=None)
def rising_factorial_poly(n: int) -> IntPoly:
    """s^[n] = (s+1)(s+2)...(s+n); coefficient of s**k is c(n+1, k+1)."""
    if not 0 <= n <= 100:
        raise DomainError("rising_factorial_poly needs 0 <= n <= 100")
    out = IntPoly((1,))
    for j in range(1, n + 1):
        out = out * IntPoly((j, 1))
    return out


def rising_factorial_from_stirling(n: int) -> IntPoly:
    return IntPoly(tuple(_c(n + 1, k + 1) for k in range(n + 1)))


_F_LOCK = threading.Lock()
_F_CACHE = [IntPoly((1,)), IntPoly((1,))]


def f_poly_recurrence(r: int) -> IntPoly:
    """f_r from f_r = r f_{r-1} + (r-1) s f_{r-2}, f_0 = f_1 = 1."""
    if not 0 <= r <= 200:
        raise DomainError("f_poly_recurrence needs 0 <= r <= 200")
    if r >= len(_F_CACHE):
        with _F_LOCK:
            while len(_F_CACHE) <= r:
                m = len(_F_CACHE)
                _F_CACHE.append(_F_CACHE[m - 1] * m + _F_CACHE[m - 2].shift(1) * (m - 1))
    return _F_CACHE[r]


def f_poly_sum(r: int) -> IntPoly:
    """f_r by the alternating sum of rising factorials against powers of s."""
    if not 0 <= r <= 200:
        raise DomainError("f_poly_sum needs 0 <= r <= 200")
    total = [0] * (r + 1)
    for i in range(r + 1):
        sign = -1 if (r - i) % 2 else 1
        weight = sign * math.comb(r, i)
        # s^[i] * s^(r-i): coefficients c(i+1, k+1) land on power k + r - i
        for k in range(i + 1):
            total[k + r - i] += weight * _c(i + 1, k + 1)
    return IntPoly(tuple(total))


def coefficient_table(r_max: int) -> list:
    """Rows ``a[r] = [a_{r,0}, ..., a_{r, r//2}]`` from the two-term recurrence.

    The weighted factorial sum for each a_{r,k}, k >= 1, is checked against
    the table before returning; a mismatch raises :class:`FitError`.
    """
    if not 1 <= r_max <= 200:
        raise DomainError("coefficient_table needs 1 <= r_max <= 200")
    a = [[1], [1]]
    for r in range(2, r_max + 1):
        row = []
        for i in range(r // 2 + 1):
            left = r * a[r - 1][i] if i < len(a[r - 1]) else 0
            right = (r - 1) * a[r - 2][i - 1] if 1 <= i <= len(a[r - 2]) else 0
            row.append(left + right)
        a.append(row)
    a = a[: r_max + 1]
    for r in range(2, r_max + 1):
        for k in range(1, r // 2 + 1):
            if a[r][k] != factorial_sum_coefficient(a, r, k):
                raise FitError(f"factorial-sum form disagrees with table at a[{r}][{k}]")
    return a


def factorial_sum_coefficient(table, r: int, k: int) -> int:
    """a_{r,k} = r! * sum_{m=2k}^{r} (m-1) a_{m-2,k-1} / m!."""
    acc = Fraction(0)
    for m in range(2 * k, r + 1):
        acc += Fraction((m - 1) * table[m - 2][k - 1], math.factorial(m))
    value = acc * math.factorial(r)
    if value.denominator != 1:
        raise FitError(f"non-integral factorial-sum value at ({r}, {k})")
    return value.numerator


def egf_truncation(order: int) -> list:
    """Coefficients of x^0..x^order in exp(-s x) * (1-x)**-(1+s), as RatPolys in s.

    Built as the Cauchy product of sum (-s x)^k / k! with the binomial series
    sum s^[m] x^m / m!.
    """
    if not 1 <= order <= 60:
        raise DomainError("egf_truncation needs 1 <= order <= 60")
    expo = [RatPoly((Fraction(0),) * k + (Fraction((-1) ** k, math.factorial(k)),))
            for k in range(order + 1)]
    binom = [as_ratpoly(rising_factorial_poly(m)) / math.factorial(m) for m in range(order + 1)]
    out = []
    for r in range(order + 1):
        acc = RatPoly(())
        for k in range(r + 1):
            acc = acc + expo[k] * binom[r - k]
        out.append(as_ratpoly(acc))
    return out


def falling_factorial(i: int, l: int) -> int:
    """(i)_l = i (i-1) ... (i-l+1)."""
    out = 1
    for t in range(l):
        out *= i - t
    return out


def falling_factorial_fit(j: int, i_max: int = 40) -> list:
    """Constants C_{l,j} (l = j..2j) with c(i+1, i+1-j) = sum_l C_{l,j} (i)_l.

    Solved exactly on the window i = j..2j (a triangular system, since
    (i)_l = 0 for i < l), then checked for every 0 <= i <= i_max.
    """
    if not 0 <= j <= 10:
        raise DomainError("falling_factorial_fit needs 0 <= j <= 10")
    if i_max < 2 * j + 2:
        raise DomainError("falling_factorial_fit needs i_max >= 2j + 2")
    consts = []
    for idx, l in enumerate(range(j, 2 * j + 1)):
        i = l
        known = sum(consts[t] * falling_factorial(i, j + t) for t in range(idx))
        consts.append((Fraction(_c(i + 1, i + 1 - j)) - known) / falling_factorial(i, l))
    for i in range(0, i_max + 1):
        fit = sum(consts[t] * falling_factorial(i, j + t) for t in range(j + 1))
        if fit != _c(i + 1, i + 1 - j):
            raise FitError(f"falling-factorial fit fails at i={i}, j={j}: {fit} != {_c(i + 1, i + 1 - j)}")
    return consts


def vanishing_identity(r: int, j: int) -> int:
    """sum_{i=j}^{r} (-1)^(r-i) C(r, i) c(i+1, i-j+1): the s^(r-j) coefficient of f_r."""
    if not (0 <= j and 0 <= r <= 100):
        raise DomainError("vanishing_identity needs j >= 0 and 0 <= r <= 100")
    total = 0
    for i in range(j, r + 1):
        term = math.comb(r, i) * _c(i + 1, i - j + 1)
        total += -term if (r - i) % 2 else term
    return total


# --- desk-scale combinatorial interpretations --------------------------------


def count_no_succession_permutations(r: int) -> int:
    """Permutations w of {1..r+1} with w(i+1) != w(i) + 1 for all i."""
    if not 0 <= r <= 6:
        raise ScaleError("permutation enumeration is limited to r <= 6")
    count = 0
    for w in itertools.permutations(range(r + 1)):
        if all(w[i + 1] != w[i] + 1 for i in range(r)):
            count += 1
    return count


def _compositions_two_nonzero(total, r):
    # rows of length r with entries >= 0 summing to total, at most two nonzero
    if r == 1:
        yield (total,)
        return
    seen = set()
    for a in range(r):
        for b in range(a + 1, r):
            for v in range(total + 1):
                row = [0] * r
                row[a] = v
                row[b] = total - v
                t = tuple(row)
                if t not in seen:
                    seen.add(t)
                    yield t


def count_two_support_matrices(r: int, s: int) -> int:
    """r x r non-negative integer matrices, row/column sums 3+2s, <= 2 nonzeros per row."""
    if not (0 <= r <= 2 and 0 <= s <= 2):
        raise ScaleError("matrix enumeration is limited to r <= 2, s <= 2")
    if r == 0:
        return 1
    total = 3 + 2 * s
    rows = list(_compositions_two_nonzero(total, r))
    count = 0
    for combo in itertools.product(rows, repeat=r):
        if all(sum(row[c] for row in combo) == total for c in range(r)):
            count += 1
    return count


def _det(m):
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for c in range(n):
        minor = [row[:c] + row[c + 1:] for row in m[1:]]
        total += (-1) ** c * m[0][c] * _det(minor)
    return total


def sign_matrix_det4_sum(r: int) -> int:
    """sum of det(M)**4 over all r x r matrices with entries +-1."""
    if not 0 <= r <= 3:
        raise ScaleError("sign-matrix enumeration is limited to r <= 3")
    total = 0
    for entries in itertools.product((1, -1), repeat=r * r):
        m = [list(entries[i * r:(i + 1) * r]) for i in range(r)]
        total += _det(m) ** 4
    return total


@dataclass(frozen=True)
class InterpretationReport:
    kind: str
    r: int
    s: int
    count: Fraction
    expected: Fraction

    @property
    def passed(self) -> bool:
        return self.count == self.expected


def brute_force_interpretations(r: int, s: int | None = None) -> list:
    """Exhaustive counts compared against values of f_r.

    Permutations (needs r <= 6) check f_r(1); matrices (r <= 2, and
    s <= 2 if given) check r! f_r(s); sign matrices (r <= 3) check f_r(2).
    Only the interpretations whose limits admit ``r`` are run; if none do,
    :class:`ScaleError` is raised.
    """
    reports = []
    if r <= 6:
        reports.append(InterpretationReport("permutations", r, 1,
                                            Fraction(count_no_succession_permutations(r)),
                                            Fraction(f_poly_recurrence(r)(1))))
    if r <= 2:
        for sv in ([s] if s is not None else [0, 1, 2]):
            reports.append(InterpretationReport("matrices", r, sv,
                                                Fraction(count_two_support_matrices(r, sv)),
                                                Fraction(math.factorial(r) * f_poly_recurrence(r)(sv))))
    if r <= 3:
        value = Fraction(sign_matrix_det4_sum(r), 2 ** (r * r) * math.factorial(r))
        reports.append(InterpretationReport("determinants", r, 2, value,
                                            Fraction(f_poly_recurrence(r)(2))))
    if not reports:
        raise ScaleError("no interpretation is enumerable at this r")
    return reports

def evaluate_f(r: int, s: float) -> float:
    """Float value of f_r(s)."""
    return f_poly_recurrence(r).evaluate_float(s)

