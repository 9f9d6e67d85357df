"""Pure-Python kernels.

Reference implementation of every hot routine; ``_ckernels.pyx`` mirrors
these line for line. Callers validate arguments, the kernels do not.
"""
import cmath
import math

import numpy as np

from ._constants import (
    BERNOULLI_2K,
    EULER_GAMMA,
    HALF_LOG_2PI,
    LANCZOS_COEF,
    LANCZOS_G,
    LOG_GAMMA_SERIES_TERMS,
)

_EPS = 2.220446049250313e-16
_TINY = 1e-17


def _zeta_tail(x, start, n_terms):
    """sum_{k >= start} k**-x by direct summation plus Euler-Maclaurin."""
    big_n = max(n_terms, start + 1)
    total = 0.0
    for k in range(big_n - 1, start - 1, -1):
        total += k ** -x
    npow = big_n ** -x
    total += big_n * npow / (x - 1.0) + 0.5 * npow
    # B_2k/(2k)! * x(x+1)...(x+2k-2) * N^(-x-2k+1)
    poch = x
    fact = 2.0
    power = npow / big_n
    prev = math.inf
    for k in range(1, len(BERNOULLI_2K) + 1):
        term = BERNOULLI_2K[k - 1] / fact * poch * power
        if abs(term) >= prev:
            break
        total += term
        if abs(term) < _TINY * abs(total):
            break
        prev = abs(term)
        poch *= (x + 2 * k - 1) * (x + 2 * k)
        fact *= (2 * k + 1) * (2 * k + 2)
        power /= big_n * big_n
    return total


def zeta(x, n_terms):
    return _zeta_tail(x, 1, n_terms)


def zeta_minus_one(x, n_terms):
    return _zeta_tail(x, 2, n_terms)


_ZETA_INT = [0.0, 0.0] + [zeta(float(k), 16) for k in range(2, LOG_GAMMA_SERIES_TERMS + 1)]
_ZETA_INT_M1 = [0.0, 0.0] + [zeta_minus_one(float(k), 16)
                             for k in range(2, LOG_GAMMA_SERIES_TERMS + 1)]


def _lgamma_near_one(z):
    # log Gamma(1 + z), |z| <= 1/2
    total = 0.0
    zk = -z
    for k in range(2, LOG_GAMMA_SERIES_TERMS + 1):
        zk *= -z
        total += _ZETA_INT[k] * zk / k
    return -EULER_GAMMA * z + total


def _lgamma_near_two(z):
    # log Gamma(2 + z), |z| <= 1/2
    total = 0.0
    zk = -z
    for k in range(2, LOG_GAMMA_SERIES_TERMS + 1):
        zk *= -z
        total += _ZETA_INT_M1[k] * zk / k
    return (1.0 - EULER_GAMMA) * z + total


def _lgamma_stirling(x):
    total = (x - 0.5) * math.log(x) - x + HALF_LOG_2PI
    inv = 1.0 / x
    inv2 = inv * inv
    corr = 0.0
    for k in range(1, len(BERNOULLI_2K) + 1):
        term = BERNOULLI_2K[k - 1] / (2 * k * (2 * k - 1)) * inv
        corr += term
        if abs(term) < _TINY * abs(total):
            break
        inv *= inv2
    return total + corr


def ln_gamma(x, threshold):
    if x < 0.5:
        return ln_gamma(x + 1.0, threshold) - math.log(x)
    if x < 1.5:
        return _lgamma_near_one(x - 1.0)
    if x < 2.5:
        return _lgamma_near_two(x - 2.0)
    if x < threshold:
        shift = int(x - 1.5)
        y = x - shift
        logs = 0.0
        prod = 1.0
        for j in range(1, shift + 1):
            prod *= x - j
            if prod > 1e280:
                logs += math.log(prod)
                prod = 1.0
        return _lgamma_near_two(y - 2.0) + logs + math.log(prod)
    return _lgamma_stirling(x)


def _polygamma_asymptotic(m, x):
    inv = 1.0 / x
    inv2 = inv * inv
    if m == 0:
        total = math.log(x) - 0.5 * inv
        power = inv2
        for k in range(1, len(BERNOULLI_2K) + 1):
            term = BERNOULLI_2K[k - 1] / (2 * k) * power
            total -= term
            if abs(term) < _TINY * abs(total):
                break
            power *= inv2
        return total
    fact_m1 = math.factorial(m - 1)
    xm = inv ** m
    total = fact_m1 * xm + 0.5 * fact_m1 * m * xm * inv
    # ratio (2k+m-1)!/(2k)!, starting from k = 1
    ratio = math.factorial(m + 1) / 2.0
    power = xm * inv2
    for k in range(1, len(BERNOULLI_2K) + 1):
        term = BERNOULLI_2K[k - 1] * ratio * power
        total += term
        if abs(term) < _TINY * abs(total):
            break
        ratio *= (2 * k + m) * (2 * k + m + 1) / ((2 * k + 1) * (2 * k + 2))
        power *= inv2
    return total if m % 2 == 1 else -total


def polygamma(m, x, threshold):
    target = threshold + m
    acc = 0.0
    while x < target:
        acc += x ** (-m - 1)
        x += 1.0
    value = _polygamma_asymptotic(m, x)
    if m % 2 == 0:
        return value - math.factorial(m) * acc
    return value + math.factorial(m) * acc


def _clgamma_one(z):
    z = z - 1.0
    acc = LANCZOS_COEF[0]
    for i in range(1, len(LANCZOS_COEF)):
        acc += LANCZOS_COEF[i] / (z + i)
    t = z + LANCZOS_G + 0.5
    return HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def clgamma(z, out):
    """Complex log-gamma for Re z >= 1/2 (Lanczos); writes into ``out``."""
    for i in range(len(z)):
        out[i] = _clgamma_one(complex(z[i]))


def tridiag_ql(d, e, z):
    """Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.

    ``d`` holds the diagonal, ``e[i]`` couples rows i and i+1 (``e[-1]`` is
    ignored). ``z`` carries one row of the eigenvector matrix and is rotated
    along. Eigenvalues overwrite ``d`` unsorted. Returns the total number of
    QL sweeps, or -1 if some eigenvalue failed to converge.
    """
    n = len(d)
    e[n - 1] = 0.0
    sweeps = 0
    for l in range(n):
        iters = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            iters += 1
            sweeps += 1
            if iters > 60:
                return -1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return sweeps


def refine_rule(s, x, w, newton_steps):
    """Newton-polish Laguerre nodes and recompute Christoffel weights.

    Orthonormal recurrence for the normalized weight x**s e**-x:
    b_{k+1} p_{k+1} = (x - (2k+s+1)) p_k - b_k p_{k-1},  b_k = sqrt(k(k+s)).
    Weights are 1 / sum_{k<n} p_k(x)**2, accumulated with rescaling so the
    tail weights keep full relative accuracy down to underflow.
    """
    n = len(x)
    xs = np.array(x, dtype=float)
    b = np.sqrt(np.arange(n + 1) * (np.arange(n + 1) + s))
    for _ in range(newton_steps):
        p_prev = np.zeros(n)
        p = np.ones(n)
        dp_prev = np.zeros(n)
        dp = np.zeros(n)
        for k in range(n):
            alpha = 2 * k + s + 1
            p_next = ((xs - alpha) * p - b[k] * p_prev) / b[k + 1]
            dp_next = ((xs - alpha) * dp + p - b[k] * dp_prev) / b[k + 1]
            p_prev, p, dp_prev, dp = p, p_next, dp, dp_next
            big = np.abs(p) > 1e150
            if big.any():
                for arr in (p_prev, p, dp_prev, dp):
                    arr[big] *= 1e-150
        step = p / dp
        gap = np.diff(xs)
        spacing = np.minimum(np.r_[gap, np.inf], np.r_[np.inf, gap])
        ok = np.isfinite(step) & (np.abs(step) < 0.25 * spacing)
        xs = np.where(ok, xs - step, xs)
    p_prev = np.zeros(n)
    p = np.ones(n)
    total = np.ones(n)
    log_scale = np.zeros(n)
    for k in range(n - 1):
        alpha = 2 * k + s + 1
        p_next = ((xs - alpha) * p - b[k] * p_prev) / b[k + 1]
        p_prev, p = p, p_next
        total += p * p
        big = np.abs(p) > 1e100
        if big.any():
            p_prev[big] *= 1e-100
            p[big] *= 1e-100
            total[big] *= 1e-200
            log_scale[big] += 200.0 * math.log(10.0)
    x[:] = xs
    w[:] = np.exp(-np.log(total) - log_scale)
