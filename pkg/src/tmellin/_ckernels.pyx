# cython: language_level=3
"""Compiled kernels; a line-for-line port of ``_pykernels``."""
from libc.math cimport log, fabs, hypot, copysign, sqrt, exp, INFINITY, isfinite
from libc.stdlib cimport malloc, free

cdef extern from "math.h" nogil:
    double _atan2 "atan2"(double, double)

from ._constants import (
    BERNOULLI_2K as _B2K,
    EULER_GAMMA as _EG,
    HALF_LOG_2PI as _HL2P,
    LANCZOS_COEF as _LC,
    LANCZOS_G as _LG,
    LOG_GAMMA_SERIES_TERMS as _NSER,
)

cdef double B2K[30]
cdef int NBERN = len(_B2K)
cdef double EULER_GAMMA = _EG
cdef double HALF_LOG_2PI = _HL2P
cdef double LANCZOS_G = _LG
cdef double LC[9]
cdef int NSER = _NSER
cdef double ZETA_INT[128]
cdef double ZETA_INT_M1[128]
cdef double EPS = 2.220446049250313e-16
cdef double TINY = 1e-17

cdef int _i
for _i in range(NBERN):
    B2K[_i] = _B2K[_i]
for _i in range(9):
    LC[_i] = _LC[_i]


cdef double _zeta_tail(double x, int start, int n_terms) noexcept nogil:
    cdef int big_n = n_terms if n_terms > start + 1 else start + 1
    cdef double total = 0.0, npow, poch, fact, power, term, prev
    cdef int k
    k = big_n - 1
    while k >= start:
        total += (<double>k) ** -x
        k -= 1
    npow = (<double>big_n) ** -x
    total += big_n * npow / (x - 1.0) + 0.5 * npow
    poch = x
    fact = 2.0
    power = npow / big_n
    prev = INFINITY
    for k in range(1, NBERN + 1):
        term = B2K[k - 1] / fact * poch * power
        if fabs(term) >= prev:
            break
        total += term
        if fabs(term) < TINY * fabs(total):
            break
        prev = fabs(term)
        poch *= (x + 2 * k - 1) * (x + 2 * k)
        fact *= (2 * k + 1) * (2 * k + 2)
        power /= (<double>big_n) * big_n
    return total


def zeta(double x, int n_terms):
    return _zeta_tail(x, 1, n_terms)


def zeta_minus_one(double x, int n_terms):
    return _zeta_tail(x, 2, n_terms)


for _i in range(2, NSER + 1):
    ZETA_INT[_i] = _zeta_tail(<double>_i, 1, 16)
    ZETA_INT_M1[_i] = _zeta_tail(<double>_i, 2, 16)


cdef double _lgamma_near_one(double z) noexcept nogil:
    cdef double total = 0.0, zk = -z
    cdef int k
    for k in range(2, NSER + 1):
        zk *= -z
        total += ZETA_INT[k] * zk / k
    return -EULER_GAMMA * z + total


cdef double _lgamma_near_two(double z) noexcept nogil:
    cdef double total = 0.0, zk = -z
    cdef int k
    for k in range(2, NSER + 1):
        zk *= -z
        total += ZETA_INT_M1[k] * zk / k
    return (1.0 - EULER_GAMMA) * z + total


cdef double _lgamma_stirling(double x) noexcept nogil:
    cdef double total = (x - 0.5) * log(x) - x + HALF_LOG_2PI
    cdef double inv = 1.0 / x, inv2 = inv * inv, corr = 0.0, term
    cdef int k
    for k in range(1, NBERN + 1):
        term = B2K[k - 1] / (2 * k * (2 * k - 1)) * inv
        corr += term
        if fabs(term) < TINY * fabs(total):
            break
        inv *= inv2
    return total + corr


cdef double _ln_gamma(double x, double threshold) noexcept nogil:
    cdef int shift, j
    cdef double y, logs, prod
    if x < 0.5:
        return _ln_gamma(x + 1.0, threshold) - log(x)
    if x < 1.5:
        return _lgamma_near_one(x - 1.0)
    if x < 2.5:
        return _lgamma_near_two(x - 2.0)
    if x < threshold:
        shift = <int>(x - 1.5)
        y = x - shift
        logs = 0.0
        prod = 1.0
        for j in range(1, shift + 1):
            prod *= x - j
            if prod > 1e280:
                logs += log(prod)
                prod = 1.0
        return _lgamma_near_two(y - 2.0) + logs + log(prod)
    return _lgamma_stirling(x)


def ln_gamma(double x, double threshold):
    return _ln_gamma(x, threshold)


cdef double _factorial(int m) noexcept nogil:
    cdef double out = 1.0
    cdef int i
    for i in range(2, m + 1):
        out *= i
    return out


cdef double _polygamma_asymptotic(int m, double x) noexcept nogil:
    cdef double inv = 1.0 / x, inv2 = inv * inv, total, power, term, fact_m1, xm, ratio
    cdef int k
    if m == 0:
        total = log(x) - 0.5 * inv
        power = inv2
        for k in range(1, NBERN + 1):
            term = B2K[k - 1] / (2 * k) * power
            total -= term
            if fabs(term) < TINY * fabs(total):
                break
            power *= inv2
        return total
    fact_m1 = _factorial(m - 1)
    xm = inv ** m
    total = fact_m1 * xm + 0.5 * fact_m1 * m * xm * inv
    ratio = _factorial(m + 1) / 2.0
    power = xm * inv2
    for k in range(1, NBERN + 1):
        term = B2K[k - 1] * ratio * power
        total += term
        if fabs(term) < TINY * fabs(total):
            break
        ratio *= (<double>(2 * k + m)) * (2 * k + m + 1) / ((2 * k + 1) * (2 * k + 2))
        power *= inv2
    return total if m % 2 == 1 else -total


cdef double _polygamma(int m, double x, double threshold) noexcept nogil:
    cdef double target = threshold + m, acc = 0.0, value
    while x < target:
        acc += x ** (-m - 1)
        x += 1.0
    value = _polygamma_asymptotic(m, x)
    if m % 2 == 0:
        return value - _factorial(m) * acc
    return value + _factorial(m) * acc


def polygamma(int m, double x, double threshold):
    return _polygamma(m, x, threshold)


cdef double complex _clog(double complex z) noexcept nogil:
    return log(hypot(z.real, z.imag)) + 1j * _atan2(z.imag, z.real)


cdef double complex _clgamma_one(double complex z) noexcept nogil:
    cdef double complex acc, t
    cdef int i
    z = z - 1.0
    acc = LC[0]
    for i in range(1, 9):
        acc = acc + LC[i] / (z + i)
    t = z + LANCZOS_G + 0.5
    return HALF_LOG_2PI + (z + 0.5) * _clog(t) - t + _clog(acc)


def clgamma(const double complex[::1] z, double complex[::1] out):
    cdef Py_ssize_t i
    with nogil:
        for i in range(z.shape[0]):
            out[i] = _clgamma_one(z[i])


def tridiag_ql(double[::1] d, double[::1] e, double[::1] z):
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t l, m, i
    cdef int iters, sweeps = 0
    cdef double dd, g, r, s, c, p, f, b
    cdef bint underflow
    e[n - 1] = 0.0
    with nogil:
        for l in range(n):
            iters = 0
            while True:
                m = l
                while m < n - 1:
                    dd = fabs(d[m]) + fabs(d[m + 1])
                    if fabs(e[m]) <= EPS * dd:
                        break
                    m += 1
                if m == l:
                    break
                iters += 1
                sweeps += 1
                if iters > 60:
                    sweeps = -1
                    break
                g = (d[l + 1] - d[l]) / (2.0 * e[l])
                r = hypot(g, 1.0)
                g = d[m] - d[l] + e[l] / (g + copysign(r, g))
                s = 1.0
                c = 1.0
                p = 0.0
                i = m - 1
                underflow = False
                while i >= l:
                    f = s * e[i]
                    b = c * e[i]
                    r = hypot(f, g)
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
            if sweeps < 0:
                break
    return sweeps


def refine_rule(double s, double[::1] x, double[::1] w, int newton_steps):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t j, k
    cdef int it
    cdef double xi, p_prev, p, dp_prev, dp, p_next, dp_next, alpha, step, lo, hi
    cdef double total, log_scale
    cdef double ln10x200 = 200.0 * log(10.0)
    cdef double *b = <double *> malloc((n + 1) * sizeof(double))
    cdef double *x0 = <double *> malloc(n * sizeof(double))
    if b == NULL or x0 == NULL:
        free(b)
        free(x0)
        raise MemoryError()
    try:
        with nogil:
            for k in range(n + 1):
                b[k] = sqrt(k * (k + s))
            for it in range(newton_steps):
                for j in range(n):
                    x0[j] = x[j]
                for j in range(n):
                    xi = x0[j]
                    p_prev = 0.0
                    p = 1.0
                    dp_prev = 0.0
                    dp = 0.0
                    for k in range(n):
                        alpha = 2 * k + s + 1
                        p_next = ((xi - alpha) * p - b[k] * p_prev) / b[k + 1]
                        dp_next = ((xi - alpha) * dp + p - b[k] * dp_prev) / b[k + 1]
                        p_prev = p
                        p = p_next
                        dp_prev = dp
                        dp = dp_next
                        if fabs(p) > 1e150:
                            p_prev *= 1e-150
                            p *= 1e-150
                            dp_prev *= 1e-150
                            dp *= 1e-150
                    step = p / dp
                    lo = x0[j] - x0[j - 1] if j > 0 else INFINITY
                    hi = x0[j + 1] - x0[j] if j < n - 1 else INFINITY
                    if isfinite(step) and fabs(step) < 0.25 * (lo if lo < hi else hi):
                        x[j] = xi - step
            for j in range(n):
                xi = x[j]
                p_prev = 0.0
                p = 1.0
                total = 1.0
                log_scale = 0.0
                for k in range(n - 1):
                    alpha = 2 * k + s + 1
                    p_next = ((xi - alpha) * p - b[k] * p_prev) / b[k + 1]
                    p_prev = p
                    p = p_next
                    total += p * p
                    if fabs(p) > 1e100:
                        p_prev *= 1e-100
                        p *= 1e-100
                        total *= 1e-200
                        log_scale += ln10x200
                w[j] = exp(-log(total) - log_scale)
    finally:
        free(b)
        free(x0)
