"""Numeric tables shared by the compiled and pure-Python kernels."""
from fractions import Fraction
from math import pi, log


def _bernoulli_even(count):
    # Akiyama-Tanigawa; returns B_2, B_4, ..., B_{2*count} exactly.
    size = 2 * count + 1
    a = [Fraction(0)] * (size + 1)
    out = []
    for m in range(size + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m >= 2 and m % 2 == 0:
            out.append(a[0])
    return out


BERNOULLI_2K_EXACT = tuple(_bernoulli_even(30))
BERNOULLI_2K = tuple(float(b) for b in BERNOULLI_2K_EXACT)

EULER_GAMMA = 0.57721566490153286060651209
HALF_LOG_2PI = 0.5 * log(2.0 * pi)

# Lanczos approximation, g = 7, nine terms.
LANCZOS_G = 7.0
LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# Terms of the Taylor series of log-gamma about 1 and 2.
LOG_GAMMA_SERIES_TERMS = 64
