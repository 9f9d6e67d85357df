"""Compare the compiled and pure-Python kernels on the hot paths.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times Gauss-Laguerre rule construction (QL solve plus Newton/Christoffel
refinement), scalar log-gamma, polygamma and zeta calls, and the vectorized
complex log-gamma used by inversion. Also reports the largest difference
between the two backends' outputs.
"""
import argparse
import timeit

import numpy as np

from tmellin._backend import compiled, pure
from tmellin.quadrature import jacobi_matrix
from tmellin.specfun import SpecFunConfig


def rule(kern, s, n):
    d, e = jacobi_matrix(s, n)
    z = np.zeros(n)
    z[0] = 1.0
    kern.tridiag_ql(d, e, z)
    order = np.argsort(d)
    x, w = d[order].copy(), (z[order] ** 2).copy()
    kern.refine_rule(s, x, w, 2)
    return x, w


def scalar_calls(kern, xs):
    cfg = SpecFunConfig()
    out = 0.0
    for x in xs:
        out += kern.ln_gamma(x, cfg.asymptotic_threshold)
        out += kern.polygamma(2, x, cfg.asymptotic_threshold)
        out += kern.zeta(1.0 + x, cfg.series_terms)
    return out


def complex_lgamma(kern, z):
    out = np.empty_like(z)
    kern.clgamma(z, out)
    return out


def cases():
    xs = np.linspace(0.1, 60.0, 2000)
    z = np.ascontiguousarray(1.5 + 1j * np.linspace(-40.0, 40.0, 4001))
    return [
        ("rule s=0.5 n=64", lambda k: rule(k, 0.5, 64)),
        ("rule s=3.0 n=256", lambda k: rule(k, 3.0, 256)),
        ("rule s=10.0 n=512", lambda k: rule(k, 10.0, 512)),
        ("ln_gamma+polygamma+zeta x2000", lambda k: scalar_calls(k, xs)),
        ("complex ln_gamma x4001", lambda k: complex_lgamma(k, z)),
    ]


def max_diff(a, b):
    if isinstance(a, tuple):
        return max(max_diff(x, y) for x, y in zip(a, b))
    a, b = np.asarray(a), np.asarray(b)
    scale = np.maximum(np.abs(b), np.finfo(float).tiny)
    return float(np.max(np.abs(a - b) / scale))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    ck = compiled()
    if ck is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation` first")
    print(f"{'case':32s} {'python [s]':>12s} {'cython [s]':>12s} {'speedup':>9s} {'max rel diff':>13s}")
    for name, fn in cases():
        t_py = min(timeit.repeat(lambda: fn(pure), number=1, repeat=args.repeat))
        if ck is None:
            print(f"{name:32s} {t_py:12.4g} {'-':>12s} {'-':>9s} {'-':>13s}")
            continue
        t_c = min(timeit.repeat(lambda: fn(ck), number=1, repeat=args.repeat))
        diff = max_diff(fn(ck), fn(pure))
        print(f"{name:32s} {t_py:12.4g} {t_c:12.4g} {t_py / t_c:8.1f}x {diff:13.2e}")


if __name__ == "__main__":
    main()
