"""Compiled kernels vs the numpy fallback.

    python3 benchmarks/bench_kernels.py [--sizes 2000 8000] [--svd 60 120] [--repeat 3]

Times Sturm bisection (a slice of the spectrum of a discrete Schrodinger
operator, as used by the heat-trace oracle and the Dirichlet box) and the
one-sided Jacobi SVD (singular-value decay), and checks both backends agree.
"""
import argparse
import time

import numpy as np

from isoresonance import _fallback

try:
    from isoresonance import _kernels
except ImportError:  # extension not built
    _kernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def schrodinger_tridiagonal(n, h=1e-3):
    x = -0.5 * n * h + h * np.arange(1, n + 1)
    v = np.where(np.abs(x) < 1.0, -10.0, 0.0)
    return 2.0 / h ** 2 + v, np.full(n - 1, -1.0 / h ** 2)


def bench_bisection(n, count, repeat):
    d, e = schrodinger_tridiagonal(n)
    lo, hi = float(d.min() - 4e6), float(d.max() + 4e6)
    rows = []
    for name, mod in (("compiled", _kernels), ("python", _fallback)):
        if mod is None:
            continue
        t, ev = best_of(lambda: np.asarray(mod.bisect_eigenvalues(d, e, 0, count, lo, hi, 0.0)),
                        repeat)
        rows.append((name, t, ev))
    return rows


def bench_svd(n, repeat):
    rng = np.random.default_rng(0)
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rows = []
    for name, mod in (("compiled", _kernels), ("python", _fallback)):
        if mod is None:
            continue
        t, (sv, _) = best_of(lambda: mod.jacobi_singular_values(A), repeat)
        rows.append((name, t, np.asarray(sv)))
    return rows


def report(title, rows, rel=False):
    base = rows[-1][1]
    for name, t, _ in rows:
        print(f"  {title:<28s} {name:<9s} {t * 1e3:10.2f} ms   x{base / t:6.1f}")
    if len(rows) == 2:
        a, b = rows[0][2], rows[1][2]
        err = np.max(np.abs(a - b)) / (np.max(np.abs(b)) if rel else 1.0)
        print(f"  {'':<28s} max |compiled - python| = {err:.2e}")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[2000, 8000])
    p.add_argument("--count", type=int, default=50, help="eigenvalues per bisection run")
    p.add_argument("--svd", type=int, nargs="+", default=[60, 120])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    if _kernels is None:
        print("compiled extension not available; timing the fallback only")
    print("Sturm bisection")
    for n in args.sizes:
        report(f"n = {n}, {args.count} eigenvalues", bench_bisection(n, args.count, args.repeat))
    print("one-sided Jacobi SVD")
    for n in args.svd:
        report(f"{n} x {n} complex", bench_svd(n, args.repeat), rel=True)


if __name__ == "__main__":
    main()
