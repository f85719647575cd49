"""Compiled vs fallback kernel timings.

Run with ``python3 benchmarks/bench_kernels.py``. The fallback is the numpy
p-Laplacian term and the pure-Python RK4 loop used when the extension is
missing or ``PLAP_PURE_PYTHON=1`` is set.
"""
import argparse
import timeit

import numpy as np

from plap import kernels


def _best(fn, number, repeat=5):
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def bench_plap_term(M, p, number):
    x = np.random.default_rng(0).standard_normal((M, 2))
    rows = [("plap_term python", M, _best(lambda: kernels.plap_term_py(x, 0.01, p, 1e-10), number))]
    if kernels.BACKEND == "compiled":
        rows.append(("plap_term compiled", M, _best(lambda: kernels.plap_term(x, 0.01, p, 1e-10), number)))
    return rows


def bench_return_time(p, number):
    args = (4.0, p, 1e-10, 1e-3, 10 ** 6)
    rows = [("rk4_return_time python", 0, _best(lambda: kernels.rk4_return_time_py(*args), number, repeat=3))]
    if kernels.BACKEND == "compiled":
        rows.append(("rk4_return_time compiled", 0, _best(lambda: kernels.rk4_return_time(*args), number)))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=float, default=3.0)
    ap.add_argument("--sizes", default="256,4096,65536")
    args = ap.parse_args()
    print(f"backend: {kernels.BACKEND}")
    rows = []
    for M in (int(s) for s in args.sizes.split(",")):
        rows += bench_plap_term(M, args.p, number=max(1, 200000 // M))
    rows += bench_return_time(args.p, number=1)
    print(f"{'kernel':28s} {'M':>7s} {'seconds/call':>14s}")
    for name, M, t in rows:
        print(f"{name:28s} {M or '-':>7} {t:14.3e}")


if __name__ == "__main__":
    main()
