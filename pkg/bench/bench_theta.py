#!/usr/bin/env python3
"""Benchmark the compiled theta kernel against the NumPy fallback.

The theta block sums are the hot inner loop of every wp evaluation: one
genus-2 call accumulates the value and nine derivative monomials over a
(2R+1)^2 block of lattice points.  This script times both backends on the
same workload and checks they agree to machine precision.

Run after installing:  python bench/bench_theta.py [--radius R] [--repeat N]
"""
import argparse
import time

import numpy as np

from g2ell import _theta_py
from g2ell.theta import BACKEND, MONOMIALS_ORDER3

try:
    from g2ell import _theta_cy
except ImportError:
    _theta_cy = None


def bench_g2(kernel, tau, radius, repeat):
    dp = np.array([0.5, 0.5])
    ds = np.array([1.0, 0.5])
    rng = np.random.default_rng(0)
    zs = rng.normal(0, 0.4, (repeat, 2)) + 1j * rng.normal(0, 0.3, (repeat, 2))
    center = np.zeros(2, dtype=np.int64)
    best = np.inf
    out = None
    for _ in range(3):
        t0 = time.perf_counter()
        for z in zs:
            out, _ = kernel.theta_g2_sums(dp, ds, np.ascontiguousarray(z), tau, radius, center, MONOMIALS_ORDER3)
        best = min(best, (time.perf_counter() - t0) / repeat)
    return best, out


def bench_g1(kernel, tau, radius, repeat):
    rng = np.random.default_rng(1)
    zs = rng.normal(0, 0.4, repeat) + 1j * rng.normal(0, 0.3, repeat)
    best = np.inf
    out = None
    for _ in range(3):
        t0 = time.perf_counter()
        for z in zs:
            out, _ = kernel.theta_g1_sums(0.5, 0.5, complex(z), complex(tau), radius, 0, 3)
        best = min(best, (time.perf_counter() - t0) / repeat)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--radius", type=int, default=12, help="block radius")
    parser.add_argument("--repeat", type=int, default=200, help="calls per timing pass")
    args = parser.parse_args()

    tau2 = np.ascontiguousarray(np.array([[0.1 + 0.9j, 0.21 + 0.05j], [0.21 + 0.05j, -0.3 + 1.3j]]))
    tau1 = 0.2 + 1.1j

    print(f"selected backend at import: {BACKEND}")
    print(f"genus-2 block radius {args.radius} -> {(2 * args.radius + 1) ** 2} terms x 10 monomials")

    rows = []
    t_py2, v_py2 = bench_g2(_theta_py, tau2, args.radius, args.repeat)
    rows.append(("genus-2", "numpy", t_py2, None))
    if _theta_cy is not None:
        t_cy2, v_cy2 = bench_g2(_theta_cy, tau2, args.radius, args.repeat)
        agree = float(np.max(np.abs(np.asarray(v_cy2) - np.asarray(v_py2))))
        rows.append(("genus-2", "cython", t_cy2, t_py2 / t_cy2))
        print(f"genus-2 backend agreement: max |diff| = {agree:.3e}")

    t_py1, v_py1 = bench_g1(_theta_py, tau1, 4 * args.radius, args.repeat)
    rows.append(("genus-1", "numpy", t_py1, None))
    if _theta_cy is not None:
        t_cy1, v_cy1 = bench_g1(_theta_cy, tau1, 4 * args.radius, args.repeat)
        agree = float(np.max(np.abs(np.asarray(v_cy1) - np.asarray(v_py1))))
        rows.append(("genus-1", "cython", t_cy1, t_py1 / t_cy1))
        print(f"genus-1 backend agreement: max |diff| = {agree:.3e}")

    print(f"{'kernel':<10} {'backend':<8} {'us/call':>10} {'speedup':>9}")
    for kernel, backend, seconds, speedup in rows:
        tag = f"{speedup:.1f}x" if speedup else "-"
        print(f"{kernel:<10} {backend:<8} {seconds * 1e6:>10.1f} {tag:>9}")
    if _theta_cy is None:
        print("compiled kernel not built; only the fallback was timed")


if __name__ == "__main__":
    main()
