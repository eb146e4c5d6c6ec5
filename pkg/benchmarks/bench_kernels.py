#!/usr/bin/env python3
"""Benchmark: compiled HALS kernel vs the pure-NumPy fallback.

Times the alternating nonnegative least-squares core on the workloads that
dominate the acceptance suite (multi-restart searches on small kernel and
Robbins-type matrices) plus one larger random fit.  Both backends run the
same seeded problems; outcomes are cross-checked before timings are printed.

Usage: python benchmarks/bench_kernels.py [--repeats 3]
"""

import argparse
import math
import time

import numpy as np

from conerank import GridSpec, robbins_matrix, sample_kernel
from conerank._kernels import _hals_py

try:
    from conerank._kernels import _hals_cy
except ImportError:
    _hals_cy = None


def philox_init(m, n, k, mean, seed, restart):
    gen = np.random.Generator(np.random.Philox(key=np.array([seed, restart], dtype=np.uint64)))
    scale = math.sqrt(mean / k) if mean > 0 else 1.0
    L = np.ascontiguousarray((1.0 - gen.random((m, k))) * scale)
    R = np.ascontiguousarray((1.0 - gen.random((k, n))) * scale)
    return L, R


def run_search(backend, T, k, restarts, iters, fit_tol):
    m, n = T.shape
    mean = float(T.mean())
    best = math.inf
    found_at = None
    for r in range(restarts):
        L, R = philox_init(m, n, k, mean, 0, r)
        res, _, _ = backend.hals_fit(T, L, R, iters, fit_tol)
        best = min(best, res)
        if res <= fit_tol:
            found_at = r
            break
    return best, found_at


def bench_case(name, T, k, restarts, iters, fit_tol, repeats):
    rows = []
    outcomes = {}
    for label, backend in (("python", _hals_py), ("cython", _hals_cy)):
        if backend is None:
            continue
        times = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            best, found_at = run_search(backend, T, k, restarts, iters, fit_tol)
            times.append(time.perf_counter() - t0)
        outcomes[label] = (best <= fit_tol, found_at)
        rows.append((label, min(times), best))
    if len(outcomes) == 2 and outcomes["python"][0] != outcomes["cython"][0]:
        raise SystemExit(f"{name}: backends disagree on success: {outcomes}")
    print(f"\n{name}  (k={k}, restarts={restarts}, iters={iters})")
    base = None
    for label, t, best in rows:
        speed = "" if base is None else f"  speedup x{base / t:.1f}"
        if base is None:
            base = t
        print(f"  {label:7s} {t * 1e3:9.1f} ms   best residual {best:.2e}{speed}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    if _hals_cy is None:
        print("compiled kernel not available; timing the fallback only")

    robbins = robbins_matrix().to_float().data
    K8 = sample_kernel(GridSpec(8), GridSpec(8)).data
    gen = np.random.Generator(np.random.Philox(key=np.array([7, 0], dtype=np.uint64)))
    big = gen.random((20, 8)) @ gen.random((8, 20))

    bench_case("robbins k=3 (no fit exists)", np.ascontiguousarray(robbins), 3, 64, 500, 1e-9, args.repeats)
    bench_case("robbins k=4 (fit found)", np.ascontiguousarray(robbins), 4, 64, 500, 1e-9, args.repeats)
    bench_case("kernel n=8, k=6 (fit found)", np.ascontiguousarray(K8), 6, 64, 5000, 1e-9, args.repeats)
    bench_case("kernel n=8, k=5 (no fit exists)", np.ascontiguousarray(K8), 5, 64, 5000, 1e-9, args.repeats)
    bench_case("random 20x20, k=8", np.ascontiguousarray(big), 8, 8, 2000, 1e-9, args.repeats)


if __name__ == "__main__":
    main()
