"""Time the exact hyperplane scan on both backends.

    python benchmarks/bench_kernels.py --sizes 40 80 160 --m 2 3
"""
import argparse
import time

import numpy as np

from trimclass import _pykernels

try:
    from trimclass import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[40, 80, 160])
    ap.add_argument("--m", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; only the numpy fallback is timed")
    print(f"{'m':>2} {'n':>5} {'python s':>10} {'cython s':>10} {'speedup':>8}  same")
    rng = np.random.default_rng(args.seed)
    for m in args.m:
        for n in args.sizes:
            X = np.ascontiguousarray(rng.standard_normal((n, m)))
            y = (X[:, 0] + 0.8 * rng.standard_normal(n) >= 0).astype(np.int8)
            init = min(int(y.sum()), n - int(y.sum()))
            tp, rp = best_of(lambda: _pykernels.best_hyperplane(X, y, m, init), args.repeat)
            if _ckernels is None:
                print(f"{m:>2} {n:>5} {tp:>10.4f} {'-':>10} {'-':>8}  -")
                continue
            tc, rc = best_of(lambda: _ckernels.best_hyperplane(X, y, m, init), args.repeat)
            print(f"{m:>2} {n:>5} {tp:>10.4f} {tc:>10.4f} {tp / tc:>8.1f}  {rp == rc}")


if __name__ == "__main__":
    main()
