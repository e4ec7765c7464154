"""Timing of the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--rows 200] [--n 65536]
"""

import argparse
import time

import numpy as np

from skewmax import _fallback
from skewmax.sampler import HalfSkew, RngStream, _model_params

try:
    from skewmax import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=200)
    ap.add_argument("--n", type=int, default=2**16)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    mcode, r1, s1, r2, s2 = _model_params(HalfSkew(0.6))
    backends = [("python", _fallback)] + ([("cython", _kernels)] if _kernels is not None else [])
    count = args.rows * args.n
    results = {}
    for name, mod in backends:
        t_u, u = best_of(lambda: mod.philox_pairs(271828, 0, 0, count), args.repeat)

        def rows():
            return np.array([mod.row_maxima_fused(271828, r, 0, args.n, 1, 0.0, 0.0, mcode, r1, s1, r2, s2)
                             for r in range(args.rows)])

        t_m, m = best_of(rows, args.repeat)
        results[name] = (t_u, t_m, u, m)
        print(f"{name:7s} uniforms {count / t_u / 1e6:8.1f} M pairs/s   "
              f"row maxima {args.rows}x{args.n}: {t_m:.3f} s")
    if len(results) == 2:
        py, cy = results["python"], results["cython"]
        same_u = np.array_equal(py[2], cy[2])
        gap = np.max(np.abs(py[3] - cy[3]) / np.abs(py[3]))
        print(f"speedup: uniforms {py[0] / cy[0]:.2f}x, row maxima {py[1] / cy[1]:.2f}x; "
              f"uniforms identical: {same_u}; max rel diff of maxima {gap:.1e}")
    else:
        print("compiled kernels not built; only the fallback was timed")


if __name__ == "__main__":
    main()
