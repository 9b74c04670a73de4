"""Compare the compiled kernels with the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat R]
"""
import argparse
import timeit

import numpy as np

from roughsig import _pykernels
from roughsig._layout import tensor_size

try:
    from roughsig import _ckernels
except ImportError:
    _ckernels = None

CASES = [(2, 4, 200), (3, 4, 200), (3, 6, 20), (5, 3, 500)]


def bench(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    mods = {"python": _pykernels}
    if _ckernels is not None:
        mods["cython"] = _ckernels
    else:
        print("compiled extension not built; timing the fallback only")
    print(f"{'kernel':<14}{'d':>3}{'N':>3}{'rows':>6}" + "".join(f"{m:>12}" for m in mods) + f"{'speedup':>10}")
    for d, depth, m in CASES:
        size = tensor_size(d, depth)
        a, b = rng.normal(size=(2, m, size))
        v = 0.3 * rng.normal(size=(m, d))
        jobs = {
            "mul": lambda k: k.mul(a, b, d, depth),
            "exp": lambda k: k.exp_increments(v, d, depth),
            "chen_prefix": lambda k: k.chen_prefix(v, d, depth),
        }
        for name, job in jobs.items():
            times = {mn: bench(lambda: job(k), args.repeat) for mn, k in mods.items()}
            row = f"{name:<14}{d:>3}{depth:>3}{m:>6}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times.values())
            if "cython" in times:
                row += f"{times['python'] / times['cython']:>9.1f}x"
            print(row)


if __name__ == "__main__":
    main()
