"""Time the compiled commutator kernel against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--sizes 2 4 8 16] [--repeat 2000]
"""

import argparse
import timeit

import numpy as np

from normcorner import _kernels_py

try:
    from normcorner import _kernels as compiled
except ImportError:
    compiled = None


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[2, 4, 6, 8, 12, 16])
    parser.add_argument("--repeat", type=int, default=2000)
    args = parser.parse_args()
    if compiled is None:
        print("compiled extension not built; only the numpy timings are shown")
    rng = np.random.default_rng(0)
    print(f"{'size':>5} {'numpy us':>10} {'cython us':>10} {'speedup':>8}")
    for m in args.sizes:
        N = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        t_py = min(timeit.repeat(lambda: _kernels_py.commutator_objective(N), number=args.repeat, repeat=3))
        t_py *= 1e6 / args.repeat
        if compiled is None:
            print(f"{m:>5} {t_py:>10.2f} {'-':>10} {'-':>8}")
            continue
        t_c = min(timeit.repeat(lambda: compiled.commutator_objective(N), number=args.repeat, repeat=3))
        t_c *= 1e6 / args.repeat
        print(f"{m:>5} {t_py:>10.2f} {t_c:>10.2f} {t_py / t_c:>7.2f}x")


if __name__ == "__main__":
    main()
