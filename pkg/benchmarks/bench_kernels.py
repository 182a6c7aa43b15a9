"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--sizes 100 400 1000] [--repeat 5]

Prints one row per (kernel, n) with the best time of each backend and the
speedup. Exits with status 1 when the compiled module is not built.
"""

import argparse
import sys
import timeit

import numpy as np

from gradmine import _pykernels

try:
    from gradmine import _ckernels
except ImportError:
    _ckernels = None


def cases(n, rng):
    values = rng.integers(0, n // 4 + 2, n).astype(np.float64)
    other = rng.integers(0, n // 4 + 2, n).astype(np.float64)
    m1 = _pykernels.item_matrix(values, True)
    m2 = _pykernels.item_matrix(other, False)
    # chain_lengths needs an acyclic relation: a joined pattern matrix is one
    joined = np.ascontiguousarray(m1 & m2)
    return {
        "item_matrix": lambda mod: mod.item_matrix(values, True),
        "and_count": lambda mod: mod.and_count(m1, m2),
        "count_ones": lambda mod: mod.count_ones(m1),
        "triangle_counts": lambda mod: mod.triangle_counts(m1),
        "chain_lengths": lambda mod: mod.chain_lengths(joined),
    }


def best(fn, mod, repeat):
    timer = timeit.Timer(lambda: fn(mod))
    loops, _ = timer.autorange()
    return min(timer.repeat(repeat, loops)) / loops


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[100, 400, 1000])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<16} {'n':>6} {'cython ms':>11} {'numpy ms':>11} {'speedup':>8}")
    for n in args.sizes:
        for name, fn in cases(n, rng).items():
            c = best(fn, _ckernels, args.repeat)
            p = best(fn, _pykernels, args.repeat)
            print(f"{name:<16} {n:>6} {c * 1e3:>11.3f} {p * 1e3:>11.3f} {p / c:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
