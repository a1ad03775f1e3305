"""Compare the compiled kernels with the NumPy fallback.

    python benchmarks/bench_kernels.py [--repeats 5]

Times batch insertion into a 100x100 soft/result archive pair and the
rank-k direction transform at a few sizes, then prints the speedup.
"""

import argparse
import timeit

import numpy as np

from qdmae import _pykernels

try:
    from qdmae import _ckernels
except ImportError:
    _ckernels = None


def insert_case(module, batch, cells=10_000, seed=0):
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, cells, batch).astype(np.int64)
    f = rng.uniform(0, 100, batch)
    valid = np.ones(batch, dtype=np.uint8)

    def run():
        threshold = np.zeros(cells)
        soft_obj, result_obj = np.zeros(cells), np.zeros(cells)
        soft_occ = np.zeros(cells, dtype=np.uint8)
        result_occ = np.zeros(cells, dtype=np.uint8)
        module.insert_batch(idx, f, valid, 0.01, threshold, soft_obj,
                            soft_occ, result_obj, result_occ)

    return run


def transform_case(module, n, k, batch=40, seed=0):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((batch, n))
    directions = rng.standard_normal((k, n))
    decay = 1.5 ** -np.arange(k) / n
    return lambda: module.lm_transform(z, directions, decay, k)


def best_of(fn, repeats):
    number = max(1, int(0.05 / max(timeit.timeit(fn, number=1), 1e-7)))
    return min(timeit.repeat(fn, number=number, repeat=repeats)) / number


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; nothing to compare")
        return 1

    cases = [(f"insert batch={b}", lambda m, b=b: insert_case(m, b))
             for b in (40, 200, 10_000)]
    cases += [(f"lm_transform n={n} k={k}",
               lambda m, n=n, k=k: transform_case(m, n, k))
              for n, k in ((100, 40), (1000, 40), (1000, 200))]

    print(f"{'case':<28}{'numpy us':>12}{'cython us':>12}{'speedup':>10}")
    for label, make in cases:
        py = best_of(make(_pykernels), args.repeats) * 1e6
        cy = best_of(make(_ckernels), args.repeats) * 1e6
        print(f"{label:<28}{py:>12.1f}{cy:>12.1f}{py / cy:>9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
