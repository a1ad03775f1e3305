"""Per-solution ask+tell timing of the ES backends."""

import csv
import time

import numpy as np

from ..es import ALGORITHMS, RankedBatch, make_es

VARIANTS = ("openai-es", "sep-cma-es", "lm-ma-es", "cma-es")


def time_per_solution(variant, n, generations=50, batch_size=40, seed=0,
                      warmup=3):
    """Mean wall time (microseconds) of ask+tell per sampled solution.

    The objective is a synthetic quadratic; evaluation time is excluded.
    The FullCma eigendecomposition runs every ``n // batch_size``
    generations, so ``generations`` should cover several of those periods.
    """
    variant = ALGORITHMS.get(variant, variant)
    es = make_es(variant, np.zeros(n), 0.5, batch_size, k=batch_size)
    rng = np.random.default_rng(seed)
    center = np.full(n, 0.5)
    elapsed = 0.0
    for g in range(warmup + generations):
        start = time.perf_counter()
        x = es.ask(rng)
        ask_time = time.perf_counter() - start
        f = -np.sum((x - center) ** 2, axis=1)
        batch = RankedBatch(x, f, f)
        start = time.perf_counter()
        es.tell(batch)
        tell_time = time.perf_counter() - start
        if g >= warmup:
            elapsed += ask_time + tell_time
    return elapsed / (generations * batch_size) * 1e6


def bench_complexity(dims, variants=VARIANTS, generations=50, batch_size=40,
                     out_path=None, repeats=3):
    """Time every variant at every dimension; optionally write a CSV.

    Each entry is the minimum over ``repeats`` measurements, which damps
    scheduler noise on shared machines.
    """
    rows = []
    for variant in variants:
        name = ALGORITHMS.get(variant, variant)
        for n in dims:
            best = min(time_per_solution(name, n, generations, batch_size,
                                         seed=r)
                       for r in range(repeats))
            rows.append((name, int(n), best))
    if out_path is not None:
        with open(out_path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["variant", "n", "us_per_solution"])
            for name, n, us in rows:
                writer.writerow([name, n, f"{us:.3f}"])
    return rows
