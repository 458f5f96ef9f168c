"""Time the numba and numpy kernel backends on the same random workloads.

    python benchmarks/bench_kernels.py [--sizes 14 16 18] [--repeat 3]
"""

import argparse
import time

import numpy as np

from solp.kernels import HAVE_NUMBA, RuleArrays, answer_set_masks, consequence_scan
from solp.oracle import answer_sets
from solp.random_gen import random_collection
from solp.translate import translate_all


def random_rules(rng, k, m, counts=False):
    rows = []
    for _ in range(m):
        head = int(rng.integers(-1, k))
        pos = int(rng.integers(0, 1 << k)) & int(rng.integers(0, 1 << k)) & int(rng.integers(0, 1 << k))
        neg = int(rng.integers(0, 1 << k)) & int(rng.integers(0, 1 << k)) & int(rng.integers(0, 1 << k)) & ~pos
        cnt = None
        if counts and rng.random() < 0.2:
            cnt = (int(rng.integers(0, 1 << k)), 1, 2)
        rows.append((head, pos, neg, cnt))
    return RuleArrays(rows)


def best(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[12, 14, 16, 18])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy backend can run")
    rng = np.random.default_rng(args.seed)
    backends = ("numba", "numpy") if HAVE_NUMBA else ("numpy",)

    # warm the JIT so compile time is not measured
    warm = random_rules(rng, 4, 4, counts=True)
    for b in backends:
        consequence_scan(random_rules(rng, 4, 4), 4, b)
        answer_set_masks(warm, 4, b)

    print(f"{'kernel':<18}{'bits':>5}{'rules':>7}" + "".join(f"{b:>12}" for b in backends))
    for k in args.sizes:
        ra = random_rules(rng, k, 2 * k)
        row = [best(lambda: consequence_scan(ra, k, b), args.repeat) for b in backends]
        print(f"{'consequence_scan':<18}{k:>5}{len(ra):>7}" + "".join(f"{t:>11.4f}s" for t in row))
    for k in args.sizes:
        ra = random_rules(rng, k, 2 * k, counts=True)
        row = [best(lambda: answer_set_masks(ra, k, b), args.repeat) for b in backends]
        print(f"{'answer_set_masks':<18}{k:>5}{len(ra):>7}" + "".join(f"{t:>11.4f}s" for t in row))

    progs = [translate_all(random_collection(s, max_depth=2, max_scs=3)) for s in range(100)]
    row = [best(lambda: [answer_sets(p, "structured", backend=b) for p in progs], args.repeat) for b in backends]
    print(f"{'structured x100':<18}{'':>5}{'':>7}" + "".join(f"{t:>11.4f}s" for t in row))


if __name__ == "__main__":
    main()
