"""Benchmark the compiled simplex kernel against the pure numpy fallback.

Two workloads: raw dense LPs of growing size, and end-to-end deficiency
solves on random experiment pairs (the deficiency LP dominates the
toolkit's runtime).  Both lanes must return identical optima; the script
asserts that while timing.

Usage: python benchmarks/bench_lp.py [--repeat N] [--seed S]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from expcompare import LinearProgram, lp
from expcompare._samplers import labeled, random_distribution, random_markov
from expcompare.compare import directed_deficiency


def random_program(rng: np.random.Generator, m: int, n: int) -> LinearProgram:
    c = rng.uniform(-1.0, 1.0, n)
    a_ub = rng.uniform(-1.0, 1.0, (m, n))
    b_ub = rng.uniform(0.5, 2.0, m)
    box = np.eye(n)
    return LinearProgram(
        c,
        a_ub=np.vstack([a_ub, box]),
        b_ub=np.concatenate([b_ub, np.full(n, 10.0)]),
    )


def time_lane(kernel: str, fn, items) -> tuple[float, list]:
    lp.use_kernel(kernel)
    values = []
    start = time.perf_counter()
    for item in items:
        values.append(fn(item))
    return time.perf_counter() - start, values


def bench(label: str, fn, items) -> None:
    lanes = lp.available_kernels()
    timings = {}
    values = {}
    for lane in lanes:
        timings[lane], values[lane] = time_lane(lane, fn, items)
    if "compiled" in lanes and "pure-python" in lanes:
        assert values["compiled"] == values["pure-python"], f"lane mismatch on {label}"
        speedup = timings["pure-python"] / timings["compiled"]
        print(
            f"{label:<34} pure {1e3 * timings['pure-python']:9.1f} ms   "
            f"compiled {1e3 * timings['compiled']:9.1f} ms   x{speedup:.2f}"
        )
    else:
        lane = lanes[0]
        print(f"{label:<34} {lane} {1e3 * timings[lane]:9.1f} ms (single lane)")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=10, help="programs per size")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(f"kernels available: {', '.join(lp.available_kernels())}")
    default = lp.active_kernel()

    rng = np.random.default_rng(args.seed)
    for m, n in ((15, 20), (40, 60), (80, 120)):
        programs = [random_program(rng, m, n) for _ in range(args.repeat)]
        bench(
            f"dense LP  m={m:<3} n={n:<3}",
            lambda p: lp.solve(p).value,
            programs,
        )

    for size in (3, 5, 8):
        pairs = []
        for _ in range(args.repeat):
            unknowns = labeled("t", size)
            e = random_markov(rng, unknowns, labeled("z", size))
            e2 = random_markov(rng, unknowns, labeled("w", size))
            pairs.append((e, e2, random_distribution(rng, unknowns)))
        bench(
            f"deficiency |T|=|Z|=|W|={size}",
            lambda item: directed_deficiency(*item).value,
            pairs,
        )

    lp.use_kernel(default)


if __name__ == "__main__":
    main()
