"""Compare the compiled piecewise-lookup kernels against the pure-NumPy
fallback on large query batches.

Run:  python3 benchmarks/bench_kernels.py [n_points ...]

The compiled backend must be importable for a meaningful comparison; the
script reports both timings and the speedup per kernel.
"""

import sys
import time

import numpy as np

from homoglab import _kernels
from homoglab._kernels import _pure


def make_inputs(n_segments, n_points, rng):
    knots = np.sort(rng.uniform(0.0, 1.0, n_segments + 1))
    knots[0], knots[-1] = 0.0, 1.0
    vals = rng.uniform(0.5, 2.0, n_segments)
    slopes = rng.uniform(-1.0, 1.0, n_segments)
    curvs = rng.uniform(-0.5, 0.5, n_segments)
    x = rng.uniform(0.0, 1.0, n_points)
    return knots, vals, slopes, curvs, x


def time_call(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv):
    sizes = [int(a) for a in argv[1:]] or [1_000_000, 10_000_000]
    if _kernels.BACKEND != "compiled":
        print(
            f"warning: active backend is {_kernels.BACKEND!r}; "
            "both columns below will time the same code"
        )
    rng = np.random.default_rng(12345)
    print(f"{'kernel':<14}{'points':>12}{'compiled [s]':>14}{'pure [s]':>12}{'speedup':>9}")
    for n_points in sizes:
        knots, vals, slopes, curvs, x = make_inputs(512, n_points, rng)
        cases = [
            ("pwconst_eval", (knots, vals, x)),
            ("pwlin_eval", (knots, vals, slopes, x)),
            ("pwquad_eval", (knots, vals, slopes, curvs, x)),
        ]
        for name, args in cases:
            fast = time_call(getattr(_kernels, name), *args)
            pure = time_call(getattr(_pure, name), *args)
            ref = np.asarray(getattr(_pure, name)(*args))
            got = np.asarray(getattr(_kernels, name)(*args))
            assert np.array_equal(ref, got), f"{name}: backends disagree"
            print(f"{name:<14}{n_points:>12}{fast:>14.4f}{pure:>12.4f}{pure / fast:>9.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
