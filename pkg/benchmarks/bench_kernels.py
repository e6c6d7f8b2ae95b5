"""Timing harness for the batched coordinate kernels.

Compares the compiled-loop path against the einsum fallback on the matrix
product and the Jordan triple, checking agreement while it times. Run with
the package installed:

    python3 benchmarks/bench_kernels.py --batch 2000 --repeats 5
"""

import argparse
import time

import numpy as np

from ucpspace import kernels


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def bench_case(k, n, batch, repeats, rng):
    a = rng.standard_normal((batch, n, n, k))
    b = rng.standard_normal((batch, n, n, k))
    c = rng.standard_normal((batch, n, n, k))

    rows = []
    for label, base, fast in (
        ("matmul", lambda: kernels.matmul_numpy(a, b), lambda: kernels.matmul_numba(a, b)),
        ("triple", lambda: _triple_numpy(a, b, c), lambda: kernels.triple(a, b, c)),
    ):
        ref = base()
        if kernels.USE_NUMBA:
            fast()  # compile before timing
            got = fast()
            gap = float(np.max(np.abs(got - ref)))
            t_np, t_nb = best_of(base, repeats), best_of(fast, repeats)
            rows.append((label, k, n, t_np, t_nb, t_np / t_nb, gap))
        else:
            t_np = best_of(base, repeats)
            rows.append((label, k, n, t_np, None, None, 0.0))
    return rows


def _triple_numpy(a, b, c):
    def mul(x, y):
        return 0.5 * (kernels.matmul_numpy(x, y) + kernels.matmul_numpy(y, x))

    return mul(a, mul(b, c)) - mul(b, mul(c, a)) + mul(c, mul(a, b))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--batch", type=int, default=2000, help="stacked elements per call")
    parser.add_argument("--repeats", type=int, default=5, help="timing repetitions, best kept")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if not kernels.USE_NUMBA:
        print("compiled path disabled (UCPSPACE_NO_NUMBA=1): timing einsum only")

    rng = np.random.default_rng(args.seed)
    header = f"{'kernel':<8} {'k':>2} {'n':>2} {'einsum':>10} {'compiled':>10} {'speedup':>8} {'max diff':>10}"
    print(header)
    print("-" * len(header))
    for k in (1, 2, 4, 8):
        for n in (2, 3):
            for label, kk, nn, t_np, t_nb, speed, gap in bench_case(
                k, n, args.batch, args.repeats, rng
            ):
                if t_nb is None:
                    print(f"{label:<8} {kk:>2} {nn:>2} {t_np:>9.4f}s {'-':>10} {'-':>8} {'-':>10}")
                else:
                    print(
                        f"{label:<8} {kk:>2} {nn:>2} {t_np:>9.4f}s {t_nb:>9.4f}s "
                        f"{speed:>7.1f}x {gap:>10.2e}"
                    )


if __name__ == "__main__":
    main()
