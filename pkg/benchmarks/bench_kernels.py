"""Time the compiled and pure-Python integration kernels side by side.

    python benchmarks/bench_kernels.py [--steps N] [--repeat R]
"""

import argparse
import time

import numpy as np

from curvpend import kernels

CASES = {
    "rigid_leapfrog": lambda m, n: m.rigid_leapfrog(1.0, 0.0, 1.0, 1.0, 1e-3, n, 100),
    "rigid_rk4": lambda m, n: m.rigid_rk4(1.0, 0.0, 1.0, 1.0, 1e-3, n, 100),
    "elastic_rk4": lambda m, n: m.elastic_rk4(0.5, 0.0, 0.2, 0.0, 1.0, 1.0, 1.0, 10.0, 1e-3, n, 100),
}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = kernels.available()
    print(f"steps={args.steps} repeat={args.repeat} backends={[b.BACKEND for b in backends]}")
    print(f"{'kernel':16s}" + "".join(f"{b.BACKEND + ' [s]':>14s}" for b in backends) + f"{'speedup':>10s}{'max |diff|':>13s}")
    for name, case in CASES.items():
        results = [best_of(lambda b=b: case(b, args.steps), args.repeat) for b in backends]
        row = f"{name:16s}" + "".join(f"{t:14.4f}" for t, _ in results)
        if len(results) == 2:
            speedup = results[1][0] / results[0][0]
            diff = float(np.max(np.abs(results[0][1][1] - results[1][1][1])))
            row += f"{speedup:10.1f}x{diff:13.2e}"
        print(row)


if __name__ == "__main__":
    main()
