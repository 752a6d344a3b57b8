"""Time the per-location loops on both backends at increasing memory
sizes. The decode loop dominates a cycle, so it is timed separately from
the full decode-modulate-update chain.

Run: python3 benchmarks/bench_kernels.py [--sizes 1000,10000,100000]
"""

import argparse
import time

import numpy as np

from emsim import kernels


def bench_backend(name: str, n: int, m: int, repeats: int) -> tuple[float, float]:
    kernels.set_backend(name)
    rng = np.random.default_rng(0)
    gx = rng.integers(0, 5, size=(m, n)).astype(np.int32)
    x = rng.integers(1, 5, size=m).astype(np.int32)
    wx = np.ones(m)
    e = rng.random(n)
    # pay any compile cost outside the timers
    s0 = kernels.decode(gx, x, wx, n)
    kernels.max_written(kernels.modulate(s0, e, 0.4), n)
    kernels.next_e(s0, e, 0.99)

    t0 = time.perf_counter()
    for _ in range(repeats):
        kernels.decode(gx, x, wx, n)
    t_decode = (time.perf_counter() - t0) / repeats

    t0 = time.perf_counter()
    for _ in range(repeats):
        s = kernels.decode(gx, x, wx, n)
        se = kernels.modulate(s, e, 0.4)
        kernels.max_written(se, n)
        e = kernels.next_e(s, e, 0.99)
    t_cycle = (time.perf_counter() - t0) / repeats
    return t_decode, t_cycle


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="1000,10000,100000")
    parser.add_argument("--slots", type=int, default=4)
    parser.add_argument("--repeats", type=int, default=50)
    args = parser.parse_args()
    sizes = [int(v) for v in args.sizes.split(",")]

    backends = ["numpy"] + (["numba"] if kernels.HAS_NUMBA else [])
    print(f"slots={args.slots} repeats={args.repeats}")
    print(f"{'locations':>10} {'backend':>8} {'decode':>12} {'full cycle':>12}")
    for n in sizes:
        for name in backends:
            t_decode, t_cycle = bench_backend(name, n, args.slots, args.repeats)
            print(f"{n:>10} {name:>8} {t_decode * 1e6:>10.1f}us {t_cycle * 1e6:>10.1f}us")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
