"""Compare the compiled syndrome-sampling kernel against the pure-numpy one.

Both kernels consume the same pregenerated noise tables, so besides the
timing this doubles as a bit-identity check on real workloads.

    python3 benchmarks/bench_sampler.py --shots 20000 --cycles 4
"""

import argparse
import time

import numpy as np

from floqnet import kernels
from floqnet.floquet import honeycomb_schedule
from floqnet.honeycomb import build_honeycomb
from floqnet.noise_mc import (
    NoiseModel,
    draw_noise_tables,
    run_tables,
    windowed_detector_model,
)


def bench(dm, tables, kernel: str, repeats: int):
    run_tables(dm, tables, kernel=kernel)  # warm up
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = run_tables(dm, tables, kernel=kernel)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--shots", type=int, default=20_000)
    parser.add_argument("--cycles", type=int, default=4)
    parser.add_argument("--lx", type=int, default=4)
    parser.add_argument("--ly", type=int, default=4)
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    s = honeycomb_schedule(build_honeycomb(args.lx, args.ly))
    dm = windowed_detector_model(s, args.cycles)
    nm = NoiseModel(p_check=0.01, p_meas_flip=0.005, p_idle=0.002)
    tables = draw_noise_tables(dm, nm, args.shots, args.seed, chunk_index=0)
    events = dm.noisy_events * args.shots

    print(f"lattice {args.lx}x{args.ly} (n={s.n}), {args.cycles} noisy cycles, "
          f"{args.shots} shots, {events} shot-events")
    try:
        kernels.get("compiled")
        names = ["python", "compiled"]
    except ImportError:
        print("compiled kernel unavailable; timing the pure kernel only")
        names = ["python"]

    results = {}
    for name in names:
        elapsed, out = bench(dm, tables, name, args.repeats)
        results[name] = (elapsed, out)
        print(f"{name:>9}: {elapsed:8.4f} s  "
              f"({events / elapsed / 1e6:7.2f} M shot-events/s)")

    if len(results) == 2:
        (tp, op), (tc, oc) = results["python"], results["compiled"]
        same = all(np.array_equal(a, b) for a, b in zip(op, oc))
        print(f"speedup: {tp / tc:.1f}x; outputs bit-identical: {same}")
        if not same:
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
