"""Compare census backends: compiled kernel vs pure numpy.

    python3 benchmarks/bench_census.py [--d 2 3 4 5] [--repeat 3] [--large]

``--large`` adds a d=7 run on the compiled kernel only; it scans
C(49, 7) = 85,900,584 subsets.
"""
from __future__ import annotations

import argparse
import statistics
import time
from math import comb

from olsmub.hvm.census import available_backends, census
from olsmub.qmub.bases import mubs_for


def bench(d: int, backend: str, repeat: int, threads: int) -> tuple[float, int]:
    mubs = mubs_for(d)
    times, q = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        r = census(d, mubs, threads=threads, backend=backend, allow_large=True)
        times.append(time.perf_counter() - t0)
        q = r.Q
    return statistics.median(times), q


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--d", type=int, nargs="+", default=[2, 3, 4, 5])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--large", action="store_true")
    args = ap.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}  threads={args.threads}")
    print(f"{'d':>2} {'backend':<9} {'Q':>4} {'median s':>10} {'states/s':>14} {'speedup':>8}")
    for d in args.d:
        base = None
        for b in reversed(backends):  # python first, so speedup is relative to it
            secs, q = bench(d, b, args.repeat, args.threads)
            rate = comb(d * d, d) / secs
            base = base or secs
            print(f"{d:>2} {b:<9} {q:>4} {secs:>10.4f} {rate:>14,.0f} {base / secs:>7.1f}x")
    if args.large and "compiled" in backends:
        secs, q = bench(7, "compiled", 1, args.threads)
        print(f" 7 compiled  {q:>4} {secs:>10.4f} {85900584 / secs:>14,.0f}   (numpy backend skipped)")


if __name__ == "__main__":
    main()
