"""Wall time of one statistic evaluation against sample size.

    python3 scripts/timing.py --sizes 250,500,1000,2000,4000
"""

import argparse
import sys
import time

import numpy as np

from mgc.inference import Method, statistic_from_samples


def best_time(method, x, y, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        statistic_from_samples(method, x, y)
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="250,500,1000,2000,4000")
    ap.add_argument("--methods", default="mgc,mcorr,dcorr,hsic")
    ap.add_argument("--dim", type=int, default=1)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    methods = [Method(m) for m in args.methods.split(",")]
    rng = np.random.default_rng(args.seed)
    print("n," + ",".join(m.value for m in methods) + ",mgc_ratio_to_previous")
    prev = None
    for n in (int(v) for v in args.sizes.split(",")):
        x = rng.standard_normal((n, args.dim))
        y = x**2 + rng.standard_normal((n, args.dim))
        times = [best_time(m, x, y, args.repeats) for m in methods]
        mgc_t = times[methods.index(Method.MGC)] if Method.MGC in methods else None
        ratio = f"{mgc_t / prev:.2f}" if prev and mgc_t else ""
        print(f"{n}," + ",".join(f"{t:.4f}" for t in times) + f",{ratio}")
        prev = mgc_t
    return 0


if __name__ == "__main__":
    sys.exit(main())
