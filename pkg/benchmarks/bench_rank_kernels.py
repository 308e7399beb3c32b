"""Compare the numba and numpy rank-mod-p kernels.

    python benchmarks/bench_rank_kernels.py --m 6 --d 3 --n 20000

Times batched modular rank over random integer pencils and one full
witness scan (height 8) on a pencil with no low-rank member.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from hypergen import _kernels
from hypergen.catalog import catalog_get
from hypergen.kaplan import _candidate_blocks, kaplan_pencil


def random_pencil(rng, d, m):
    f = rng.integers(-5, 6, size=(d, m, m))
    return f - np.transpose(f, (0, 2, 1))


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def full_scan(forms, d, target, backend):
    hits = 0
    for _, _, _, mus in _candidate_blocks(d, 8):
        start = 0
        while True:
            i = _kernels.first_rank_at_most(forms, mus, target, start, backend=backend)
            if i < 0:
                break
            hits += 1
            start = i + 1
    return hits


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--m", type=int, default=6)
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--n", type=int, default=20000, help="number of mu vectors")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    forms = random_pencil(rng, args.d, args.m)
    mus = rng.integers(-1000, 1000, size=(args.n, args.d))
    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    if _kernels.HAVE_NUMBA:
        _kernels.batch_rank_mod_p(forms, mus[:4], backend="numba")  # compile outside the timing

    print(f"batch rank: m={args.m} d={args.d} N={args.n}")
    results = {}
    for b in backends:
        secs, ranks = timed(lambda: _kernels.batch_rank_mod_p(forms, mus, backend=b), args.repeat)
        results[b] = ranks
        print(f"  {b:6s} {secs * 1e3:9.2f} ms  ({args.n / secs:,.0f} ranks/s)")
    if len(results) == 2:
        print(f"  backends agree: {bool(np.array_equal(results['numpy'], results['numba']))}")

    d37 = kaplan_pencil(catalog_get("D37_1").algebra).integer_forms()
    print("witness scan: 37D1 pencil, rank <= 2, height 8 (no hits expected)")
    for b in backends:
        secs, hits = timed(lambda: full_scan(d37, 3, 2, b), args.repeat)
        print(f"  {b:6s} {secs * 1e3:9.2f} ms  hits={hits}")


if __name__ == "__main__":
    main()
