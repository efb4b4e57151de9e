"""Permanent kernel timings as CSV: ``dim,backend,seconds``.

Run ``python -m nwitness.bench --max-dim 16``.  The numba kernel is timed
after one warm-up call so compilation is excluded.  Set
``NWITNESS_DISABLE_NUMBA=1`` to drop the numba rows.
"""

import argparse
import sys
import time

import numpy as np

from . import permanent


def _best_of(func, M, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        func(M)
        best = min(best, time.perf_counter() - t0)
    return best


def run(max_dim=16, min_dim=2, repeats=3, seed=0, out=sys.stdout):
    rng = np.random.default_rng(seed)
    backends = [("numpy", permanent._ryser_numpy)]
    if permanent.HAVE_NUMBA:
        backends.insert(0, ("numba", permanent._ryser_numba))
    print("dim,backend,seconds", file=out)
    for k in range(min_dim, max_dim + 1):
        M = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
        for name, func in backends:
            func(M)
            print(f"{k},{name},{_best_of(func, M, repeats):.6e}", file=out)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-dim", type=int, default=16)
    p.add_argument("--min-dim", type=int, default=2)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    if args.max_dim > permanent.MAX_RYSER_DIM:
        p.error(f"--max-dim is capped at {permanent.MAX_RYSER_DIM}")
    run(args.max_dim, args.min_dim, args.repeats, args.seed)


if __name__ == "__main__":
    main()
