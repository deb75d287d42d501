"""Time the numba kernels against their numpy/Python fallbacks.

    python benchmarks/bench_kernels.py [--repeat 3]

Both paths are called directly (the INDEXCODE_NO_NUMBA switch only picks the
default), results are compared for equality, and the best wall time of each
is printed. The first numba call is excluded as compilation warm-up.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from indexcode import _kernels as K
from indexcode.gf import gf
from indexcode.instance import as_groupcast, gen_family, gen_figure2, gen_random
from indexcode.minrank import _free_masks


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def cases():
    rng = np.random.default_rng(0)

    h = gen_random(14, 8, 0.5, 7)
    req, side = np.array(h.req, dtype=np.int64), np.array(h.side, dtype=np.int64)
    yield ("multicast_deficits n=14", lambda: K._deficits_numba(req, side, 14),
           lambda: K._deficits_numpy(req, side, 14), np.array_equal)

    costs = K._deficits_numba(req, side, 14)
    yield ("partition_dp n=14", lambda: K._partition_dp_numba(costs, 14),
           lambda: K._partition_dp_loops(costs, 14), lambda a, b: np.array_equal(a[0], b[0]))

    for q in (7, 16):
        f = gf(q)
        a = rng.integers(0, q, size=(60, 80), dtype=np.int64)
        yield (f"rref 60x80 GF({q})",
               lambda a=a, f=f: K._rref_numba(a.copy(), f.p, f.mul_t, f.inv_t, 80),
               lambda a=a, f=f: K._rref_numpy(a.copy(), f.p, f.mul_t, f.inv_t, 80),
               lambda x, y: x[0] == y[0])

    f = gf(7)
    a = rng.integers(0, 7, size=(80, 80), dtype=np.int64)
    b = rng.integers(0, 7, size=(80, 80), dtype=np.int64)
    yield ("matmul 80x80 GF(7)", lambda: K._matmul_numba(a, b, 7, f.mul_t),
           lambda: K._matmul_numpy(a, b, 7, f.mul_t), np.array_equal)

    for name, g, k in (("figure2:2", gen_figure2(2), 8), ("bidicycle:7", gen_family("bidicycle", 7), 3)):
        free = _free_masks(g)
        n = g.n
        out1, out2 = np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64)
        yield (f"gf2 fitting search {name} k={k}",
               lambda free=free, n=n, k=k, o=out1: K._gf2_search_numba(free, n, k, o),
               lambda free=free, n=n, k=k, o=out2: K._gf2_search_loops(free, n, k, o),
               lambda x, y: x == y)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if K.numba is None:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'kernel':<36} {'numba':>10} {'fallback':>10} {'speedup':>8}  agree")
    for name, fast, slow, same in cases():
        fast()  # compile
        t_fast, r_fast = best_of(fast, args.repeat)
        t_slow, r_slow = best_of(slow, args.repeat)
        print(f"{name:<36} {t_fast * 1e3:>8.2f}ms {t_slow * 1e3:>8.2f}ms {t_slow / t_fast:>7.1f}x  {same(r_fast, r_slow)}")


if __name__ == "__main__":
    main()
