"""Hot inner loops, compiled with numba when available.

Every kernel has two paths: a loop implementation compiled with ``numba.njit``
and a numpy (or plain Python) fallback. Set ``INDEXCODE_NO_NUMBA=1`` to force
the fallback, e.g. to compare both in ``benchmarks/bench_kernels.py``.

Field convention shared by the linear-algebra kernels: ``p > 0`` means the
prime field GF(p) with residues ``0..p-1``; ``p == 0`` means a binary
extension field whose elements are bit vectors, addition is XOR and
multiplication goes through ``mul_t``. ``inv_t`` is the inverse table in
both cases (``inv_t[0]`` unused).
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

INF = 1 << 61

USE_NUMBA = numba is not None and os.environ.get("INDEXCODE_NO_NUMBA", "") not in ("1", "true", "yes")


def _jit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True)(fn)


# ---------------------------------------------------------------------------
# Row reduction over GF(q)
# ---------------------------------------------------------------------------

def _rref_loops(mat, p, mul_t, inv_t, ncols):
    rows = mat.shape[0]
    width = mat.shape[1]
    pivots = np.empty(min(rows, ncols), dtype=np.int64)
    rank = 0
    for c in range(ncols):
        if rank == rows:
            break
        piv = -1
        for i in range(rank, rows):
            if mat[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(width):
                tmp = mat[piv, j]
                mat[piv, j] = mat[rank, j]
                mat[rank, j] = tmp
        f = inv_t[mat[rank, c]]
        for j in range(width):
            if p > 0:
                mat[rank, j] = (mat[rank, j] * f) % p
            else:
                mat[rank, j] = mul_t[mat[rank, j], f]
        for i in range(rows):
            if i == rank:
                continue
            g = mat[i, c]
            if g == 0:
                continue
            for j in range(width):
                if p > 0:
                    mat[i, j] = (mat[i, j] - g * mat[rank, j]) % p
                else:
                    mat[i, j] = mat[i, j] ^ mul_t[g, mat[rank, j]]
        pivots[rank] = c
        rank += 1
    return rank, pivots[:rank].copy()


_rref_numba = _jit(_rref_loops)


def _rref_numpy(mat, p, mul_t, inv_t, ncols):
    rows = mat.shape[0]
    pivots = []
    rank = 0
    for c in range(ncols):
        if rank == rows:
            break
        nz = np.nonzero(mat[rank:, c])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            mat[[rank, piv]] = mat[[piv, rank]]
        f = inv_t[mat[rank, c]]
        if p > 0:
            mat[rank] = (mat[rank] * f) % p
        else:
            mat[rank] = mul_t[mat[rank], f]
        others = np.nonzero(mat[:, c])[0]
        others = others[others != rank]
        if others.size:
            g = mat[others, c]
            if p > 0:
                mat[others] = (mat[others] - np.outer(g, mat[rank])) % p
            else:
                mat[others] ^= mul_t[g[:, None], mat[rank][None, :]]
        pivots.append(c)
        rank += 1
    return rank, np.asarray(pivots, dtype=np.int64)


def rref(mat: np.ndarray, p: int, mul_t: np.ndarray, inv_t: np.ndarray, ncols: int | None = None):
    """Reduce ``mat`` (int64, modified in place) to reduced row echelon form.

    Pivots are searched only among the first ``ncols`` columns, which lets the
    caller append right-hand sides. Returns ``(rank, pivot_columns)``.
    """
    if ncols is None:
        ncols = mat.shape[1]
    fn = _rref_numba if USE_NUMBA else _rref_numpy
    return fn(mat, p, mul_t, inv_t, ncols)


def _matmul_loops(a, b, p, mul_t):
    # prime fields: entries < 2^20, so row sums of up to 2^23 products fit int64
    n, k = a.shape
    m = b.shape[1]
    out = np.zeros((n, m), dtype=np.int64)
    for i in range(n):
        for l in range(k):
            x = a[i, l]
            if x == 0:
                continue
            if p > 0:
                for j in range(m):
                    out[i, j] += x * b[l, j]
            else:
                for j in range(m):
                    out[i, j] ^= mul_t[x, b[l, j]]
        if p > 0:
            for j in range(m):
                out[i, j] %= p
    return out


_matmul_numba = _jit(_matmul_loops)


def _matmul_numpy(a, b, p, mul_t):
    if p > 0:
        return (a @ b) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for l in range(a.shape[1]):
        out ^= mul_t[a[:, l][:, None], b[l][None, :]]
    return out


def matmul(a: np.ndarray, b: np.ndarray, p: int, mul_t: np.ndarray) -> np.ndarray:
    fn = _matmul_numba if USE_NUMBA else _matmul_numpy
    return fn(a, b, p, mul_t)


# ---------------------------------------------------------------------------
# Multicast group deficits d_M = |R(M)| - min_{u in M} |R(M) & S(u)|
# ---------------------------------------------------------------------------

def _deficits_loops(req, side, n):
    size = 1 << n
    out = np.zeros(size, dtype=np.int64)
    for mask in range(1, size):
        packets = 0
        for u in range(n):
            if (mask >> u) & 1:
                packets |= 1 << req[u]
        total = 0
        x = packets
        while x:
            x &= x - 1
            total += 1
        best = n + 1
        for u in range(n):
            if (mask >> u) & 1:
                k = 0
                x = packets & side[u]
                while x:
                    x &= x - 1
                    k += 1
                if k < best:
                    best = k
        out[mask] = total - best
    return out


_deficits_numba = _jit(_deficits_loops)


def _deficits_numpy(req, side, n):
    masks = np.arange(1 << n, dtype=np.int64)
    packets = np.zeros_like(masks)
    best = np.full(masks.shape, n + 1, dtype=np.int64)
    members = [((masks >> u) & 1).astype(bool) for u in range(n)]
    for u in range(n):
        packets |= np.where(members[u], np.int64(1) << req[u], 0)
    for u in range(n):
        known = np.bitwise_count(packets & side[u]).astype(np.int64)
        best = np.where(members[u], np.minimum(best, known), best)
    out = np.bitwise_count(packets).astype(np.int64) - best
    out[0] = 0
    return out


def multicast_deficits(req: np.ndarray, side: np.ndarray) -> np.ndarray:
    """Return ``d[mask]`` for every user subset of a small instance.

    ``req[u]`` is the packet index requested by user ``u`` and ``side[u]`` the
    packet bitmask of its side information (packets indexed below 63).
    """
    n = len(req)
    req = np.ascontiguousarray(req, dtype=np.int64)
    side = np.ascontiguousarray(side, dtype=np.int64)
    if USE_NUMBA:
        return _deficits_numba(req, side, n)
    return _deficits_numpy(req, side, n)


# ---------------------------------------------------------------------------
# Exact minimum-cost set partition by subset DP (3^n)
# ---------------------------------------------------------------------------

def _partition_dp_loops(costs, n):
    size = 1 << n
    inf = INF
    dp = np.full(size, inf, dtype=np.int64)
    choice = np.zeros(size, dtype=np.int64)
    dp[0] = 0
    for mask in range(1, size):
        low = mask & -mask
        rest = mask ^ low
        sub = rest
        while True:
            grp = sub | low
            c = costs[grp]
            if c < inf:
                val = c + dp[mask ^ grp]
                if val < dp[mask]:
                    dp[mask] = val
                    choice[mask] = grp
            if sub == 0:
                break
            sub = (sub - 1) & rest
    return dp, choice


_partition_dp_numba = _jit(_partition_dp_loops)


def partition_dp(costs: np.ndarray, n: int):
    """Optimal partition of ``n`` items into groups with integer ``costs[mask]``.

    Disallowed groups carry a cost of at least ``INF``.
    Returns ``(dp, choice)``; ``choice[mask]`` is the group holding the lowest
    item of ``mask`` in an optimal partition of ``mask``.
    """
    costs = np.ascontiguousarray(costs, dtype=np.int64)
    fn = _partition_dp_numba if USE_NUMBA else _partition_dp_loops
    return fn(costs, n)


# ---------------------------------------------------------------------------
# GF(2) fitting-matrix search: is there a fitting matrix of rank <= k?
# ---------------------------------------------------------------------------

def _gf2_search_loops(free, n, k, out_rows):
    # basis[d, b] holds the xor-basis vector with leading bit b after rows 0..d-1
    basis = np.zeros((n + 1, n), dtype=np.int64)
    rank = np.zeros(n + 1, dtype=np.int64)
    sub = np.empty(n, dtype=np.int64)
    d = 0
    sub[0] = free[0]
    while d >= 0:
        if sub[d] < 0:
            d -= 1
            continue
        row = sub[d] | (1 << d)
        if sub[d] == 0:
            sub[d] = -1
        else:
            sub[d] = (sub[d] - 1) & free[d]
        x = row
        for b in range(n - 1, -1, -1):
            if (x >> b) & 1 and basis[d, b] != 0:
                x ^= basis[d, b]
        new_rank = rank[d] + (1 if x != 0 else 0)
        if new_rank > k:
            continue
        for b in range(n):
            basis[d + 1, b] = basis[d, b]
        if x != 0:
            top = 0
            for b in range(n - 1, -1, -1):
                if (x >> b) & 1:
                    top = b
                    break
            basis[d + 1, top] = x
        rank[d + 1] = new_rank
        out_rows[d] = row
        if d == n - 1:
            return True
        d += 1
        sub[d] = free[d]
    return False


_gf2_search_numba = _jit(_gf2_search_loops)


def gf2_fitting_search(free: np.ndarray, k: int):
    """Depth-first search for a GF(2) fitting matrix of rank at most ``k``.

    ``free[i]`` is the bitmask of off-diagonal positions allowed in row ``i``
    (diagonal bits are forced to 1). Returns the rows as bitmasks, or None.
    """
    n = len(free)
    free = np.ascontiguousarray(free, dtype=np.int64)
    out = np.zeros(n, dtype=np.int64)
    fn = _gf2_search_numba if USE_NUMBA else _gf2_search_loops
    if fn(free, n, k, out):
        return out
    return None
