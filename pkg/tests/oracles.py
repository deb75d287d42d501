"""Brute-force reference implementations, written from the definitions.

Nothing here reuses the package's solvers, bitmask helpers or linear algebra;
only the instance containers (users, packets, request, side_info) are read.
Everything is exponential and meant for n <= 6.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import linprog


# ---------------------------------------------------------------------------
# definitions
# ---------------------------------------------------------------------------

def compatible(h, u, v) -> bool:
    ru, rv = h.request[u], h.request[v]
    return ru == rv or (rv in h.side_info[u] and ru in h.side_info[v])


def is_clique(h, users) -> bool:
    return all(compatible(h, u, v) for u, v in itertools.combinations(users, 2))


def interference(h, u) -> frozenset:
    """Users whose request u lacks: R(v) in P - S(u) (which contains R(u))."""
    return frozenset(v for v in h.users if h.request[v] not in h.side_info[u])


def all_cliques(h) -> list[frozenset]:
    out = []
    for k in range(1, len(h.users) + 1):
        for c in itertools.combinations(h.users, k):
            if is_clique(h, c):
                out.append(frozenset(c))
    return out


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def deficit(h, group) -> int:
    wanted = {h.request[u] for u in group}
    return len(wanted) - min(len(wanted & h.side_info[u]) for u in group)


def restrict(h, group):
    """Induced subproblem as plain dicts: (users, request, side_info cut to R(M))."""
    wanted = frozenset(h.request[u] for u in group)

    class Sub:
        pass

    s = Sub()
    s.users = tuple(u for u in h.users if u in set(group))
    s.request = {u: h.request[u] for u in s.users}
    s.side_info = {u: h.side_info[u] & wanted for u in s.users}
    s.packets = tuple(sorted(wanted))
    return s


# ---------------------------------------------------------------------------
# integral programs by exhaustive enumeration
# ---------------------------------------------------------------------------

def brute_psi(h) -> int:
    """Fewest hypercliques partitioning U (over all set partitions)."""
    return min(len(p) for p in set_partitions(h.users) if all(is_clique(h, b) for b in p))


def _local_value(h, cover) -> int:
    return max(sum(1 for c in cover if set(c) & interference(h, u)) for u in h.users)


def brute_psi_l(h) -> int:
    """Least max local count over all partitions of U into hypercliques."""
    return min(_local_value(h, p) for p in set_partitions(h.users) if all(is_clique(h, b) for b in p))


def brute_covers_psi(h) -> tuple[int, int]:
    """(psi, psi_l) over *every* family of hypercliques covering U, overlaps allowed.

    Enumerates all subsets of the clique set, so only for tiny n.
    """
    cl = all_cliques(h)
    best_psi = best_l = len(h.users) + 1
    users = set(h.users)
    for k in range(1, len(cl) + 1):
        for fam in itertools.combinations(cl, k):
            if set().union(*fam) != users:
                continue
            best_psi = min(best_psi, k)
            best_l = min(best_l, _local_value(h, fam))
    return best_psi, best_l


def brute_psi_p(h) -> int:
    return min(sum(deficit(h, b) for b in p) for p in set_partitions(h.users))


def brute_psi_l_p(h) -> int:
    return min(sum(brute_psi_l(restrict(h, b)) for b in p) for p in set_partitions(h.users))


# ---------------------------------------------------------------------------
# relaxations with a floating-point LP over the full column sets
# ---------------------------------------------------------------------------

def _lp(c, a_eq=None, b_eq=None, a_ub=None, b_ub=None) -> float:
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    assert res.status == 0, res.message
    return float(res.fun)


def float_psi_f(h) -> float:
    cl = all_cliques(h)
    a = np.array([[1.0 if u in c else 0.0 for c in cl] for u in h.users])
    return _lp(np.ones(len(cl)), a, np.ones(len(h.users)))


def float_psi_fl(h) -> float:
    cl = all_cliques(h)
    k = len(cl)
    a_eq = np.array([[1.0 if u in c else 0.0 for c in cl] + [0.0] for u in h.users])
    a_ub = np.array([[1.0 if c & interference(h, u) else 0.0 for c in cl] + [-1.0] for u in h.users])
    c = np.zeros(k + 1)
    c[-1] = 1
    return _lp(c, a_eq, np.ones(len(h.users)), a_ub, np.zeros(len(h.users)))


def _float_partition(h, cost) -> float:
    groups = [g for k in range(1, len(h.users) + 1) for g in itertools.combinations(h.users, k)]
    a = np.array([[1.0 if u in g else 0.0 for g in groups] for u in h.users])
    return _lp(np.array([float(cost(g)) for g in groups]), a, np.ones(len(h.users)))


def float_psi_f_p(h) -> float:
    return _float_partition(h, lambda g: deficit(h, g))


def float_psi_fl_p(h) -> float:
    return _float_partition(h, lambda g: float_psi_fl(restrict(h, g)))


# ---------------------------------------------------------------------------
# minrank over GF(2) by subspace enumeration
# ---------------------------------------------------------------------------

def _subspaces(n: int, max_dim: int):
    """Every subspace of GF(2)^n of dimension <= max_dim, as frozensets of ints."""
    seen = {frozenset({0})}
    layer = [frozenset({0})]
    yield 0, frozenset({0})
    for d in range(1, max_dim + 1):
        nxt = []
        for space in layer:
            for v in range(1, 1 << n):
                if v in space:
                    continue
                bigger = frozenset(space | {x ^ v for x in space})
                if bigger not in seen:
                    seen.add(bigger)
                    nxt.append(bigger)
                    yield d, bigger
        layer = nxt


def brute_minrank_gf2(vertices, out_neighbors) -> int:
    """Smallest dim V such that each vertex i has some x in V with x_i = 1 and
    support inside {i} | N(i): the rows of a fitting matrix spanning V."""
    n = len(vertices)
    idx = {v: i for i, v in enumerate(vertices)}
    allowed = [(1 << i) | sum(1 << idx[w] for w in out_neighbors[v]) for i, v in enumerate(vertices)]
    for d, space in _subspaces(n, n):
        if all(any((x >> i) & 1 and x & ~allowed[i] == 0 for x in space) for i in range(n)):
            return d
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# finite field determinants for the MDS check
# ---------------------------------------------------------------------------

def _clmul(a: int, b: int, poly: int, k: int) -> int:
    out = 0
    for i in range(k):
        if (b >> i) & 1:
            out ^= a << i
    for i in range(2 * k - 2, k - 1, -1):
        if (out >> i) & 1:
            out ^= poly << (i - k)
    return out


def field_ops(q: int, poly: int = 0):
    """(add, mul) for GF(q): prime q, or q = 2^k with the given modulus poly."""
    if poly:
        k = q.bit_length() - 1
        return (lambda a, b: a ^ b), (lambda a, b: _clmul(a, b, poly, k)), (lambda a: a)
    return (lambda a, b: (a + b) % q), (lambda a, b: (a * b) % q), (lambda a: (-a) % q)


def leibniz_det(mat, q: int, poly: int = 0) -> int:
    add, mul, neg = field_ops(q, poly)
    n = len(mat)
    total = 0
    for perm in itertools.permutations(range(n)):
        term = 1
        for i, j in enumerate(perm):
            term = mul(term, int(mat[i][j]))
            if term == 0:
                break
        if term == 0:
            continue
        inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        total = add(total, neg(term) if inversions % 2 else term)
    return total


def gauss_det(mat, q: int, poly: int = 0) -> int:
    """Determinant by elimination with field inverses found by search."""
    add, mul, neg = field_ops(q, poly)
    inv = {a: next(b for b in range(1, q) if mul(a, b) == 1) for a in range(1, q)}
    m = [[int(x) for x in row] for row in mat]
    n = len(m)
    det = 1
    for c in range(n):
        r = next((r for r in range(c, n) if m[r][c]), None)
        if r is None:
            return 0
        if r != c:
            m[c], m[r] = m[r], m[c]
            det = neg(det)
        det = mul(det, m[c][c])
        ic = inv[m[c][c]]
        for r in range(c + 1, n):
            f = mul(m[r][c], ic)
            if f:
                m[r] = [add(x, neg(mul(f, y))) for x, y in zip(m[r], m[c])]
    return det


@lru_cache(maxsize=None)
def subsets_of_size(s: int, t: int):
    return list(itertools.combinations(range(s), t))


def as_fraction(x: float, limit: int = 1000) -> Fraction:
    return Fraction(x).limit_denominator(limit)
