"""The four covering programs and their LP relaxations, solved exactly.

=====================  ===========================  ==============
program                integral / relaxed           parameter
=====================  ===========================  ==============
hyperclique cover      :func:`solve_hyperclique_cover`   psi / psi_f
local hyperclique      :func:`solve_local_hyperclique_cover`  psi_l / psi_fl
partition multicast    :func:`solve_partition_multicast`  psi_p / psi_f_p
partitioned local      :func:`solve_partitioned_local`  psi_l_p / psi_fl_p
=====================  ===========================  ==============

Column sets. The clique-cover program runs over maximal hypercliques with
``>=`` covering rows; the local program over every hyperclique not dominated
by a one-larger hyperclique with the same interference footprint, again with
``>=`` rows. Both are equivalent to the equality programs over all
hypercliques because shrinking a clique never raises a local count, and the
witnesses are trimmed back to exact covers (``sum_{C ni u} y_C == 1``).

Partition programs are solved per interaction component (users linked by a
shared request or by holding each other's request): no group straddling two
components is ever cheaper than its pieces, so the optimum is the sum of the
component optima. The subset cap applies per component.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .hypercliques import (
    DEFAULT_CLOSURE_CAP,
    DEFAULT_ENUMERATION_CAP,
    CapExceeded,
    _bits,
    _sort_key,
    all_clique_masks,
    compatibility,
    interference_mask,
    maximal_clique_masks,
)
from .instance import GroupcastInstance, InstanceError, induced_subproblem
from .lp import LinearProgram, solve_exact_lp, solve_ilp

PARAMETERS = ("psi", "psi_f", "psi_l", "psi_fl", "psi_p", "psi_f_p", "psi_l_p", "psi_fl_p")
RELAXED = {"psi_f", "psi_fl", "psi_f_p", "psi_fl_p"}
DEFAULT_MAX_SUBSET = 14


def fmt(x: Fraction) -> str:
    """Rational as ``"p/q"`` (or ``"p"`` when integral)."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _members(s: frozenset) -> list[str]:
    return sorted(s)


@dataclass
class CoverSolution:
    objective: Fraction
    program: str
    integral: bool
    clique_weights: dict[frozenset, Fraction] = field(default_factory=dict)
    group_weights: dict[frozenset, Fraction] = field(default_factory=dict)
    group_counts: dict[frozenset, Fraction] = field(default_factory=dict)
    t: Fraction | None = None
    # partitioned local only: the local cover used inside each chosen group
    group_solutions: dict[frozenset, "CoverSolution"] = field(default_factory=dict)

    def to_json(self) -> dict:
        doc: dict = {"program": self.program, "integral": self.integral, "objective": fmt(self.objective)}
        if self.t is not None:
            doc["t"] = fmt(self.t)
        if self.clique_weights:
            doc["clique_weights"] = [{"members": _members(c), "weight": fmt(w)}
                                     for c, w in sorted(self.clique_weights.items(), key=lambda kv: _members(kv[0]))]
        if self.group_weights:
            groups = []
            for g, w in sorted(self.group_weights.items(), key=lambda kv: _members(kv[0])):
                entry = {"members": _members(g), "weight": fmt(w), "count": fmt(self.group_counts[g])}
                if g in self.group_solutions:
                    entry["local_cover"] = self.group_solutions[g].to_json()
                groups.append(entry)
            doc["groups"] = groups
        return doc


@dataclass
class BoundValue:
    parameter: str
    value: Fraction
    witness: object

    def __post_init__(self):
        self.value = Fraction(self.value)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def trim_to_partition(weights: dict[int, Fraction], n: int) -> dict[int, Fraction]:
    """Turn a weighted cover with sum >= 1 per user into an exact one.

    Surplus weight on a clique containing u is moved to the clique minus u.
    Coverage of users already processed never changes, and no clique grows.
    """
    w = {c: Fraction(v) for c, v in weights.items() if v}
    for u in range(n):
        bit = 1 << u
        excess = sum((v for c, v in w.items() if c & bit), Fraction(0)) - 1
        if excess < 0:
            raise ValueError(f"user index {u} is not covered")
        for c in sorted((c for c in w if c & bit), key=_sort_key, reverse=True):
            if excess == 0:
                break
            d = min(w[c], excess)
            w[c] -= d
            if w[c] == 0:
                del w[c]
            rest = c & ~bit
            if rest:
                w[rest] = w.get(rest, Fraction(0)) + d
            excess -= d
    return w


def _local_counts(h: GroupcastInstance, weights: dict[int, Fraction]) -> list[Fraction]:
    out = []
    for u in range(h.n):
        im = interference_mask(h, u)
        out.append(sum((v for c, v in weights.items() if c & im), Fraction(0)))
    return out


def _check_bound(value: Fraction, h: GroupcastInstance) -> None:
    assert 0 < value <= h.n, f"bound {value} outside (0, {h.n}]"


def _weights_by_users(h: GroupcastInstance, weights: dict[int, Fraction]) -> dict[frozenset, Fraction]:
    return {h.users_of(c): v for c, v in sorted(weights.items(), key=lambda kv: _sort_key(kv[0]))}


# ---------------------------------------------------------------------------
# hyperclique cover
# ---------------------------------------------------------------------------

def _cover_lp(n: int, columns: Sequence[int], extra_t: bool) -> LinearProgram:
    nv = len(columns) + (1 if extra_t else 0)
    obj = [Fraction(0 if extra_t else 1)] * len(columns) + ([Fraction(1)] if extra_t else [])
    lp = LinearProgram(obj)
    for u in range(n):
        lp.add({j: 1 for j, c in enumerate(columns) if (c >> u) & 1}, ">=", 1)
    assert lp.num_vars == nv
    return lp


def solve_hyperclique_cover(h: GroupcastInstance, relax: bool, *,
                            cap: int = DEFAULT_ENUMERATION_CAP) -> BoundValue:
    """psi (integral) or psi_f (relax=True)."""
    cols = maximal_clique_masks(h, cap)
    lp = _cover_lp(h.n, cols, extra_t=False)
    res = solve_exact_lp(lp) if relax else solve_ilp(lp, integral_objective=True)
    weights = trim_to_partition({c: x for c, x in zip(cols, res.x) if x}, h.n)
    value = sum(weights.values(), Fraction(0))
    assert value == res.value
    _check_bound(value, h)
    sol = CoverSolution(objective=value, program="hyperclique_cover", integral=not relax,
                        clique_weights=_weights_by_users(h, weights))
    return BoundValue("psi_f" if relax else "psi", value, sol)


# ---------------------------------------------------------------------------
# local hyperclique cover
# ---------------------------------------------------------------------------

def local_columns(h: GroupcastInstance, cap: int = DEFAULT_CLOSURE_CAP) -> list[int]:
    """Hypercliques worth keeping as columns of the local program.

    A clique is dropped when adding one compatible user leaves its footprint
    (the users whose interference set it meets) unchanged: the larger clique
    then covers more at identical cost.
    """
    adj = compatibility(h)
    inter = [interference_mask(h, u) for u in range(h.n)]

    def footprint(c: int) -> int:
        return sum(1 << u for u in range(h.n) if inter[u] & c)

    keep = []
    full = (1 << h.n) - 1
    for c in all_clique_masks(h, cap):
        common = full
        for u in _bits(c):
            common &= adj[u]
        common &= ~c
        fp = footprint(c)
        if all(footprint(c | (1 << v)) != fp for v in _bits(common)):
            keep.append(c)
    return keep


@lru_cache(maxsize=1 << 16)
def _local_masks(m: int, req: tuple, side: tuple, relax: bool, cap: int):
    h = _synthetic(m, req, side)
    cols = local_columns(h, cap)
    k = len(cols)
    lp = _cover_lp(h.n, cols, extra_t=True)
    for u in range(h.n):
        im = interference_mask(h, u)
        row = {j: 1 for j, c in enumerate(cols) if c & im}
        row[k] = -1
        lp.add(row, "<=", 0)
    res = solve_exact_lp(lp) if relax else solve_ilp(lp, integral_objective=True)
    weights = trim_to_partition({c: x for c, x in zip(cols, res.x) if x}, h.n)
    t = max(_local_counts(h, weights))
    assert t == res.value, (t, res.value)
    return res.value, tuple(sorted(weights.items(), key=lambda kv: _sort_key(kv[0])))


def _synthetic(m: int, req: tuple, side: tuple) -> GroupcastInstance:
    users = tuple(f"u{i}" for i in range(len(req)))
    packets = tuple(f"p{j}" for j in range(m))
    return GroupcastInstance(
        users, packets,
        {u: packets[req[i]] for i, u in enumerate(users)},
        {u: frozenset(packets[j] for j in range(m) if (side[i] >> j) & 1) for i, u in enumerate(users)},
    )


def solve_local_hyperclique_cover(h: GroupcastInstance, relax: bool, *,
                                  cap: int = DEFAULT_CLOSURE_CAP) -> BoundValue:
    """psi_l (integral) or psi_fl (relax=True); ``witness.t`` is the max local count."""
    value, weights = _local_masks(h.m, h.req, h.side, relax, cap)
    _check_bound(value, h)
    sol = CoverSolution(objective=value, program="local_hyperclique_cover", integral=not relax,
                        clique_weights=_weights_by_users(h, dict(weights)), t=value)
    return BoundValue("psi_fl" if relax else "psi_l", value, sol)


# ---------------------------------------------------------------------------
# partition programs (2) and (4)
# ---------------------------------------------------------------------------

def interaction_components(h: GroupcastInstance) -> list[list[int]]:
    """User indices grouped by shared requests / held requests (connected components)."""
    parent = list(range(h.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    req, side = h.req, h.side
    for u in range(h.n):
        for v in range(u + 1, h.n):
            if req[u] == req[v] or (side[u] >> req[v]) & 1 or (side[v] >> req[u]) & 1:
                parent[find(u)] = find(v)
    comps: dict[int, list[int]] = {}
    for u in range(h.n):
        comps.setdefault(find(u), []).append(u)
    return sorted(comps.values())


def deficit(h: GroupcastInstance, users: Iterable[str]) -> int:
    """d_M = |R(M)| - min_{u in M} |R(M) & S(u)|."""
    members = list(users)
    if not members:
        raise InstanceError("empty group")
    wanted = {h.request[u] for u in members}
    return len(wanted) - min(len(wanted & h.side_info[u]) for u in members)


def _component_instance(h: GroupcastInstance, comp: list[int]) -> GroupcastInstance:
    return induced_subproblem(h, [h.users[i] for i in comp])


def _solve_partition(h: GroupcastInstance, relax: bool, cost_table, cost_of, max_subset: int,
                     groups: Sequence[Iterable[str]] | None):
    """Shared driver: returns (objective, {group: weight}, {group: cost})."""
    if groups is not None:
        fam = []
        seen = set()
        for g in groups:
            g = frozenset(g)
            if not g:
                raise InstanceError("empty group in family")
            h.mask_of(g)
            if g not in seen:
                seen.add(g)
                fam.append(g)
        fam.sort(key=lambda g: _sort_key(h.mask_of(g)))
        costs = [Fraction(cost_of(g)) for g in fam]
        lp = LinearProgram(costs)
        for u in h.users:
            lp.add({j: 1 for j, g in enumerate(fam) if u in g}, "==", 1)
        res = solve_exact_lp(lp) if relax else solve_ilp(lp)
        weights = {g: x for g, x in zip(fam, res.x) if x}
        return res.value, weights, {g: costs[fam.index(g)] for g in weights}

    total = Fraction(0)
    weights: dict[frozenset, Fraction] = {}
    counts: dict[frozenset, Fraction] = {}
    for comp in interaction_components(h):
        k = len(comp)
        if k > max_subset:
            raise CapExceeded(f"component of {k} users exceeds the subset cap {max_subset}; supply a group family")
        sub = _component_instance(h, comp)
        table = cost_table(sub)  # indexed by user mask of ``sub``
        if not relax:
            ints = np.array([int(c) for c in table], dtype=np.int64)
            dp, choice = _kernels.partition_dp(ints, k)
            mask = (1 << k) - 1
            total += int(dp[mask])
            while mask:
                g = int(choice[mask])
                key = sub.users_of(g)
                weights[key] = Fraction(1)
                counts[key] = Fraction(table[g])
                mask ^= g
        else:
            lp = LinearProgram([Fraction(c) for c in table[1:]])
            for u in range(k):
                lp.add({g - 1: 1 for g in range(1, 1 << k) if (g >> u) & 1}, "==", 1)
            res = solve_exact_lp(lp)
            total += res.value
            for j, x in enumerate(res.x):
                if x:
                    key = sub.users_of(j + 1)
                    weights[key] = x
                    counts[key] = Fraction(table[j + 1])
    return total, weights, counts


def _deficit_table(sub: GroupcastInstance) -> list[int]:
    return [int(d) for d in _kernels.multicast_deficits(np.array(sub.req), np.array(sub.side))]


def solve_partition_multicast(h: GroupcastInstance, relax: bool, *, max_subset: int = DEFAULT_MAX_SUBSET,
                              groups: Sequence[Iterable[str]] | None = None) -> BoundValue:
    """psi_p (integral) or psi_f_p (relax=True); group_counts hold d_M."""
    value, weights, counts = _solve_partition(
        h, relax, _deficit_table, lambda g: deficit(h, g), max_subset, groups)
    _check_bound(value, h)
    sol = CoverSolution(objective=value, program="partition_multicast", integral=not relax,
                        group_weights=weights, group_counts=counts)
    return BoundValue("psi_f_p" if relax else "psi_p", value, sol)


def solve_partitioned_local(h: GroupcastInstance, relax: bool, *, max_subset: int = DEFAULT_MAX_SUBSET,
                            groups: Sequence[Iterable[str]] | None = None,
                            cap: int = DEFAULT_CLOSURE_CAP) -> BoundValue:
    """psi_l_p (integral) or psi_fl_p (relax=True), decoupled form.

    Group M costs the local cover value of H(M, R(M)); the partition program
    then picks groups. ``witness.group_solutions`` holds the per-group covers.
    """

    def local_value(sub: GroupcastInstance) -> Fraction:
        return _local_masks(sub.m, sub.req, sub.side, relax, cap)[0]

    def table(sub: GroupcastInstance) -> list:
        out = [Fraction(0)]
        for mask in range(1, 1 << sub.n):
            out.append(local_value(induced_subproblem(sub, sub.users_of(mask))))
        return out

    value, weights, counts = _solve_partition(
        h, relax, table, lambda g: local_value(induced_subproblem(h, g)), max_subset, groups)
    _check_bound(value, h)
    per_group = {g: solve_local_hyperclique_cover(induced_subproblem(h, g), relax, cap=cap).witness
                 for g in weights}
    sol = CoverSolution(objective=value, program="partitioned_local", integral=not relax,
                        group_weights=weights, group_counts=counts, group_solutions=per_group)
    return BoundValue("psi_fl_p" if relax else "psi_l_p", value, sol)


SOLVERS = {
    "psi": lambda h, **kw: solve_hyperclique_cover(h, False),
    "psi_f": lambda h, **kw: solve_hyperclique_cover(h, True),
    "psi_l": lambda h, **kw: solve_local_hyperclique_cover(h, False),
    "psi_fl": lambda h, **kw: solve_local_hyperclique_cover(h, True),
    "psi_p": lambda h, **kw: solve_partition_multicast(h, False, **kw),
    "psi_f_p": lambda h, **kw: solve_partition_multicast(h, True, **kw),
    "psi_l_p": lambda h, **kw: solve_partitioned_local(h, False, **kw),
    "psi_fl_p": lambda h, **kw: solve_partitioned_local(h, True, **kw),
}


def solve(h: GroupcastInstance, parameter: str, **kw) -> BoundValue:
    """Dispatch by parameter name; ``kw`` (max_subset, groups) reach partition programs."""
    try:
        fn = SOLVERS[parameter]
    except KeyError:
        raise InstanceError(f"unknown parameter {parameter!r}") from None
    return fn(h, **kw)


# ---------------------------------------------------------------------------
# constructive check behind psi_fl_p <= psi_f_p
# ---------------------------------------------------------------------------

def request_cover_point(h: GroupcastInstance, multicast: CoverSolution) -> tuple[bool, Fraction]:
    """Feasible point of the partitioned local relaxation built from a multicast solution.

    Inside each chosen group M every W(p), p in R(M), gets weight 1 and
    t_M = d_M. Returns (feasible, objective); feasible means the largest local
    count in every group is at most d_M.
    """
    ok = True
    obj = Fraction(0)
    for g, a in multicast.group_weights.items():
        sub = induced_subproblem(h, g)
        cover = {w: Fraction(1) for w in sub.wanters}
        t = max(_local_counts(sub, cover))
        d = multicast.group_counts[g]
        ok &= t <= d
        obj += a * d
    return ok, obj


def subpacketization(values: Iterable[Fraction]) -> int:
    """Least common multiple of the denominators."""
    return lcm(1, *(Fraction(v).denominator for v in values))
