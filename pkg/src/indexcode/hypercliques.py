"""Weak hypercliques and interference neighbourhoods.

A user set C is a (weak) hyperclique when every pair u, v in C either
requests the same packet or mutually holds each other's request. The
condition is pairwise, so hypercliques are exactly the cliques of an
undirected compatibility graph on the users; everything here works on that
graph with user bitmasks.
"""

from __future__ import annotations

from typing import Iterable

from .instance import GroupcastInstance, InstanceError

Hyperclique = frozenset  # of user ids

DEFAULT_ENUMERATION_CAP = 24
DEFAULT_CLOSURE_CAP = 1 << 15


class CapExceeded(RuntimeError):
    """A configured enumeration or solver budget was exceeded."""


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def compatibility(h: GroupcastInstance) -> tuple[int, ...]:
    """Neighbour bitmask of each user in the compatibility graph (no loops)."""
    req, side = h.req, h.side
    adj = []
    for u in range(h.n):
        mask = 0
        for v in range(h.n):
            if v == u:
                continue
            if req[u] == req[v] or ((side[u] >> req[v]) & 1 and (side[v] >> req[u]) & 1):
                mask |= 1 << v
        adj.append(mask)
    return tuple(adj)


def is_hyperclique(h: GroupcastInstance, users: Iterable[str]) -> bool:
    mask = h.mask_of(users)
    adj = compatibility(h)
    return all(mask & ~(1 << u) & ~adj[u] == 0 for u in _bits(mask))


def _sort_key(mask: int):
    return tuple(_bits(mask))


def maximal_clique_masks(h: GroupcastInstance, cap: int = DEFAULT_ENUMERATION_CAP) -> list[int]:
    """Maximal hypercliques as user bitmasks, Bron-Kerbosch with pivoting."""
    if h.n > cap:
        raise CapExceeded(f"n = {h.n} exceeds the clique enumeration cap {cap}")
    adj = compatibility(h)
    out: list[int] = []

    def expand(r: int, p: int, x: int):
        if not p and not x:
            out.append(r)
            return
        # pivot with most neighbours in P
        pivot = max(_bits(p | x), key=lambda w: bin(p & adj[w]).count("1"))
        for v in _bits(p & ~adj[pivot]):
            expand(r | (1 << v), p & adj[v], x & adj[v])
            p &= ~(1 << v)
            x |= 1 << v

    expand(0, (1 << h.n) - 1, 0)
    return sorted(out, key=_sort_key)


def enumerate_maximal_hypercliques(h: GroupcastInstance, cap: int = DEFAULT_ENUMERATION_CAP) -> list[Hyperclique]:
    return [h.users_of(m) for m in maximal_clique_masks(h, cap)]


def all_clique_masks(h: GroupcastInstance, cap: int = DEFAULT_CLOSURE_CAP) -> list[int]:
    """Every nonempty hyperclique (the full downward closure), as bitmasks."""
    adj = compatibility(h)
    out: list[int] = []

    def grow(r: int, cand: int):
        for v in _bits(cand):
            nr = r | (1 << v)
            out.append(nr)
            if len(out) > cap:
                raise CapExceeded(f"more than {cap} hypercliques")
            # only extend with higher-indexed vertices to avoid duplicates
            grow(nr, cand & adj[v] & ~((1 << (v + 1)) - 1))

    grow(0, (1 << h.n) - 1)
    return sorted(out, key=_sort_key)


def interference_mask(h: GroupcastInstance, u: int) -> int:
    """Users requesting a packet u does not hold: W(R(u) | (S(u))^c)."""
    side = h.side[u]
    mask = 0
    for v, p in enumerate(h.req):
        if not (side >> p) & 1:
            mask |= 1 << v
    return mask


def interference_users(h: GroupcastInstance, user: str) -> frozenset[str]:
    if user not in h.user_index:
        raise InstanceError(f"unknown user id {user!r}")
    return h.users_of(interference_mask(h, h.user_index[user]))


def local_counts(h: GroupcastInstance, weights: dict[int, object]) -> list:
    """Local hyperclique count of every user under a weighted cover {mask: y}."""
    counts = []
    for u in range(h.n):
        im = interference_mask(h, u)
        counts.append(sum((w for c, w in weights.items() if c & im), 0))
    return counts
