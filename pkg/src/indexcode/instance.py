"""Groupcast / unicast index coding instances: representation, I/O, generators."""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np


class InstanceError(ValueError):
    """Raised for documents or arguments that do not describe a valid instance."""


@dataclass(frozen=True, eq=False)
class GroupcastInstance:
    """Users each requesting one packet, holding a set of other packets.

    ``request[u]`` is R(u) and ``side_info[u]`` is S(u). Users and packets
    keep the order they were given in; everything derived (bitmasks, index
    arrays) follows that order.
    """

    users: tuple[str, ...]
    packets: tuple[str, ...]
    request: Mapping[str, str]
    side_info: Mapping[str, frozenset[str]]

    def __post_init__(self):
        object.__setattr__(self, "users", tuple(self.users))
        object.__setattr__(self, "packets", tuple(self.packets))
        object.__setattr__(self, "request", dict(self.request))
        object.__setattr__(self, "side_info", {u: frozenset(s) for u, s in self.side_info.items()})
        if len(set(self.users)) != len(self.users):
            raise InstanceError("duplicate user id")
        if len(set(self.packets)) != len(self.packets):
            raise InstanceError("duplicate packet id")
        pk = set(self.packets)
        if set(self.request) != set(self.users) or set(self.side_info) != set(self.users):
            raise InstanceError("request and side_info must be given for exactly the listed users")
        for u in self.users:
            r = self.request[u]
            if r not in pk:
                raise InstanceError(f"user {u!r}: unknown packet {r!r} referenced")
            unknown = self.side_info[u] - pk
            if unknown:
                raise InstanceError(f"user {u!r}: unknown packet {sorted(unknown)[0]!r} referenced")
            if r in self.side_info[u]:
                raise InstanceError(f"user {u!r}: request in side_info")
        idle = pk - set(self.request.values())
        if idle:
            raise InstanceError(f"packets requested by nobody: {sorted(idle)}")

    def __eq__(self, other):
        if not isinstance(other, GroupcastInstance):
            return NotImplemented
        return (self.users == other.users and self.packets == other.packets
                and self.request == other.request and self.side_info == other.side_info)

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"GroupcastInstance(n={self.n}, m={self.m})"

    @property
    def n(self) -> int:
        return len(self.users)

    @property
    def m(self) -> int:
        return len(self.packets)

    # -- index views, used by every solver ---------------------------------

    @cached_property
    def user_index(self) -> dict[str, int]:
        return {u: i for i, u in enumerate(self.users)}

    @cached_property
    def packet_index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.packets)}

    @cached_property
    def req(self) -> tuple[int, ...]:
        """Packet index requested by each user index."""
        return tuple(self.packet_index[self.request[u]] for u in self.users)

    @cached_property
    def side(self) -> tuple[int, ...]:
        """Side information of each user as a packet bitmask."""
        out = []
        for u in self.users:
            mask = 0
            for p in self.side_info[u]:
                mask |= 1 << self.packet_index[p]
            out.append(mask)
        return tuple(out)

    @cached_property
    def wanters(self) -> tuple[int, ...]:
        """W(p) for each packet index, as a user bitmask."""
        out = [0] * self.m
        for i, p in enumerate(self.req):
            out[p] |= 1 << i
        return tuple(out)

    @cached_property
    def key(self) -> tuple:
        """Structural key (ignores ids): requests and side masks by index."""
        return (self.m, self.req, self.side)

    def users_of(self, mask: int) -> frozenset[str]:
        return frozenset(self.users[i] for i in range(self.n) if (mask >> i) & 1)

    def mask_of(self, users: Iterable[str]) -> int:
        mask = 0
        for u in users:
            try:
                mask |= 1 << self.user_index[u]
            except KeyError:
                raise InstanceError(f"unknown user id {u!r}") from None
        return mask

    def wanted_by(self, packet: str) -> frozenset[str]:
        """W(p): the users whose request is ``packet``."""
        return frozenset(u for u in self.users if self.request[u] == packet)

    def side_complement(self, user: str) -> frozenset[str]:
        """(S(u))^c = P - S(u) - R(u)."""
        return frozenset(self.packets) - self.side_info[user] - {self.request[user]}

    def is_unicast(self) -> bool:
        return self.m == self.n


@dataclass(frozen=True, eq=False)
class UnicastInstance:
    """Directed side-information graph: ``out_neighbors[v]`` = N(v) = S(v)."""

    vertices: tuple[str, ...]
    out_neighbors: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        nbrs = {v: frozenset(self.out_neighbors.get(v, ())) for v in self.vertices}
        object.__setattr__(self, "out_neighbors", nbrs)
        if len(set(self.vertices)) != len(self.vertices):
            raise InstanceError("duplicate vertex id")
        vs = set(self.vertices)
        for v, nb in nbrs.items():
            if v in nb:
                raise InstanceError(f"self-loop at {v!r}")
            if not nb <= vs:
                raise InstanceError(f"edge from {v!r} to unknown vertex")

    def __eq__(self, other):
        if not isinstance(other, UnicastInstance):
            return NotImplemented
        return self.vertices == other.vertices and self.out_neighbors == other.out_neighbors

    def __hash__(self):
        return hash((self.vertices, tuple(self.out_neighbors[v] for v in self.vertices)))

    def __repr__(self):
        return f"UnicastInstance(n={len(self.vertices)}, edges={self.num_edges})"

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return sum(len(s) for s in self.out_neighbors.values())

    def in_degree(self, v: str) -> int:
        return sum(v in s for s in self.out_neighbors.values())


# ---------------------------------------------------------------------------
# Conversions
# ---------------------------------------------------------------------------

def packet_name(vertex: str) -> str:
    return f"x{vertex}"


def uic_as_gic(g: UnicastInstance) -> GroupcastInstance:
    """One packet per vertex; vertex v requests x_v and holds x_w for w in N(v)."""
    return GroupcastInstance(
        users=g.vertices,
        packets=tuple(packet_name(v) for v in g.vertices),
        request={v: packet_name(v) for v in g.vertices},
        side_info={v: frozenset(packet_name(w) for w in g.out_neighbors[v]) for v in g.vertices},
    )


def gic_to_uic(h: GroupcastInstance) -> UnicastInstance:
    """Side-information digraph on the users.

    (u, v) is an edge when u holds R(v), or when u and v request the same
    packet. A unicast instance converted with :func:`uic_as_gic` comes back
    unchanged.
    """
    nbrs = {}
    for u in h.users:
        su = h.side_info[u]
        ru = h.request[u]
        nbrs[u] = frozenset(v for v in h.users if v != u and (h.request[v] in su or h.request[v] == ru))
    return UnicastInstance(h.users, nbrs)


def directed_complement(g: UnicastInstance) -> UnicastInstance:
    vs = frozenset(g.vertices)
    return UnicastInstance(g.vertices, {v: vs - g.out_neighbors[v] - {v} for v in g.vertices})


def as_groupcast(inst: GroupcastInstance | UnicastInstance) -> GroupcastInstance:
    return uic_as_gic(inst) if isinstance(inst, UnicastInstance) else inst


def as_unicast(h: GroupcastInstance) -> UnicastInstance:
    """Exact inverse of :func:`uic_as_gic`; raises if ``h`` is not of that form."""
    expected = {u: packet_name(u) for u in h.users}
    if h.request != expected or h.packets != tuple(expected[u] for u in h.users):
        raise InstanceError("instance is not a unicast instance in canonical form")
    back = gic_to_uic(h)
    if uic_as_gic(back) != h:
        raise InstanceError("instance is not a unicast instance in canonical form")
    return back


def induced_subproblem(h: GroupcastInstance, users: Iterable[str]) -> GroupcastInstance:
    """H(M, R(M)): users of M, their requested packets, side info cut to R(M)."""
    chosen = set(users)
    if not chosen:
        raise InstanceError("empty user set")
    unknown = chosen - set(h.users)
    if unknown:
        raise InstanceError(f"unknown user id {sorted(unknown)[0]!r}")
    members = tuple(u for u in h.users if u in chosen)
    wanted = {h.request[u] for u in members}
    packets = tuple(p for p in h.packets if p in wanted)
    return GroupcastInstance(
        users=members,
        packets=packets,
        request={u: h.request[u] for u in members},
        side_info={u: h.side_info[u] & wanted for u in members},
    )


# ---------------------------------------------------------------------------
# Canonical JSON
# ---------------------------------------------------------------------------

def to_document(h: GroupcastInstance) -> dict:
    return {
        "packets": list(h.packets),
        "users": [
            {"id": u, "request": h.request[u], "side_info": sorted(h.side_info[u])}
            for u in h.users
        ],
    }


def serialize_instance(h: GroupcastInstance) -> str:
    return json.dumps(to_document(h), indent=2, ensure_ascii=False) + "\n"


def instance_digest(h: GroupcastInstance) -> str:
    return hashlib.sha256(serialize_instance(h).encode("utf-8")).hexdigest()


def parse_instance(text: str) -> GroupcastInstance:
    """Parse the canonical JSON document.

    Packets nobody requests are dropped (also from side information) with a
    warning, since they cannot change any bound.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("packets"), list) or not isinstance(doc.get("users"), list):
        raise InstanceError("document must be an object with 'packets' and 'users' lists")
    packets = [str(p) for p in doc["packets"]]
    if len(set(packets)) != len(packets):
        raise InstanceError("duplicate packet id")
    users, request, side = [], {}, {}
    for entry in doc["users"]:
        if not isinstance(entry, dict) or "id" not in entry or "request" not in entry:
            raise InstanceError("each user needs 'id' and 'request'")
        u = str(entry["id"])
        if u in request:
            raise InstanceError(f"duplicate user id {u!r}")
        users.append(u)
        request[u] = str(entry["request"])
        si = entry.get("side_info", [])
        if not isinstance(si, list):
            raise InstanceError(f"user {u!r}: side_info must be a list")
        side[u] = frozenset(str(p) for p in si)
    known = set(packets)
    for u in users:
        if request[u] not in known:
            raise InstanceError(f"user {u!r}: unknown packet {request[u]!r} referenced")
        bad = side[u] - known
        if bad:
            raise InstanceError(f"user {u!r}: unknown packet {sorted(bad)[0]!r} referenced")
        if request[u] in side[u]:
            raise InstanceError(f"user {u!r}: request in side_info")
    wanted = set(request.values())
    idle = [p for p in packets if p not in wanted]
    if idle:
        warnings.warn(f"dropping packets requested by nobody: {idle}", stacklevel=2)
        packets = [p for p in packets if p in wanted]
        side = {u: s & wanted for u, s in side.items()}
    return GroupcastInstance(tuple(users), tuple(packets), request, side)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def gen_figure2(k: int) -> UnicastInstance:
    """k disjoint 6-cycles where every vertex knows the next two packets."""
    if k < 1:
        raise InstanceError("k must be positive")
    verts = [str(i) for i in range(6 * k)]
    nbrs = {}
    for c in range(k):
        base = 6 * c
        for i in range(6):
            nbrs[verts[base + i]] = frozenset({verts[base + (i + 1) % 6], verts[base + (i + 2) % 6]})
    return UnicastInstance(tuple(verts), nbrs)


FAMILIES = ("complete", "empty", "dicycle", "bidicycle")


def gen_family(kind: str, n: int) -> UnicastInstance:
    """Standard side-information graphs on vertices ``"1".."n"``."""
    if n < 1:
        raise InstanceError("n must be positive")
    vs = [str(i) for i in range(1, n + 1)]
    if kind == "complete":
        nbrs = {v: frozenset(vs) - {v} for v in vs}
    elif kind == "empty":
        nbrs = {v: frozenset() for v in vs}
    elif kind in ("dicycle", "bidicycle"):
        nbrs = {}
        for i, v in enumerate(vs):
            nxt = {vs[(i + 1) % n]}
            if kind == "bidicycle":
                nxt.add(vs[(i - 1) % n])
            nbrs[v] = frozenset(nxt) - {v}
    else:
        raise InstanceError(f"unknown family {kind!r}; expected one of {FAMILIES}")
    return UnicastInstance(tuple(vs), nbrs)


def gen_random(n: int, m: int, density: float, seed: int) -> GroupcastInstance:
    """Random groupcast instance.

    Each user requests a uniform packet and holds every other packet
    independently with probability ``density``. Packets that end up
    requested by nobody are removed, so the result may have fewer than ``m``.
    """
    if n < 1 or not 1 <= m <= n or not 0 <= density <= 1:
        raise InstanceError("need n >= 1, 1 <= m <= n, 0 <= density <= 1")
    rng = np.random.default_rng(seed)
    packets = [f"p{j}" for j in range(1, m + 1)]
    users = [f"u{i}" for i in range(1, n + 1)]
    req_idx = rng.integers(0, m, size=n)
    coins = rng.random((n, m)) < density
    wanted = {packets[j] for j in req_idx}
    request, side = {}, {}
    for i, u in enumerate(users):
        request[u] = packets[req_idx[i]]
        side[u] = frozenset(packets[j] for j in range(m)
                            if j != req_idx[i] and coins[i, j] and packets[j] in wanted)
    return GroupcastInstance(tuple(users), tuple(p for p in packets if p in wanted), request, side)


def disjoint_union(parts: Iterable[GroupcastInstance]) -> GroupcastInstance:
    """Union of instances with ids prefixed by component number."""
    users, packets, request, side = [], [], {}, {}
    for c, h in enumerate(parts):
        pre = f"{c}:"
        users += [pre + u for u in h.users]
        packets += [pre + p for p in h.packets]
        for u in h.users:
            request[pre + u] = pre + h.request[u]
            side[pre + u] = frozenset(pre + p for p in h.side_info[u])
    return GroupcastInstance(tuple(users), tuple(packets), request, side)
