"""Linear index codes built from cover solutions, and their decodability check.

Column ``p * r + i`` of an encoding matrix is subpacket ``i`` of packet ``p``
(packets in instance order). A transmission is ``y = E x`` over GF(q).

Fractional solutions are realised with subpacketization ``r`` = lcm of the
denominators: every clique (or multicast group) weight ``w`` becomes ``w*r``
copies, and every user sits in exactly ``r`` copies. Each copy then carries
one subpacket index per packet it touches; users requesting the same packet
inside one copy share that index, and the ``r`` copies of a user get ``r``
distinct indices. :func:`assign_subpackets` finds such an assignment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from .cover import CoverSolution, _local_counts, _sort_key, fmt, subpacketization
from .gf import FieldContext, FieldTooSmall, default_field, gf
from .hypercliques import _bits
from .instance import GroupcastInstance, induced_subproblem


class ConstructionError(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


@dataclass
class IndexCode:
    matrix: np.ndarray
    field: FieldContext
    subpacketization: int
    packets: tuple[str, ...]
    parameter: str
    provenance: dict = field(default_factory=dict)

    @property
    def transmissions(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def rate(self) -> Fraction:
        return Fraction(self.transmissions, self.subpacketization)

    def column(self, packet_index: int, i: int) -> int:
        return packet_index * self.subpacketization + i

    def to_json(self) -> dict:
        r = self.subpacketization
        return {
            "parameter": self.parameter,
            "field": self.field.describe(),
            "subpacketization": r,
            "rate": fmt(self.rate),
            "columns": [[p, i] for p in self.packets for i in range(r)],
            "rows": self.matrix.astype(int).tolist(),
            "provenance": self.provenance,
        }


# ---------------------------------------------------------------------------
# MDS generators
# ---------------------------------------------------------------------------

def mds_generator(s: int, t: int, field: FieldContext) -> np.ndarray:
    """t x s matrix over ``field`` whose every t columns are independent.

    Identity when t == s; otherwise Vandermonde rows ``alpha_j ** i`` on the
    points 1, 2, ..., q-1, 0 (first s of them), which needs q >= s.
    """
    if not 1 <= t <= s:
        raise ValueError(f"need 1 <= t <= s, got t={t}, s={s}")
    if t == s:
        return np.eye(s, dtype=np.int64)
    if field.q < s:
        raise FieldTooSmall(f"an ({s},{t}) MDS code needs a field with at least {s} elements", s)
    points = list(range(1, field.q)) + [0]
    g = np.zeros((t, s), dtype=np.int64)
    for j, a in enumerate(points[:s]):
        v = 1
        for i in range(t):
            g[i, j] = v
            v = field.mul(v, a)
    return g


# ---------------------------------------------------------------------------
# subpacket assignment
# ---------------------------------------------------------------------------

def assign_subpackets(h: GroupcastInstance, copies: list[int], r: int) -> dict[tuple[int, int], int]:
    """Index for every (copy, packet) pair so each user sees r distinct indices.

    ``copies`` are user bitmasks; every user must lie in exactly ``r`` of
    them. Solved per packet as an r-colouring of the copies that meet W(p),
    two copies conflicting when they share a requester of p.
    """
    out: dict[tuple[int, int], int] = {}
    for p, wmask in enumerate(h.wanters):
        items = [ci for ci, c in enumerate(copies) if c & wmask]
        for u in _bits(wmask):
            k = sum(1 for ci in items if (copies[ci] >> u) & 1)
            if k != r:
                raise ConstructionError(f"user {h.users[u]!r} lies in {k} copies, expected {r}")
        conflicts = {ci: [cj for cj in items if cj != ci and copies[ci] & copies[cj] & wmask] for ci in items}
        order = sorted(items, key=lambda ci: (-len(conflicts[ci]), ci))
        colour: dict[int, int] = {}

        def place(k: int) -> bool:
            if k == len(order):
                return True
            ci = order[k]
            used = {colour[cj] for cj in conflicts[ci] if cj in colour}
            for c in range(r):
                if c not in used:
                    colour[ci] = c
                    if place(k + 1):
                        return True
                    del colour[ci]
            return False

        if not place(0):
            raise ConstructionError(f"no consistent subpacket assignment for packet {h.packets[p]!r}")
        for ci, c in colour.items():
            out[(ci, p)] = c
    return out


def _expand(weights: dict, r: int) -> list:
    copies = []
    for key, w in weights:
        k = w * r
        if k.denominator != 1:
            raise ConstructionError("weight not a multiple of 1/r")
        copies += [key] * int(k)
    return copies


def _check_exact_cover(h: GroupcastInstance, weights: dict[int, Fraction], what: str) -> None:
    for u in range(h.n):
        cov = sum((w for c, w in weights.items() if (c >> u) & 1), Fraction(0))
        if cov != 1:
            raise ConstructionError(f"{what}: user {h.users[u]!r} covered {cov} times, expected exactly once")
    if any(w < 0 for w in weights.values()):
        raise ConstructionError(f"{what}: negative weight")


# ---------------------------------------------------------------------------
# hyperclique-based codes (psi, psi_f, psi_l, psi_fl)
# ---------------------------------------------------------------------------

def _clique_code(h: GroupcastInstance, weights: dict[int, Fraction], t: Fraction,
                 field: FieldContext | None, parameter: str):
    _check_exact_cover(h, weights, "cover")
    counts = _local_counts(h, weights)
    if max(counts) > t:
        raise ConstructionError(f"cover has local count {max(counts)} > t = {t}")
    r = subpacketization(list(weights.values()) + [t])
    ordered = sorted(weights.items(), key=lambda kv: _sort_key(kv[0]))
    copies = _expand(ordered, r)
    s = len(copies)
    rows = int(t * r)
    if field is None:
        field = default_field(s + 1)
    g = mds_generator(s, rows, field)
    idx = assign_subpackets(h, copies, r)
    mat = np.zeros((rows, h.m * r), dtype=np.int64)
    classes = []
    for ci, c in enumerate(copies):
        for p in sorted({h.req[u] for u in _bits(c)}):
            col = p * r + idx[(ci, p)]
            mat[:, col] = field.add_arrays(mat[:, col], g[:, ci])
            classes.append({"copy": ci, "packet": h.packets[p], "subpacket": idx[(ci, p)],
                            "users": [h.users[u] for u in _bits(c) if h.req[u] == p]})
    assignment = {}
    for u in range(h.n):
        slots = [None] * r
        for ci, c in enumerate(copies):
            if (c >> u) & 1:
                slots[idx[(ci, h.req[u])]] = ci
        assignment[h.users[u]] = slots
    prov = {
        "construction": "mds_clique_cover",
        "copies": [{"column": ci, "members": [h.users[u] for u in _bits(c)]} for ci, c in enumerate(copies)],
        "generator_shape": [rows, s],
        "assignment": assignment,
        "classes": classes,
    }
    return IndexCode(mat, field, r, h.packets, parameter, prov)


def _masks(h: GroupcastInstance, weights: dict[frozenset, Fraction]) -> dict[int, Fraction]:
    return {h.mask_of(c): Fraction(w) for c, w in weights.items() if w}


def build_local_code(h: GroupcastInstance, sol: CoverSolution, field: FieldContext | None = None,
                     parameter: str | None = None) -> IndexCode:
    """Code of rate t from a (fractional) local hyperclique cover.

    One MDS column per clique copy; with t rows any t columns are independent,
    so each user cancels the at most t-1 interfering copies.
    """
    if sol.t is None:
        raise ConstructionError("solution carries no local count t")
    name = parameter or ("psi_l" if sol.integral else "psi_fl")
    return _clique_code(h, _masks(h, sol.clique_weights), Fraction(sol.t), field, name)


def build_clique_cover_code(h: GroupcastInstance, sol: CoverSolution, field: FieldContext | None = None,
                            parameter: str | None = None) -> IndexCode:
    """One coded symbol per clique copy (sum of its requested packets)."""
    name = parameter or ("psi" if sol.integral else "psi_f")
    return _clique_code(h, _masks(h, sol.clique_weights), Fraction(sol.objective), field or gf(2), name)


# ---------------------------------------------------------------------------
# partition-based codes
# ---------------------------------------------------------------------------

def _group_copies(h: GroupcastInstance, sol: CoverSolution):
    weights = _masks(h, sol.group_weights)
    _check_exact_cover(h, weights, "partition")
    r = subpacketization(weights.values())
    ordered = sorted(weights.items(), key=lambda kv: _sort_key(kv[0]))
    copies = _expand(ordered, r)
    return r, copies, assign_subpackets(h, copies, r)


def build_partition_multicast_code(h: GroupcastInstance, sol: CoverSolution,
                                   field: FieldContext | None = None) -> IndexCode:
    """Per group an (|R(M)|, d_M) MDS code over the group's packets, time-shared."""
    r, copies, idx = _group_copies(h, sol)
    sizes = {c: len({h.req[u] for u in _bits(c)}) for c in copies}
    if field is None:
        field = default_field(max(sizes.values()) + 1)
    blocks = []
    prov_groups = []
    for ci, c in enumerate(copies):
        members = h.users_of(c)
        packets = sorted({h.req[u] for u in _bits(c)})
        d = int(sol.group_counts[members])
        g = mds_generator(len(packets), d, field)
        block = np.zeros((d, h.m * r), dtype=np.int64)
        for j, p in enumerate(packets):
            block[:, p * r + idx[(ci, p)]] = g[:, j]
        blocks.append(block)
        prov_groups.append({"members": [h.users[u] for u in _bits(c)], "rows": d,
                            "subpackets": {h.packets[p]: idx[(ci, p)] for p in packets}})
    mat = np.concatenate(blocks, axis=0)
    param = "psi_p" if sol.integral else "psi_f_p"
    return IndexCode(mat, field, r, h.packets, param,
                     {"construction": "partition_multicast", "group_copies": prov_groups})


def build_partitioned_local_code(h: GroupcastInstance, sol: CoverSolution,
                                 field: FieldContext | None = None) -> IndexCode:
    """Local codes inside each group, time-shared over the partition.

    With r1 = lcm of the group codes' subpacketizations and r2 = lcm of the
    group weights' denominators, each user's packet splits into r1*r2
    subpackets: r2 blocks of r1, one block per group copy.
    """
    r2, copies, blocks_idx = _group_copies(h, sol)
    subs = {}
    for c in set(copies):
        members = h.users_of(c)
        local = sol.group_solutions.get(members)
        if local is None:
            raise ConstructionError(f"no local cover stored for group {sorted(members)}")
        sub = induced_subproblem(h, members)
        subs[c] = (sub, local)
    # common field large enough for every group's copies
    need = 1
    rs = []
    for sub, local in subs.values():
        w = list(local.clique_weights.values()) + [local.t]
        rr = subpacketization(w)
        rs.append(rr)
        need = max(need, int(sum(w[:-1], Fraction(0)) * rr))
    r1 = lcm(1, *rs)
    if field is None:
        field = default_field(need + 1)
    codes = {c: build_local_code(sub, local, field) for c, (sub, local) in subs.items()}
    r = r1 * r2
    rows = []
    prov = []
    for ci, c in enumerate(copies):
        sub, _ = subs[c]
        code = codes[c]
        rm = code.subpacketization
        reps = r1 // rm
        for k in range(reps):
            block = np.zeros((code.transmissions, h.m * r), dtype=np.int64)
            for lp, pname in enumerate(sub.packets):
                p = h.packet_index[pname]
                base = p * r + blocks_idx[(ci, p)] * r1 + k * rm
                block[:, base:base + rm] = code.matrix[:, lp * rm:(lp + 1) * rm]
            rows.append(block)
        prov.append({"members": list(sub.users), "local_rate": fmt(code.rate), "local_subpacketization": rm,
                     "repetitions": reps,
                     "blocks": {p: blocks_idx[(ci, h.packet_index[p])] for p in sub.packets}})
    mat = np.concatenate(rows, axis=0)
    param = "psi_l_p" if sol.integral else "psi_fl_p"
    return IndexCode(mat, field, r, h.packets, param,
                     {"construction": "partitioned_local", "r1": r1, "r2": r2, "group_copies": prov})


# ---------------------------------------------------------------------------
# decodability
# ---------------------------------------------------------------------------

@dataclass
class UserDecoding:
    user: str
    decodable: bool
    # per subpacket: combination c of transmissions with (c E) = e_target off S(u)
    combos: list[np.ndarray | None]


@dataclass
class DecodabilityReport:
    users: dict[str, UserDecoding]

    @property
    def overall(self) -> bool:
        return all(d.decodable for d in self.users.values())

    def failing(self) -> list[str]:
        return [u for u, d in self.users.items() if not d.decodable]

    def to_json(self) -> dict:
        return {"decodable": self.overall, "users": {u: d.decodable for u, d in self.users.items()}}


def _known_columns(h: GroupcastInstance, code: IndexCode, u: int) -> np.ndarray:
    r = code.subpacketization
    side = h.side[u]
    return np.array([(side >> (c // r)) & 1 for c in range(h.m * r)], dtype=bool)


def verify_decodable(h: GroupcastInstance, code: IndexCode) -> DecodabilityReport:
    """Rank test: e_(R(u), i) must lie in rowspace(E) + span of S(u)'s columns."""
    r = code.subpacketization
    if code.packets != h.packets or code.matrix.shape[1] != h.m * r:
        raise DimensionMismatch(
            f"code has {code.matrix.shape[1]} columns for packets {code.packets}; instance needs {h.m}*{r}")
    f = code.field
    out = {}
    for u in range(h.n):
        known = _known_columns(h, code, u)
        unknown = np.nonzero(~known)[0]
        a = code.matrix[:, unknown]
        targets = np.zeros((r, unknown.size), dtype=np.int64)
        for i in range(r):
            targets[i, int(np.searchsorted(unknown, h.req[u] * r + i))] = 1
        combos = f.solve_left(a, targets)
        out[h.users[u]] = UserDecoding(h.users[u], all(c is not None for c in combos), combos)
    return DecodabilityReport(out)


def round_trip(h: GroupcastInstance, code: IndexCode, report: DecodabilityReport,
               trials: int = 100, seed: int = 0) -> bool:
    """Encode random messages and decode every user with the report's witnesses."""
    if not report.overall:
        raise ConstructionError("round trip needs decoding witnesses for every user")
    f = code.field
    r = code.subpacketization
    rng = np.random.default_rng(seed)
    enc = code.matrix
    for _ in range(trials):
        x = rng.integers(0, f.q, size=h.m * r, dtype=np.int64)
        y = f.matmul(enc, x) if enc.shape[0] else np.zeros(0, dtype=np.int64)
        for u in range(h.n):
            known = _known_columns(h, code, u)
            for i, c in enumerate(report.users[h.users[u]].combos):
                full = f.matmul(c, enc) if c.size else np.zeros(h.m * r, dtype=np.int64)
                got = int(f.matmul(c, y)) if c.size else 0
                got = f.sub(got, int(f.matmul(full[known], x[known]))) if known.any() else got
                if got != x[h.req[u] * r + i]:
                    return False
    return True


def build_code(h: GroupcastInstance, parameter: str, sol: CoverSolution,
               field: FieldContext | None = None) -> IndexCode:
    """Dispatch a solver witness to its constructor."""
    if parameter in ("psi", "psi_f"):
        return build_clique_cover_code(h, sol, field, parameter)
    if parameter in ("psi_l", "psi_fl"):
        return build_local_code(h, sol, field, parameter)
    if parameter in ("psi_p", "psi_f_p"):
        return build_partition_multicast_code(h, sol, field)
    if parameter in ("psi_l_p", "psi_fl_p"):
        return build_partitioned_local_code(h, sol, field)
    raise ValueError(f"no code constructor for parameter {parameter!r}")
