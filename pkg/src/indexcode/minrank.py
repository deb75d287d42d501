"""Minrank of small unicast side-information graphs.

A fitting matrix for G has ones on the diagonal, arbitrary entries at
positions (i, j) with j in N(i), and zeros elsewhere. Its minimum rank is the
optimal scalar linear code length over the chosen field: the rows of a
fitting matrix, sent as a basis of their span, let vertex i recover x_i.

Search order: target rank k = 1, 2, ..., n; for each k a depth-first search
fills rows top to bottom and abandons a branch once the rows chosen so far
already span more than k dimensions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .codes import IndexCode
from .cover import BoundValue
from .gf import FieldContext, gf
from .hypercliques import CapExceeded
from .instance import UnicastInstance, uic_as_gic

# free entries allowed for the GF(2) rank-targeted search
DEFAULT_MAX_FREE = 42
# for q > 2 the search is plain Python; cap on q ** free
DEFAULT_MAX_ASSIGNMENTS = 1 << 24


class PatternError(ValueError):
    pass


@dataclass(frozen=True)
class FittingMatrix:
    vertices: tuple[str, ...]
    matrix: np.ndarray
    field: FieldContext

    def check(self, g: UnicastInstance) -> None:
        """Raise :class:`PatternError` unless the matrix fits ``g``."""
        n = g.n
        if self.matrix.shape != (n, n) or self.vertices != g.vertices:
            raise PatternError("shape or vertex order does not match the graph")
        for i, v in enumerate(g.vertices):
            for j, w in enumerate(g.vertices):
                a = int(self.matrix[i, j])
                if i == j and a != 1:
                    raise PatternError(f"diagonal entry at {v!r} is {a}, expected 1")
                if i != j and a and w not in g.out_neighbors[v]:
                    raise PatternError(f"entry ({v!r}, {w!r}) must be 0")

    @property
    def rank(self) -> int:
        return self.field.rank(self.matrix)

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "field": self.field.describe(),
                "rows": self.matrix.astype(int).tolist()}


def free_entries(g: UnicastInstance) -> int:
    return g.num_edges


def _free_masks(g: UnicastInstance) -> np.ndarray:
    idx = {v: i for i, v in enumerate(g.vertices)}
    return np.array([sum(1 << idx[w] for w in g.out_neighbors[v]) for v in g.vertices], dtype=np.int64)


def _search_gf2(g: UnicastInstance, k: int) -> np.ndarray | None:
    rows = _kernels.gf2_fitting_search(_free_masks(g), k)
    if rows is None:
        return None
    n = g.n
    return np.array([[(int(r) >> j) & 1 for j in range(n)] for r in rows], dtype=np.int64)


def _search_general(g: UnicastInstance, k: int, f: FieldContext) -> np.ndarray | None:
    n = g.n
    idx = {v: i for i, v in enumerate(g.vertices)}
    free = [sorted(idx[w] for w in g.out_neighbors[v]) for v in g.vertices]
    rows: list[np.ndarray] = []

    def go(i: int) -> bool:
        if i == n:
            return True
        for vals in itertools.product(range(f.q), repeat=len(free[i])):
            row = np.zeros(n, dtype=np.int64)
            row[i] = 1
            row[free[i]] = vals
            rows.append(row)
            if f.rank(np.array(rows)) <= k and go(i + 1):
                return True
            rows.pop()
        return False

    return np.array(rows) if go(0) else None


def minrank(g: UnicastInstance, field: FieldContext | None = None, *,
            max_free: int = DEFAULT_MAX_FREE,
            max_assignments: int = DEFAULT_MAX_ASSIGNMENTS) -> BoundValue:
    """Minimum rank of a fitting matrix of ``g`` over ``field`` (default GF(2))."""
    f = field or gf(2)
    e = free_entries(g)
    if f.q == 2:
        if e > max_free:
            raise CapExceeded(f"{e} free entries exceed the GF(2) minrank cap {max_free}")
    elif f.q ** e > max_assignments:
        raise CapExceeded(f"{f.q}^{e} fitting matrices exceed the search cap {max_assignments}")
    if g.n == 0:
        raise PatternError("empty graph has no vertices")
    for k in range(1, g.n + 1):
        mat = _search_gf2(g, k) if f.q == 2 else _search_general(g, k, f)
        if mat is not None:
            fm = FittingMatrix(g.vertices, mat, f)
            fm.check(g)
            assert fm.rank == k
            return BoundValue("minrank", Fraction(k), fm)
    raise AssertionError("the identity pattern always fits at rank n")  # pragma: no cover


def minrank_code(g: UnicastInstance, witness: FittingMatrix) -> IndexCode:
    """Scalar linear code: a row basis of the fitting matrix."""
    witness.check(g)
    h = uic_as_gic(g)
    basis = witness.field.row_basis(witness.matrix)
    return IndexCode(basis, witness.field, 1, h.packets, "minrank",
                     {"construction": "fitting_matrix_row_basis", "fitting_matrix": witness.to_json()})
