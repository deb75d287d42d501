"""Exact rational linear and integer programming.

Two-phase dense-tableau simplex over :class:`fractions.Fraction` with Bland's
rule, and depth-first branch-and-bound on top of it. Every choice (entering
column, leaving row, branching variable, branch order) is fixed, so repeated
solves return identical witnesses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class SolverError(RuntimeError):
    pass


class Infeasible(SolverError):
    pass


class Unbounded(SolverError):
    pass


class BudgetExhausted(SolverError):
    pass


@dataclass
class LinearProgram:
    """minimize c.x subject to rows (sense) rhs, x >= 0.

    Rows are sparse ``{column: coefficient}`` maps; senses are ``"<="``,
    ``">="`` or ``"=="``.
    """

    objective: list[Fraction]
    rows: list[dict[int, Fraction]] = field(default_factory=list)
    senses: list[str] = field(default_factory=list)
    rhs: list[Fraction] = field(default_factory=list)

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    def add(self, coeffs: Mapping[int, object], sense: str, rhs) -> None:
        if sense not in ("<=", ">=", "=="):
            raise ValueError(f"bad sense {sense!r}")
        self.rows.append({j: Fraction(v) for j, v in coeffs.items() if v != 0})
        self.senses.append(sense)
        self.rhs.append(Fraction(rhs))

    def with_rows(self, extra: Iterable[tuple[Mapping[int, object], str, object]]) -> "LinearProgram":
        lp = LinearProgram(list(self.objective), list(self.rows), list(self.senses), list(self.rhs))
        for coeffs, sense, rhs in extra:
            lp.add(coeffs, sense, rhs)
        return lp


@dataclass
class LPResult:
    value: Fraction
    x: list[Fraction]
    nodes: int = 1


def _pivot(tab: list[list[Fraction]], obj: list[Fraction], r: int, e: int) -> None:
    row = tab[r]
    piv = row[e]
    if piv != 1:
        inv = 1 / piv
        row[:] = [v * inv if v else v for v in row]
    nz = [j for j, v in enumerate(row) if v]
    for other in tab:
        if other is row:
            continue
        f = other[e]
        if f:
            for j in nz:
                other[j] -= f * row[j]
    f = obj[e]
    if f:
        for j in nz:
            obj[j] -= f * row[j]


def _run(tab, obj, basis, allowed: Sequence[bool]) -> None:
    """Simplex iterations with Bland's rule until optimal; raises Unbounded."""
    ncol = len(obj) - 1
    while True:
        e = -1
        for j in range(ncol):
            if allowed[j] and obj[j] < 0:
                e = j
                break
        if e < 0:
            return
        best = None
        r = -1
        for i, row in enumerate(tab):
            a = row[e]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[r]):
                    best, r = ratio, i
        if r < 0:
            raise Unbounded("objective is unbounded below")
        _pivot(tab, obj, r, e)
        basis[r] = e


def solve_exact_lp(lp: LinearProgram) -> LPResult:
    """Exact optimum of ``lp``. Raises :class:`Infeasible` or :class:`Unbounded`."""
    n = lp.num_vars
    m = len(lp.rows)
    # normalise to nonnegative right-hand sides
    rows, senses, rhs = [], [], []
    for coeffs, sense, b in zip(lp.rows, lp.senses, lp.rhs):
        if b < 0:
            coeffs = {j: -v for j, v in coeffs.items()}
            sense = {"<=": ">=", ">=": "<=", "==": "=="}[sense]
            b = -b
        rows.append(coeffs)
        senses.append(sense)
        rhs.append(b)
    n_slack = sum(s != "==" for s in senses)
    n_art = sum(s != "<=" for s in senses)
    ncol = n + n_slack + n_art
    zero = Fraction(0)
    tab: list[list[Fraction]] = []
    basis: list[int] = []
    slack = n
    art = n + n_slack
    art_cols = []
    for coeffs, sense, b in zip(rows, senses, rhs):
        row = [zero] * (ncol + 1)
        for j, v in coeffs.items():
            row[j] = v
        row[-1] = b
        if sense == "<=":
            row[slack] = Fraction(1)
            basis.append(slack)
            slack += 1
        else:
            if sense == ">=":
                row[slack] = Fraction(-1)
                slack += 1
            row[art] = Fraction(1)
            basis.append(art)
            art_cols.append(art)
            art += 1
        tab.append(row)

    is_art = [False] * ncol
    for j in art_cols:
        is_art[j] = True

    if art_cols:
        obj = [zero] * (ncol + 1)
        for j in art_cols:
            obj[j] = Fraction(1)
        for i, row in enumerate(tab):
            if is_art[basis[i]]:
                for j, v in enumerate(row):
                    if v:
                        obj[j] -= v
        _run(tab, obj, basis, [True] * ncol)
        if obj[-1] != 0:
            raise Infeasible("no feasible point")
        # drive zero-level artificials out of the basis; drop redundant rows
        i = 0
        while i < len(tab):
            if is_art[basis[i]]:
                row = tab[i]
                e = next((j for j in range(ncol) if not is_art[j] and row[j]), -1)
                if e < 0:
                    del tab[i]
                    del basis[i]
                    continue
                _pivot(tab, obj, i, e)
                basis[i] = e
            i += 1

    allowed = [not a for a in is_art]
    obj = [zero] * (ncol + 1)
    for j, c in enumerate(lp.objective):
        obj[j] = Fraction(c)
    for i, row in enumerate(tab):
        cb = obj[basis[i]] if basis[i] < n else zero
        if cb:
            for j, v in enumerate(row):
                if v:
                    obj[j] -= cb * v
    _run(tab, obj, basis, allowed)
    x = [zero] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = tab[i][-1]
    value = sum((Fraction(c) * v for c, v in zip(lp.objective, x) if c and v), zero)
    return LPResult(value=value, x=x)


def solve_ilp(lp: LinearProgram, integer_vars: Iterable[int] | None = None, *,
              node_limit: int = 200_000, integral_objective: bool = False) -> LPResult:
    """Depth-first branch-and-bound with LP bounds.

    Branches on the lowest-index fractional integer variable, exploring the
    ``x <= floor`` child first. With ``integral_objective`` the bound is
    rounded up, which is valid when every optimum has an integer value.
    """
    ints = sorted(range(lp.num_vars) if integer_vars is None else set(integer_vars))
    best: LPResult | None = None
    stack: list[tuple] = [()]
    nodes = 0
    while stack:
        bounds = stack.pop()
        nodes += 1
        if nodes > node_limit:
            raise BudgetExhausted(f"branch-and-bound exceeded {node_limit} nodes")
        try:
            res = solve_exact_lp(lp.with_rows(({j: 1}, s, v) for j, s, v in bounds))
        except Infeasible:
            continue
        bound = math.ceil(res.value) if integral_objective else res.value
        if best is not None and bound >= best.value:
            continue
        frac = next((j for j in ints if res.x[j].denominator != 1), None)
        if frac is None:
            best = res
            continue
        v = res.x[frac]
        stack.append(bounds + ((frac, ">=", math.ceil(v)),))
        stack.append(bounds + ((frac, "<=", math.floor(v)),))
    if best is None:
        raise Infeasible("no integral feasible point")
    best.nodes = nodes
    return best
