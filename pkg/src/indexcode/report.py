"""Bound reports: parameter values, the inequalities between them, code verdicts.

Every inequality check is stated over values that appear in the same report,
so a reader can recompute each verdict from the JSON alone.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .cover import PARAMETERS, RELAXED, fmt, request_cover_point, solve
from .instance import (
    FAMILIES,
    GroupcastInstance,
    InstanceError,
    UnicastInstance,
    as_groupcast,
    gen_family,
    gen_figure2,
    gen_random,
    gic_to_uic,
    instance_digest,
    uic_as_gic,
)

# decimal upper bound on e; makes "a <= e*b" checks exact and conservative
E_UPPER = Fraction("2.7182818285")

INTEGRAL_OF = {"psi_f": "psi", "psi_fl": "psi_l", "psi_f_p": "psi_p", "psi_fl_p": "psi_l_p"}
RELAXED_OF = {v: k for k, v in INTEGRAL_OF.items()}

# (name, lhs, coefficient, rhs): value[lhs] <= coefficient * value[rhs]
INEQUALITIES = (
    ("local_chain_lower", "psi_fl_p", 1, "psi_fl"),
    ("local_chain_upper", "psi_fl", 1, "psi_f"),
    ("partition_chain_lower", "psi_fl_p", 1, "psi_f_p"),
    ("partition_chain_upper", "psi_f_p", 1, "psi_f"),
    ("local_gap_at_most_e", "psi_f", E_UPPER, "psi_fl"),
    ("partitioned_local_gap_at_most_e", "psi_f", E_UPPER, "psi_fl_p"),
    ("relaxation_cover", "psi_f", 1, "psi"),
    ("relaxation_local", "psi_fl", 1, "psi_l"),
    ("relaxation_partition", "psi_f_p", 1, "psi_p"),
    ("relaxation_partitioned_local", "psi_fl_p", 1, "psi_l_p"),
    ("local_below_cover", "psi_l", 1, "psi"),
    ("partition_below_cover", "psi_p", 1, "psi"),
    ("partitioned_local_below_local", "psi_l_p", 1, "psi_l"),
)


@dataclass
class Check:
    name: str
    inequality: str
    verdict: bool

    def to_json(self) -> dict:
        return {"name": self.name, "inequality": self.inequality, "verdict": "pass" if self.verdict else "fail"}


@dataclass
class BoundReport:
    label: str
    digest: str
    n: int
    m: int
    values: dict[str, Fraction]
    checks: list[Check] = field(default_factory=list)
    codes: dict[str, dict] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.verdict for c in self.checks)

    def to_json(self) -> dict:
        doc = {
            "instance": {"source": self.label, "digest": self.digest, "users": self.n, "packets": self.m},
            "parameters": {p: fmt(self.values[p]) for p in PARAMETERS + ("minrank",) if p in self.values},
            "checks": [c.to_json() for c in self.checks],
        }
        if self.codes:
            doc["codes"] = self.codes
        return doc


# ---------------------------------------------------------------------------
# generator specs
# ---------------------------------------------------------------------------

_RANGE = re.compile(r"^(-?\d+)\.\.(-?\d+)$")


def _expand_arg(arg: str) -> list[str]:
    m = _RANGE.match(arg.strip())
    if not m:
        return [arg.strip()]
    lo, hi = int(m.group(1)), int(m.group(2))
    if hi < lo:
        raise InstanceError(f"empty range {arg!r}")
    return [str(i) for i in range(lo, hi + 1)]


def _int(s: str, what: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise InstanceError(f"{what} must be an integer, got {s!r}") from None


def instances_from_spec(spec: str) -> list[tuple[str, GroupcastInstance | UnicastInstance]]:
    """Instances named by a ``name:args`` spec; integer args accept ``a..b`` ranges.

    ``figure2:k``, ``complete:n``, ``empty:n``, ``dicycle:n``, ``bidicycle:n``
    and ``random:n,m,density,seed``.
    """
    name, sep, rest = spec.partition(":")
    if not sep or not rest:
        raise InstanceError(f"generator spec {spec!r} is not of the form name:args")
    args = [_expand_arg(a) for a in rest.split(",")]
    out = []
    for combo in itertools.product(*args):
        label = f"{name}:{','.join(combo)}"
        if name == "figure2":
            if len(combo) != 1:
                raise InstanceError("figure2 takes one argument k")
            out.append((label, gen_figure2(_int(combo[0], "k"))))
        elif name in FAMILIES:
            if len(combo) != 1:
                raise InstanceError(f"{name} takes one argument n")
            out.append((label, gen_family(name, _int(combo[0], "n"))))
        elif name == "random":
            if len(combo) != 4:
                raise InstanceError("random takes n,m,density,seed")
            try:
                density = float(combo[2])
            except ValueError:
                raise InstanceError(f"density must be a number, got {combo[2]!r}") from None
            out.append((label, gen_random(_int(combo[0], "n"), _int(combo[1], "m"), density,
                                          _int(combo[3], "seed"))))
        else:
            raise InstanceError(f"unknown generator {name!r}")
    return out


# ---------------------------------------------------------------------------
# computing and checking
# ---------------------------------------------------------------------------

def compute_bounds(h: GroupcastInstance, parameters=PARAMETERS, **kw) -> dict[str, object]:
    """BoundValue per parameter (witness included)."""
    return {p: solve(h, p, **kw) for p in parameters}


def _render(lhs: str, coef, rhs: str, values: dict[str, Fraction]) -> str:
    c = "" if coef == 1 else ("2.7182818285 * " if coef == E_UPPER else f"{fmt(coef)} * ")
    return f"{lhs} = {fmt(values[lhs])} <= {c}{rhs} = {c}{fmt(values[rhs])}"


def theorem_checks(values: dict[str, Fraction], h: GroupcastInstance | None = None,
                   witnesses: dict | None = None) -> list[Check]:
    """Every known inequality among the parameters present in ``values``."""
    checks = []
    for name, lhs, coef, rhs in INEQUALITIES:
        if lhs in values and rhs in values:
            checks.append(Check(name, _render(lhs, coef, rhs, values),
                                Fraction(values[lhs]) <= coef * Fraction(values[rhs])))
    if h is not None and witnesses and "psi_f_p" in witnesses:
        ok, obj = request_cover_point(h, witnesses["psi_f_p"].witness)
        checks.append(Check(
            "request_cover_point_feasible",
            f"covering each group by its request classes with t_M = d_M gives objective {fmt(obj)} = psi_f_p = "
            f"{fmt(values['psi_f_p'])}",
            ok and obj == values["psi_f_p"]))
    return checks


def conversion_checks(h: GroupcastInstance, **kw) -> list[Check]:
    """Compare a groupcast instance with its unicast conversion."""
    g = uic_as_gic(gic_to_uic(h))
    a = solve(h, "psi_f", **kw).value
    b = solve(g, "psi_f", **kw).value
    c = solve(h, "psi_fl", **kw).value
    d = solve(g, "psi_fl", **kw).value
    return [
        Check("conversion_preserves_psi_f", f"psi_f = {fmt(a)} == psi_f(converted) = {fmt(b)}", a == b),
        Check("conversion_does_not_raise_psi_fl", f"psi_fl(converted) = {fmt(d)} <= psi_fl = {fmt(c)}", d <= c),
    ]


def build_report(label: str, inst, parameters=PARAMETERS, *, checks: bool = True, **kw) -> tuple[BoundReport, dict]:
    h = as_groupcast(inst)
    bounds = compute_bounds(h, parameters, **kw)
    values = {p: b.value for p, b in bounds.items()}
    rep = BoundReport(label, instance_digest(h), h.n, h.m, values)
    if checks:
        rep.checks = theorem_checks(values, h, bounds)
    return rep, bounds


def select_parameters(names: list[str] | None, relax: bool | None) -> tuple[str, ...]:
    """Parameter list from ``--param``/``--all`` and ``--relax``/``--integral``."""
    if names is None:
        chosen = list(PARAMETERS)
        if relax is True:
            chosen = [p for p in chosen if p in RELAXED]
        elif relax is False:
            chosen = [p for p in chosen if p not in RELAXED]
        return tuple(chosen)
    out = []
    for p in names:
        if p not in PARAMETERS:
            raise InstanceError(f"unknown parameter {p!r}; expected one of {', '.join(PARAMETERS)}")
        if relax is True:
            p = RELAXED_OF.get(p, p)
        elif relax is False:
            p = INTEGRAL_OF.get(p, p)
        if p not in out:
            out.append(p)
    return tuple(out)


def decimal(x: Fraction) -> str:
    return f"{float(x):.6g}"


def render_table(reports: list[BoundReport]) -> str:
    lines = []
    for rep in reports:
        lines.append(f"instance {rep.label}  users={rep.n} packets={rep.m}  sha256={rep.digest[:16]}")
        width = max([len(p) for p in rep.values] + [9])
        lines.append(f"  {'parameter':<{width}}  {'value':>10}  exact")
        for p in PARAMETERS + ("minrank",):
            if p in rep.values:
                v = rep.values[p]
                lines.append(f"  {p:<{width}}  {decimal(v):>10}  {fmt(v)}")
        for c in rep.checks:
            lines.append(f"  [{'pass' if c.verdict else 'FAIL'}] {c.name}: {c.inequality}")
        for p, code in rep.codes.items():
            if "error" in code:
                lines.append(f"  code {p}: construction failed: {code['error']}")
                continue
            lines.append(f"  code {p}: rate {code['rate']} ({decimal(Fraction(code['rate']))}) over GF({code['field']['q']}),"
                         f" decodable={code['decodable']}")
    return "\n".join(lines) + "\n"
