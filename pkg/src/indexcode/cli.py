"""Command line: ``indexcode {gen,compute,code,verify-theorems,minrank}``.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from .codes import ConstructionError, build_code, round_trip, verify_decodable
from .cover import DEFAULT_MAX_SUBSET, fmt
from .gf import FieldTooSmall, gf
from .hypercliques import CapExceeded
from .instance import (
    InstanceError,
    UnicastInstance,
    as_groupcast,
    as_unicast,
    instance_digest,
    parse_instance,
    serialize_instance,
    to_document,
)
from .lp import BudgetExhausted
from .minrank import minrank, minrank_code
from .report import (
    BoundReport,
    build_report,
    conversion_checks,
    instances_from_spec,
    render_table,
    select_parameters,
)

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def _load(args) -> list[tuple[str, object]]:
    if args.input:
        path = Path(args.input)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            h = parse_instance(text)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        return [(path.name, h)]
    items = instances_from_spec(args.gen)
    if getattr(args, "trials", None) and args.gen.startswith("random:") and args.command == "verify-theorems":
        # a random spec with --trials N means N instances on consecutive seeds
        base = items[0][0].rsplit(",", 1)[0]
        seed0 = args.seed if args.seed is not None else int(items[0][0].rsplit(",", 1)[1])
        items = []
        for s in range(seed0, seed0 + args.trials):
            items += instances_from_spec(f"{base},{s}")
    return items


def _field(args):
    if args.field is None:
        return None
    try:
        return gf(args.field)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _emit(args, docs: list[dict], reports: list[BoundReport] | None = None) -> None:
    if args.format == "table" and reports is not None:
        sys.stdout.write(render_table(reports))
    else:
        sys.stdout.write(_dump(docs[0] if len(docs) == 1 else docs))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_gen(args) -> int:
    items = [as_groupcast(inst) for _, inst in _load(args)]
    if len(items) == 1:
        sys.stdout.write(serialize_instance(items[0]))
    else:
        sys.stdout.write(_dump([to_document(h) for h in items]))
    return EXIT_OK


def cmd_compute(args) -> int:
    params = select_parameters(args.param, args.relax)
    reports = []
    for label, inst in _load(args):
        rep, _ = build_report(label, inst, params, max_subset=args.max_subset)
        reports.append(rep)
    _emit(args, [r.to_json() for r in reports], reports)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_VERIFY


def cmd_verify_theorems(args) -> int:
    reports = []
    failed = []
    for label, inst in _load(args):
        h = as_groupcast(inst)
        rep, _ = build_report(label, h, max_subset=args.max_subset)
        rep.checks += conversion_checks(h)
        reports.append(rep)
        if not rep.ok:
            failed.append((label, h))
    for label, h in failed:
        print(f"violation on {label}; instance follows", file=sys.stderr)
        sys.stderr.write(serialize_instance(h))
    summary = {
        "instances": len(reports),
        "checks": sum(len(r.checks) for r in reports),
        "violations": sum(not c.verdict for r in reports for c in r.checks),
        "verdict": "pass" if not failed else "fail",
        "reports": [r.to_json() for r in reports],
    }
    if args.format == "table":
        sys.stdout.write(render_table(reports))
        sys.stdout.write(f"{summary['instances']} instances, {summary['checks']} checks, "
                         f"{summary['violations']} violations: {summary['verdict']}\n")
    else:
        sys.stdout.write(_dump(summary))
    return EXIT_OK if not failed else EXIT_VERIFY


def cmd_code(args) -> int:
    params = select_parameters(args.param, args.relax)
    field = _field(args)
    reports = []
    docs = []
    code_docs = []
    ok = True
    for label, inst in _load(args):
        h = as_groupcast(inst)
        rep, bounds = build_report(label, h, params, checks=False, max_subset=args.max_subset)
        for p in params:
            try:
                code = build_code(h, p, bounds[p].witness, field)
            except FieldTooSmall as exc:
                raise InputError(f"{exc}; use --field with q >= {exc.minimum}") from None
            except ConstructionError as exc:
                ok = False
                rep.codes[p] = {"error": str(exc), "decodable": False}
                continue
            dec = verify_decodable(h, code)
            rt = round_trip(h, code, dec, args.trials, args.seed or 0) if dec.overall else False
            good = dec.overall and rt and code.rate == bounds[p].value
            ok &= good
            rep.codes[p] = {
                "rate": fmt(code.rate),
                "subpacketization": code.subpacketization,
                "transmissions": code.transmissions,
                "field": code.field.describe(),
                "decodable": dec.overall,
                "users": {u: ("decodable" if d.decodable else "not decodable") for u, d in dec.users.items()},
                "round_trip": {"trials": args.trials, "passed": bool(rt)},
            }
            code_docs.append({"instance": label, "digest": instance_digest(h), **code.to_json()})
        reports.append(rep)
        docs.append(rep.to_json())
    if args.output:
        Path(args.output).write_text(_dump(code_docs[0] if len(code_docs) == 1 else code_docs), encoding="utf-8")
    _emit(args, docs, reports)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_minrank(args) -> int:
    field = _field(args) or gf(2)
    docs = []
    reports = []
    ok = True
    for label, inst in _load(args):
        if isinstance(inst, UnicastInstance):
            g = inst
        else:
            try:
                g = as_unicast(inst)
            except InstanceError:
                raise InputError("minrank needs a unicast instance (one packet per user, packet x<id>)") from None
        b = minrank(g, field)
        code = minrank_code(g, b.witness)
        h = as_groupcast(g)
        dec = verify_decodable(h, code)
        ok &= dec.overall
        rep = BoundReport(label, instance_digest(h), h.n, h.m, {"minrank": b.value})
        rep.codes["minrank"] = {"rate": fmt(code.rate), "subpacketization": 1, "transmissions": code.transmissions,
                                "field": field.describe(), "decodable": dec.overall}
        doc = rep.to_json()
        doc["fitting_matrix"] = b.witness.to_json()
        docs.append(doc)
        reports.append(rep)
    _emit(args, docs, reports)
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {
    "gen": cmd_gen,
    "compute": cmd_compute,
    "code": cmd_code,
    "verify-theorems": cmd_verify_theorems,
    "minrank": cmd_minrank,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="indexcode", description="Index coding bounds and linear codes.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--gen", metavar="SPEC", help="generator spec, e.g. figure2:1..3 or random:6,4,0.5,3")
    src.add_argument("--input", metavar="FILE", help="instance JSON file")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--seed", type=int, default=None)

    solve_opts = argparse.ArgumentParser(add_help=False)
    which = solve_opts.add_mutually_exclusive_group()
    which.add_argument("--param", metavar="NAME", action="append", help="parameter to compute (repeatable)")
    which.add_argument("--all", action="store_true", help="every parameter (default)")
    rel = solve_opts.add_mutually_exclusive_group()
    rel.add_argument("--relax", dest="relax", action="store_const", const=True, default=None,
                     help="LP relaxations only")
    rel.add_argument("--integral", dest="relax", action="store_const", const=False, help="integral programs only")
    solve_opts.add_argument("--max-subset", type=int, default=DEFAULT_MAX_SUBSET,
                            help="largest interaction component for subset enumeration")

    sub.add_parser("gen", parents=[common], help="print generated instances as JSON")
    sub.add_parser("compute", parents=[common, solve_opts], help="compute bound parameters")
    p = sub.add_parser("code", parents=[common, solve_opts], help="build and verify linear index codes")
    p.add_argument("--field", type=int, metavar="Q")
    p.add_argument("--trials", type=int, default=100, help="round-trip trials per code")
    p.add_argument("--output", metavar="FILE", help="write the code matrices as JSON")
    p = sub.add_parser("verify-theorems", parents=[common], help="check the inequalities between parameters")
    p.add_argument("--trials", type=int, default=None, help="with a random spec: number of consecutive seeds")
    p.add_argument("--max-subset", type=int, default=DEFAULT_MAX_SUBSET)
    p = sub.add_parser("minrank", parents=[common], help="minrank of a unicast instance")
    p.add_argument("--field", type=int, metavar="Q")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InputError, InstanceError, FieldTooSmall) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (CapExceeded, BudgetExhausted) as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
