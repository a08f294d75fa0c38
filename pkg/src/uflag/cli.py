"""Command-line front end.

Every verb emits a Report: verb echo, inputs, outputs, audit notes, and a
discrepancy list.  JSON output round-trips; text output is deterministic.
Exit codes: 0 success, 2 input error, 3 internal contradiction.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import auerbach, complex3, gysin, hopf, selftest, sseq, steenrod
from .f2linalg import MalformedInputError
from .grammar import ParseError, format_class, format_mono, parse_class
from .seeds import builtin_seeds
from .sseq import SeedContradictionError


@dataclass
class Report:
    verb: str
    inputs: dict
    outputs: dict
    audit: list[str] = field(default_factory=list)
    discrepancies: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "verb": self.verb,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "audit": self.audit,
            "discrepancies": self.discrepancies,
        }

    def render_text(self) -> str:
        lines = [f"verb: {self.verb}"]
        for key in sorted(self.inputs):
            lines.append(f"input {key}: {self.inputs[key]}")
        lines.extend(_render_value("", self.outputs))
        for note in self.audit:
            lines.append(f"audit: {note}")
        for d in self.discrepancies:
            lines.append(f"discrepancy: {d}")
        return "\n".join(lines)


def _render_value(prefix: str, value) -> list[str]:
    if isinstance(value, dict):
        lines = []
        for key in value:
            lines.extend(_render_value(f"{prefix}{key}.", value[key]))
        return lines
    if isinstance(value, list) and value and isinstance(value[0], (dict, list)):
        lines = []
        for i, item in enumerate(value):
            lines.extend(_render_value(f"{prefix}{i}.", item))
        return lines
    return [f"{prefix.rstrip('.')}: {value}"]


def _parse_in_component(text: str, n: int | None) -> hopf.HopfClass:
    c = parse_class(text)
    if n is not None and not c.is_zero() and c.component != n:
        raise MalformedInputError(
            f"class {text!r} lives in component {c.component}, expected {n}"
        )
    return c


def _seed_data(n: int, path: str | None) -> dict:
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    return builtin_seeds(n)


def _cell_outputs(rep: sseq.SSReport) -> dict:
    einf = {}
    for (p, q), cell in sorted(rep.einf.items()):
        if cell.dim_hi == 0 or p + q > rep.cutoff:
            continue
        einf[f"({p},{q})"] = {
            "dim": cell.dim_hi if cell.dim_exact else [cell.dim_lo, cell.dim_hi],
            "exact": cell.dim_exact,
        }
    return einf


def cmd_basis(args) -> Report:
    basis = hopf.enumerate_basis(args.n, args.degree)
    return Report(
        "basis",
        {"n": args.n, "degree": args.degree},
        {"dimension": len(basis), "monomials": [format_mono(m) for m in basis]},
    )


def cmd_cup(args) -> Report:
    a = _parse_in_component(args.a, args.n)
    b = _parse_in_component(args.b, args.n)
    return Report(
        "cup",
        {"a": args.a, "b": args.b},
        {"result": format_class(hopf.cup(a, b))},
    )


def cmd_odot(args) -> Report:
    a = parse_class(args.a)
    b = parse_class(args.b)
    return Report(
        "odot", {"a": args.a, "b": args.b}, {"result": format_class(hopf.odot(a, b))}
    )


def cmd_coprod(args) -> Report:
    c = _parse_in_component(args.a, args.n)
    if args.split:
        n1, _, n2 = args.split.partition(",")
        tc = hopf.coproduct_component(c, (int(n1), int(n2)))
    else:
        tc = hopf.coproduct(c)
    pairs = sorted(
        (format_mono(l), format_mono(r)) for l, r in tc.pairs
    )
    return Report(
        "coprod",
        {"class": args.a, "split": args.split},
        {"pairs": [f"{l} (x) {r}" for l, r in pairs]},
    )


def cmd_sq1(args) -> Report:
    c = _parse_in_component(args.a, args.n)
    rules = steenrod.default_rules()
    if args.rules:
        with open(args.rules, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        rules = steenrod.rules_from_seed(data.get("sq1_rules", []))
    return Report(
        "sq1", {"class": args.a}, {"result": format_class(steenrod.sq1(c, rules))}
    )


def cmd_euler(args) -> Report:
    e = gysin.euler_class(args.n)
    return Report("euler", {"n": args.n}, {"class": format_class(e.value)})


def cmd_bpos(args) -> Report:
    max_deg = args.max_deg if args.max_deg is not None else gysin.default_cutoff(args.n)
    dims = gysin.bpos_dims(args.n, max_deg)
    groups = {}
    for d in range(max_deg + 1):
        g = gysin.bpos_group(args.n, d)
        groups[str(d)] = {
            "dim": g.dim,
            "image_basis": list(g.coker_basis),
            "transfer_basis": list(g.ker_basis),
        }
    discrepancies = []
    if args.n == 5:
        discrepancies = [
            f"{c.source} reports dim H^{c.degree} = {c.reported}, computed {c.computed}"
            for c in gysin.n5_comparison(min(max_deg, 5))
        ]
    return Report(
        "bpos",
        {"n": args.n, "max_deg": max_deg},
        {"dims": dims, "groups": groups},
        discrepancies=discrepancies,
    )


def cmd_sseq(args) -> Report:
    data = _seed_data(args.n, args.seeds)
    seeds, _ = sseq.load_seed_file(data, args.n)
    rep = sseq.run(args.n, seeds, args.cutoff)
    totals = {
        str(t): (c.dim_hi if c.dim_exact else [c.dim_lo, c.dim_hi])
        for t, c in enumerate(rep.totals)
    }
    return Report(
        "sseq",
        {"n": args.n, "seeds": args.seeds or "builtin", "cutoff": rep.cutoff},
        {
            "poincare": rep.poincare_text(),
            "coefficients": list(rep.poincare),
            "einf_totals": totals,
            "einf_cells": _cell_outputs(rep),
            "branches": rep.branch_count,
        },
        audit=rep.audit,
    )


def cmd_complex3(args) -> Report:
    outputs: dict = {}
    audit: list[str] = []
    for prime in ([args.prime] if args.prime else [2, 3]):
        res = complex3.resolve(prime)
        outputs[f"p{prime}"] = {
            "cohomology": {str(d): v for d, v in res["cohomology"].items()},
            "differentials": [list(x) for x in res["differentials"]],
        }
        for module in complex3.MODULES:
            feas = complex3.les_feasibility(prime, module)
            if not feas["feasible"]:
                audit.append(f"LES infeasible for {module} at {prime}")
    if not args.prime or args.prime == 2:
        outputs["f2_ring"] = {
            k: (list(v) if isinstance(v, tuple) else v)
            for k, v in complex3.f2_ring_presentation().items()
        }
    return Report("complex3", {"prime": args.prime}, outputs, audit=audit)


def cmd_auerbach(args) -> Report:
    rep = auerbach.auerbach_report(args.n, args.field)
    return Report("auerbach", {"n": args.n, "field": args.field}, rep.to_dict())


def cmd_selftest(args) -> Report:
    checks = selftest.run_all(quick=args.quick)
    lines = selftest.summary_lines(checks)
    discrepancies = [d for c in checks for d in c.discrepancies]
    return Report(
        "selftest",
        {"quick": args.quick},
        {
            "passed": sum(1 for c in checks if c.passed),
            "total": len(checks),
            "lines": lines,
        },
        discrepancies=discrepancies,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uflag",
        description="Exact mod-2 cohomology engine for hyperoctahedral groups "
        "and low-order unordered flag manifolds",
    )
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("basis", help="enumerate the Hopf monomial basis")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-d", "--degree", type=int, required=True)
    p.set_defaults(fn=cmd_basis)

    p = sub.add_parser("cup", help="cup product of two classes")
    p.add_argument("-n", type=int, default=None)
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(fn=cmd_cup)

    p = sub.add_parser("odot", help="transfer product of two classes")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(fn=cmd_odot)

    p = sub.add_parser("coprod", help="coproduct of a class")
    p.add_argument("-n", type=int, default=None)
    p.add_argument("a")
    p.add_argument("--split", default=None, help="component split n1,n2")
    p.set_defaults(fn=cmd_coprod)

    p = sub.add_parser("sq1", help="first Steenrod square")
    p.add_argument("-n", type=int, default=None)
    p.add_argument("a")
    p.add_argument("--rules", default=None, help="JSON file with sq1_rules")
    p.set_defaults(fn=cmd_sq1)

    p = sub.add_parser("euler", help="the Euler class of the double cover")
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(fn=cmd_euler)

    p = sub.add_parser("bpos", help="cohomology of the index-2 subgroup")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--max-deg", type=int, default=None)
    p.set_defaults(fn=cmd_bpos)

    p = sub.add_parser("sseq", help="run the seeded spectral sequence")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--seeds", default=None, help="seed JSON file")
    p.add_argument("--cutoff", type=int, default=None)
    p.set_defaults(fn=cmd_sseq)

    p = sub.add_parser("complex3", help="integral pages for the complex case")
    p.add_argument("--prime", type=int, choices=(2, 3), default=None)
    p.set_defaults(fn=cmd_complex3)

    p = sub.add_parser("auerbach", help="lower bounds for Auerbach bases")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--field", choices=("real", "complex"), required=True)
    p.set_defaults(fn=cmd_auerbach)

    p = sub.add_parser("selftest", help="run the built-in verification suite")
    p.add_argument("--quick", action="store_true")
    p.set_defaults(fn=cmd_selftest)

    return parser


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        report: Report = args.fn(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(exc.caret_line(), file=sys.stderr)
        return 2
    except MalformedInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SeedContradictionError, complex3.AmbiguityError) as exc:
        print(f"contradiction: {exc}", file=sys.stderr)
        return 3
    if args.format == "json":
        print(json.dumps(report.to_dict(), sort_keys=True))
    else:
        print(report.render_text())
    if report.verb == "selftest":
        out = report.outputs
        return 0 if out["passed"] == out["total"] else 1
    return 0


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
