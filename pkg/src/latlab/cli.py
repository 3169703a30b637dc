"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import constructions, discforms, dpn, expr, ledger, lattices, verify
from .errors import ConfigError, LatticeError, ParseError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class _Failure(Exception):
    """Carries a report whose checks did not all pass."""

    def __init__(self, report: dict[str, Any]):
        super().__init__("verification failed")
        self.report = report


def _frac(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _parse_vector(text: str) -> list[Fraction]:
    try:
        return [Fraction(t.strip()) for t in text.replace(";", ",").split(",") if t.strip()]
    except ValueError as exc:
        raise ParseError(f"bad vector {text!r}: {exc}") from exc


# ---------------------------------------------------------------- commands


def cmd_show(args) -> dict[str, Any]:
    L = expr.lattice(args.expr)
    p, z, n = _sig3(L)
    return {"command": "lat show", "expr": expr.to_string(expr.parse(args.expr)), "rank": L.rank,
            "gram": L.matrix(), "signature": [p, z, n], "even": L.is_even, "det": L.det}


def _sig3(L: lattices.Lattice) -> tuple[int, int, int]:
    from . import linalg
    return linalg.signature(L.matrix())


def cmd_disc(args) -> dict[str, Any]:
    L = expr.lattice(args.expr)
    q = L.discriminant_form
    out: dict[str, Any] = {"command": "lat disc", "expr": expr.to_string(expr.parse(args.expr)),
                           "orders": list(q.orders), "size": q.size,
                           "gram": [[_frac(x) for x in row] for row in q.gram],
                           "values_mod": 2 if q.even else 1}
    if discforms.is_two_elementary(q):
        out["a"] = discforms.length(q)
        out["delta"] = discforms.parity(q) if q.even else None
    out["gauss_signature"] = discforms.gauss_signature(q) if q.even and q.size <= 2 ** 12 else None
    return out


def cmd_order(args) -> dict[str, Any]:
    L = expr.lattice(args.expr)
    go = discforms.isometry_group_order(L.discriminant_form)
    return {"command": "lat order", "expr": expr.to_string(expr.parse(args.expr)),
            "order": go.value, "derivation": go.derivation}


def cmd_invariant(args) -> dict[str, Any]:
    L = expr.lattice(args.expr)
    inv = lattices.main_invariant(L)
    return {"command": "lat invariant", "expr": expr.to_string(expr.parse(args.expr)),
            "r": inv.r, "a": inv.a, "delta": inv.delta, "g": inv.g, "k": inv.k,
            "signature": list(inv.signature)}


def cmd_isom(args) -> dict[str, Any]:
    L1, L2 = expr.lattice(args.expr1), expr.lattice(args.expr2)
    ok, route = lattices.isometry_route(L1, L2)
    return {"command": "lat isom", "expr1": expr.to_string(expr.parse(args.expr1)),
            "expr2": expr.to_string(expr.parse(args.expr2)), "isometric": ok, "route": route}


def cmd_complement(args) -> dict[str, Any]:
    L = expr.lattice(args.expr)
    v = _parse_vector(args.vector)
    if any(x.denominator != 1 for x in v):
        raise ParseError("complement vector must be integral")
    C = lattices.orthogonal_complement(L, [int(x) for x in v])
    q = C.discriminant_form
    return {"command": "lat complement", "expr": expr.to_string(expr.parse(args.expr)),
            "vector": [int(x) for x in v], "norm": L.norm([int(x) for x in v]), "gram": C.matrix(),
            "basis": [[_frac(x) for x in row] for row in C.embedding],
            "signature": list(C.signature), "even": C.is_even, "det": C.det,
            "disc_orders": list(q.orders)}


def cmd_heegner(args) -> dict[str, Any]:
    L = expr.lattice(args.expr)
    found = list(lattices.heegner_vectors(L, args.norm, half_in_dual=args.half_dual, box=args.box,
                                          limit=args.limit))
    out: dict[str, Any] = {"command": "lat heegner", "expr": expr.to_string(expr.parse(args.expr)),
                           "norm": args.norm, "half_dual": args.half_dual,
                           "vectors": [list(v) for v in found]}
    if found:
        C = lattices.orthogonal_complement(L, found[0])
        gd = lattices.glue_data(L, [found[0]])
        q = C.discriminant_form
        out["complement"] = {"signature": list(C.signature), "even": C.is_even,
                             "disc_orders": list(q.orders),
                             "generator_norms": [_frac(q.q(q.generator(i))) for i in range(q.ngens)],
                             "glue_index": gd.index}
    return out


def cmd_build(args) -> dict[str, Any]:
    c = constructions.load_construction(args.file)
    res = constructions.check(c)
    res["command"] = "lat build"
    res["passed"] = res.get("invariant_ok", True) and res.get("isometric", True)
    if not res["passed"]:
        raise _Failure(res)
    return res


def cmd_dpn(args) -> dict[str, Any]:
    results = []
    for c in dpn.load_configs(args.file):
        inv = dpn.full_invariant(c).as_dict()
        item: dict[str, Any] = {"id": c.name, "singularities": c.singularity_label(), **inv}
        if c.expected:
            item["expected"] = dict(c.expected)
            item["passed"] = all(inv.get(k) == v for k, v in c.expected.items())
        results.append(item)
    report = {"command": "dpn compute", "configs": results,
              "passed": all(r.get("passed", True) for r in results)}
    if not report["passed"]:
        raise _Failure(report)
    return report


def cmd_ledger(args) -> dict[str, Any]:
    report = ledger.run_manifest(ledger.load_manifest(args.file))
    if not report["passed"]:
        raise _Failure(report)
    return report


def cmd_census(args) -> dict[str, Any]:
    report = ledger.census_report(ledger.nikulin_census(max_r=args.max_r), max_r=args.max_r)
    if not report["passed"]:
        raise _Failure(report)
    return report


def cmd_verify(args) -> dict[str, Any]:
    report = verify.verify_all(include_census=not args.skip_census)
    if not report["passed"]:
        raise _Failure(report)
    return report


# ---------------------------------------------------------------- output


def _human(report: dict[str, Any]) -> str:
    cmd = report.get("command", "")
    lines: list[str] = []
    if cmd == "lat show":
        lines.append(f"{report['expr']}: rank {report['rank']}, signature (+,0,-) = "
                     f"{tuple(report['signature'])}, {'even' if report['even'] else 'odd'}, det {report['det']}")
        lines += ["  " + " ".join(f"{x:>3}" for x in row) for row in report["gram"]]
    elif cmd == "lat disc":
        lines.append(f"{report['expr']}: D = " + (" x ".join(f"Z/{n}" for n in report["orders"]) or "0")
                     + f" (order {report['size']})")
        for row in report["gram"]:
            lines.append("  " + " ".join(f"{x:>5}" for x in row))
        if "a" in report:
            lines.append(f"  a = {report['a']}, delta = {report['delta']}")
        lines.append(f"  Gauss signature = {report['gauss_signature']}")
    elif cmd == "lat order":
        lines.append(f"|O(D({report['expr']}))| = {report['order']} [{report['derivation']}]")
    elif cmd == "lat invariant":
        lines.append(f"{report['expr']}: (r, a, delta) = ({report['r']}, {report['a']}, {report['delta']})"
                     + (f", (g, k) = ({report['g']}, {report['k']})" if report["g"] is not None else ""))
    elif cmd == "lat isom":
        lines.append(f"{report['expr1']} {'~' if report['isometric'] else '!~'} {report['expr2']} "
                     f"[{report['route']}]")
    elif cmd == "lat complement":
        lines.append(f"complement of {report['vector']} (norm {report['norm']}): signature "
                     f"{tuple(report['signature'])}, {'even' if report['even'] else 'odd'}, det {report['det']}, "
                     f"D orders {report['disc_orders']}")
        lines += ["  " + " ".join(f"{x:>3}" for x in row) for row in report["gram"]]
    elif cmd == "lat heegner":
        if not report["vectors"]:
            lines.append("no vectors found")
        for v in report["vectors"]:
            lines.append(str(tuple(v)))
        if "complement" in report:
            c = report["complement"]
            lines.append(f"complement of the first: signature {tuple(c['signature'])}, D orders "
                         f"{c['disc_orders']}, generator norms {c['generator_norms']}, glue index {c['glue_index']}")
    elif cmd == "dpn compute":
        for r in report["configs"]:
            mark = "" if "passed" not in r else ("  ok" if r["passed"] else "  MISMATCH")
            lines.append(f"{r['id'] or '-'}: ({r['r']}, {r['a']}, {r['delta']}) g={r['g']} k={r['k']} "
                         f"[{r['delta_source']}]{mark}")
    elif cmd == "ledger run":
        for e in report["entries"]:
            lines.append(f"{'PASS' if e['passed'] else 'FAIL'} {e['id']}: dim {e['moduli_dim']}/"
                         f"{e['expected_dim']} order {e.get('order')} degree {e.get('degree')}"
                         + ("" if e["passed"] else "  " + "; ".join(e["failures"])))
        lines.append(f"{report['count'] - report['failures']}/{report['count']} entries pass")
    elif cmd == "census":
        exp = report["expected_count"]
        lines.append(f"{report['count']} triples" + (f" (expected {exp})" if exp is not None else " (truncated run)"))
        for key, cert in report["certificates"].items():
            lines.append(f"  ({key}): L+ = {cert['plus']}; L- = {cert['minus']}")
        for field in ("named_missing", "parity_violators", "verification_failures"):
            if report[field]:
                lines.append(f"{field}: {report[field]}")
        for side, triples in report["symmetric_difference"].items():
            if triples:
                lines.append(f"{side}: {triples}")
    elif cmd == "verify":
        for name, items in report["sections"].items():
            ok = sum(i["passed"] for i in items)
            lines.append(f"{'PASS' if ok == len(items) else 'FAIL'} {name}: {ok}/{len(items)}")
            for i in items:
                if not i["passed"]:
                    lines.append(f"    failed: {i['name']}: {i['detail']}")
    elif cmd == "lat build":
        lines.append(f"{report['id']}: invariant {tuple(report['invariant'])}"
                     + (f", isometric to {report['isometric_to']}: {report['isometric']}"
                        if "isometric_to" in report else ""))
    else:
        lines.append(json.dumps(report))
    if "passed" in report and cmd not in ("dpn compute", "lat build"):
        lines.append("PASSED" if report["passed"] else "FAILED")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="latlab", description="Exact lattice and discriminant form toolkit.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="group", required=True)

    lat = sub.add_parser("lat", help="operations on a lattice expression")
    lsub = lat.add_subparsers(dest="op", required=True)
    for name, fn, hlp in (("show", cmd_show, "Gram matrix, signature, parity, determinant"),
                          ("disc", cmd_disc, "discriminant form"),
                          ("order", cmd_order, "order of the discriminant form isometry group"),
                          ("invariant", cmd_invariant, "main invariant (r, a, delta, g, k)")):
        sp = lsub.add_parser(name, help=hlp)
        sp.add_argument("expr")
        sp.set_defaults(func=fn)
    sp = lsub.add_parser("isom", help="isometry test")
    sp.add_argument("expr1")
    sp.add_argument("expr2")
    sp.set_defaults(func=cmd_isom)
    sp = lsub.add_parser("complement", help="orthogonal complement of a vector")
    sp.add_argument("expr")
    sp.add_argument("--vector", required=True, help="comma-separated coordinates in the Gram basis")
    sp.set_defaults(func=cmd_complement)
    sp = lsub.add_parser("heegner", help="search primitive vectors of a given norm")
    sp.add_argument("expr")
    sp.add_argument("--norm", type=int, required=True)
    sp.add_argument("--half-dual", action="store_true", help="require v/2 in the dual lattice")
    sp.add_argument("--box", type=int, default=4)
    sp.add_argument("--limit", type=int, default=1)
    sp.set_defaults(func=cmd_heegner)
    sp = lsub.add_parser("build", help="build an overlattice from a glue fixture file")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_build)

    d = sub.add_parser("dpn", help="main invariants of DPN configurations")
    dsub = d.add_subparsers(dest="op", required=True)
    sp = dsub.add_parser("compute")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_dpn)

    lg = sub.add_parser("ledger", help="run a manifest of dimension and degree checks")
    lgsub = lg.add_subparsers(dest="op", required=True)
    sp = lgsub.add_parser("run")
    sp.add_argument("file", nargs="?", default=None, help="manifest (default: bundled)")
    sp.set_defaults(func=cmd_ledger)

    sp = sub.add_parser("census", help="constructive census of main invariants")
    sp.add_argument("--max-r", type=int, default=20)
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("verify", aliases=["verify-paper"], help="run every bundled check")
    sp.add_argument("--skip-census", action="store_true")
    sp.set_defaults(func=cmd_verify)
    return p


def _emit(report: dict[str, Any], as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, indent=2))
    else:
        print(_human(report))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except _Failure as f:
        _emit(f.report, args.json)
        return EXIT_FAIL
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConfigError, LatticeError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(report, args.json)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
