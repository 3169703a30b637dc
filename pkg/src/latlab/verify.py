"""Bundled identity suite: every numeric claim the package ships with, replayed."""

from __future__ import annotations

import time
from fractions import Fraction
from typing import Any, Callable

from . import constructions, discforms, dpn, expr, ledger, lattices
from .errors import LatticeError

# lattice expression -> |O(D)|
GROUP_ORDER_TABLE: tuple[tuple[str, int], ...] = (
    ("U + A1^6", 1440),
    ("U + D4^2", 72),
    ("U(2) + E7", 2),
    ("U + E8 + D4", 6),
    ("U + A1^7", 40320),
    ("U + A1^5", 120),
    ("U + D4 + A1^2", 12),
    ("U + U(2) + A1^6", 2903040),
    ("U + U(2) + A1^4", 1920),
    ("<2>^2 + <-2>^5", 51840),
    ("U + U(2) + A1^5", 51840),
    ("U(2)^2 + A1^2", 1440),
    ("U(2)^2 + A1", 72),
    ("U + U(2) + A1^3", 120),
    ("U(2)^2 + E8", 72),
)

DUAL_RESCALE_IDENTITIES: tuple[tuple[str, str], ...] = (
    ("U^2 + E8(2)", "U(2)^2 + E8"),
    ("U(2)^2 + D4", "U^2 + D4"),
    ("U + I(1,1)(2) + E8(2)", "U(2) + I(1,1) + E8"),
)

# 2-elementary lattices on which rescaled duality is an involution
INVOLUTION_CATALOG: tuple[str, ...] = (
    "U", "U(2)", "A1", "<2> + A1^3", "D4", "E7", "U + E8(2)", "U(2) + D4^2", "I(1,1)(2) + A1", "U + D6 + A1",
)


def _check(name: str, fn: Callable[[], tuple[bool, Any]]) -> dict[str, Any]:
    try:
        ok, detail = fn()
    except LatticeError as exc:
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return {"name": name, "passed": bool(ok), "detail": detail}


def group_order_checks() -> list[dict[str, Any]]:
    out = []
    for text, want in GROUP_ORDER_TABLE:
        def fn(text=text, want=want):
            go = discforms.isometry_group_order(expr.lattice(text).discriminant_form)
            return go.value == want and go.derivation == "both_agree", \
                {"order": go.value, "expected": want, "derivation": go.derivation}
        out.append(_check(f"order {text}", fn))

    def norm_one():
        q = expr.lattice("U(2)^2 + E8").discriminant_form
        ones = discforms.norm_one_elements(q)
        orb = discforms.orbit_of(q, ones[0])
        stab = discforms.stabilizer_order(q, ones[0])
        return len(ones) == 6 and sorted(orb) == sorted(ones) and stab == 12, \
            {"norm_one": len(ones), "orbit": len(orb), "stabilizer": stab}
    out.append(_check("norm-one orbit in U(2)^2 + E8", norm_one))
    return out


def construction_checks() -> list[dict[str, Any]]:
    out = []
    for c in constructions.builtin_constructions():
        def fn(c=c):
            res = constructions.check(c)
            return res.get("invariant_ok", False) and res.get("isometric", False), res
        out.append(_check(f"glue {c.id}", fn))
    return out


def even_part_checks() -> list[dict[str, Any]]:
    E = expr.lattice
    out = []
    for n in range(4, 11):
        def fn(n=n):
            rt = lattices.root_type(lattices.even_part(lattices.odd_unimodular(0, n))[0])
            return rt == [f"D{n}"], rt
        out.append(_check(f"even part of I(0,{n}) has roots D{n}", fn))

    def i28():
        L0, x = lattices.even_part(lattices.odd_unimodular(2, 8))
        q = L0.discriminant_form
        cx = q.class_of(x)
        return lattices.isometric(L0, E("U^2 + D6")) and discforms.orbit_of(q, cx) == [cx], \
            {"class": cx, "orbit": discforms.orbit_of(q, cx)}
    out.append(_check("even part of I(2,8) is U^2 + D6 with fixed glue", i28))

    def i27():
        L0, x = lattices.even_part(lattices.odd_unimodular(2, 7))
        q = L0.discriminant_form
        cx = q.class_of(x)
        order_two = [y for y in q.elements() if q.order_of(y) == 2]
        return (lattices.isometric(L0, E("U^2 + D5")) and list(q.orders) == [4]
                and order_two == [cx]), {"orders": list(q.orders), "class": cx, "order_two": order_two}
    out.append(_check("even part of I(2,7) is U^2 + D5 with glue of order 2", i27))

    def i26():
        L0, x = lattices.even_part(lattices.odd_unimodular(2, 6))
        q = L0.discriminant_form
        ones = discforms.norm_one_elements(q)
        orbs = discforms.orbits(q, ones)
        return (lattices.isometric(L0, E("U^2 + D4")) and len(ones) == 3 and len(orbs) == 1
                and q.class_of(x) in ones), {"norm_one": ones, "orbits": orbs}
    out.append(_check("even part of I(2,6) is U^2 + D4 with one norm-one orbit", i26))

    def a4():
        L0 = lattices.even_part(E("U(2) + I(1,1) + E8"))[0]
        return lattices.isometric(L0, E("U(2)^2 + E8")), None
    out.append(_check("even part of U(2) + I(1,1) + E8 is U(2)^2 + E8", a4))
    return out


def dual_rescale_checks() -> list[dict[str, Any]]:
    out = []
    for src, dst in DUAL_RESCALE_IDENTITIES:
        def fn(src=src, dst=dst):
            return lattices.isometric(expr.lattice(f"dual2({src})"), expr.lattice(dst)), None
        out.append(_check(f"dual2({src}) = {dst}", fn))
    for text in INVOLUTION_CATALOG:
        def fn(text=text):
            L = expr.lattice(text)
            once = lattices.dual_rescale(L, 2)
            back = lattices.dual_rescale(once, 2)
            # dual basis of the dual basis is the original basis
            exact = back == L and abs(once.det) * abs(L.det) == 2 ** L.rank
            by_test = lattices.definite_isometric(back, L) if L.is_definite \
                else lattices.two_elementary_isometric(back, L)
            return exact and by_test, {"det": L.det, "dual_det": once.det, "gram_equal": back == L,
                                       "isometric": by_test}
        out.append(_check(f"dual2 is an involution on {text}", fn))
    return out


def heegner_check(text: str = "U^2 + D6") -> dict[str, Any]:
    def fn():
        L = expr.lattice(text)
        l = next(lattices.heegner_vectors(L, -4, half_in_dual=True), None)
        if l is None:
            return False, "no vector found"
        C = lattices.orthogonal_complement(L, l)
        q = C.discriminant_form
        gd = lattices.glue_data(L, [l])
        gen_norm = q.q(q.generator(0)) if q.ngens == 1 else None
        ok = (C.is_even and C.signature == (2, 7) and list(q.orders) == [4]
              and gen_norm == Fraction(3, 4) and gd.index == 2)
        return ok, {"vector": list(l), "signature": list(C.signature), "orders": list(q.orders),
                    "generator_norm": str(gen_norm), "glue_index": gd.index}
    return _check(f"(-4)-vector with half in the dual in {text}", fn)


def dpn_checks() -> list[dict[str, Any]]:
    from importlib import resources
    path = resources.files("latlab").joinpath("data/dpn_configs.json")
    out = []
    for c in dpn.load_configs(str(path)):
        def fn(c=c):
            inv = dpn.full_invariant(c).as_dict()
            ok = all(inv[k] == v for k, v in (c.expected or {}).items())
            if c.main_curve:
                g = ledger.curve_genus(c.main_curve["surface"], c.main_curve["class"]) \
                    - int(c.main_curve.get("genus_drop", 0))
                ok = ok and g == inv["g"]
            return ok, inv
        out.append(_check(f"dpn {c.name}", fn))
    return out


def verify_all(include_census: bool = True) -> dict[str, Any]:
    start = time.perf_counter()
    sections: dict[str, Any] = {
        "group_orders": group_order_checks(),
        "constructions": construction_checks(),
        "even_parts": even_part_checks(),
        "dual_rescale": dual_rescale_checks(),
        "heegner": [heegner_check()],
        "dpn": dpn_checks(),
        "weyl": [{"name": w["identity"], "passed": w["passed"], "detail": [w["lhs"], w["rhs"]]}
                 for w in ledger.weyl_identities()],
    }
    manifest = ledger.run_manifest(ledger.load_manifest())
    sections["ledger"] = [{"name": e["id"], "passed": e["passed"], "detail": e} for e in manifest["entries"]]
    if include_census:
        rep = ledger.census_report(ledger.nikulin_census())
        sections["census"] = [{"name": "census", "passed": rep["passed"],
                               "detail": {k: rep[k] for k in ("count", "expected_count", "named_missing",
                                                              "parity_violators", "verification_failures",
                                                              "criterion_count", "symmetric_difference")}}]
    passed = all(item["passed"] for items in sections.values() for item in items)
    return {"command": "verify", "sections": sections, "passed": passed,
            "timing": round(time.perf_counter() - start, 3)}


__all__ = ["GROUP_ORDER_TABLE", "DUAL_RESCALE_IDENTITIES", "INVOLUTION_CATALOG", "group_order_checks",
           "construction_checks", "even_part_checks", "dual_rescale_checks", "heegner_check",
           "dpn_checks", "verify_all"]
