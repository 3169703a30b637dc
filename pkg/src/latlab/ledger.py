"""Manifest-driven numeric checks and the constructive census of main invariants.

Each manifest entry describes a family of branch curves on a rational surface
Y (P2, the quadric, or a Hirzebruch surface F_n), the labelling cover used to
compare it with a lattice-theoretic moduli space, and a lattice L whose
discriminant form group order gives the covering degree.  Two checks run per
entry: the parameter count dim(U/Aut Y) = 20 - r and the degree
|O(D_L)| / (labelling order * aut index).
"""

from __future__ import annotations

import json
import os
import re
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Sequence, TypeVar

from . import discforms, expr, lattices
from .errors import ConfigError, LatticeError

T = TypeVar("T")
R = TypeVar("R")

# ---------------------------------------------------------------- surfaces


@dataclass(frozen=True)
class Surface:
    kind: str          # 'P2', 'Quadric', 'F'
    n: int = 0         # Hirzebruch index

    def __str__(self) -> str:
        return f"F{self.n}" if self.kind == "F" else self.kind


def parse_surface(text: str | Surface) -> Surface:
    if isinstance(text, Surface):
        return text
    t = text.strip()
    if t in ("P2", "P^2"):
        return Surface("P2")
    if t.lower() in ("quadric", "q", "p1xp1"):
        return Surface("Quadric")
    m = re.fullmatch(r"F_?\(?(\d+)\)?", t)
    if m:
        return Surface("F", int(m.group(1)))
    raise ConfigError(f"unknown surface {text!r}")


def parse_class(surface: Surface, text: str) -> tuple[int, ...]:
    """Curve class as integers: (d,) on P2, (a, b) on the quadric and on F_n."""
    t = text.replace(" ", "")
    if surface.kind == "P2":
        m = re.fullmatch(r"O\((-?\d+)\)", t)
        if m:
            return (int(m.group(1)),)
    elif surface.kind == "Quadric":
        m = re.fullmatch(r"O\((-?\d+),(-?\d+)\)", t)
        if m:
            return (int(m.group(1)), int(m.group(2)))
    else:
        m = re.fullmatch(r"L_?\((-?\d+),(-?\d+)\)", t)
        if m:
            return (int(m.group(1)), int(m.group(2)))
    raise ConfigError(f"class {text!r} does not parse on {surface}")


def intersection(surface: Surface, x: Sequence[int], y: Sequence[int]) -> int:
    if surface.kind == "P2":
        return x[0] * y[0]
    if surface.kind == "Quadric":
        return x[0] * y[1] + x[1] * y[0]
    # L_{1,0} is the section of self-intersection n, L_{0,1} the fibre
    return x[0] * y[0] * surface.n + x[0] * y[1] + x[1] * y[0]


def canonical_class(surface: Surface) -> tuple[int, ...]:
    if surface.kind == "P2":
        return (-3,)
    if surface.kind == "Quadric":
        return (-2, -2)
    return (-2, surface.n - 2)


def linear_system_dim(surface: str | Surface, cls: str) -> int:
    """dim |C| = h^0(C) - 1; a point ``pt`` is a 2-dimensional parameter."""
    s = parse_surface(surface)
    if cls.strip() == "pt":
        return 2
    c = parse_class(s, cls)
    if any(x < 0 for x in c):
        raise ConfigError(f"class {cls} has a negative degree")
    if s.kind == "P2":
        d = c[0]
        h0 = (d + 1) * (d + 2) // 2
    elif s.kind == "Quadric":
        h0 = (c[0] + 1) * (c[1] + 1)
    else:
        a, b = c
        h0 = (a + 1) * (a * s.n + 2 * b + 2) // 2
    return h0 - 1


def curve_genus(surface: str | Surface, cls: str) -> int:
    """Arithmetic genus from adjunction 2g - 2 = C.C + C.K."""
    s = parse_surface(surface)
    c = parse_class(s, cls)
    twice = intersection(s, c, c) + intersection(s, c, canonical_class(s)) + 2
    if twice % 2 or twice < 0:
        raise ConfigError(f"class {cls} on {s} has negative genus")
    return twice // 2


def aut_dim(surface: str | Surface) -> int:
    s = parse_surface(surface)
    if s.kind == "P2":
        return 8
    if s.kind == "Quadric":
        return 6
    return s.n + 5


# ---------------------------------------------------------------- manifest


@dataclass(frozen=True)
class LedgerEntry:
    id: str
    surface: str
    systems: tuple[tuple[str, int], ...]
    labeling_order: int
    aut_index: int
    lattice_expr: str
    expected_order: int
    expected_degree: int
    expected_r: int
    lattice_role: str = "plus"
    expected_invariant: tuple[int, int, int] | None = None
    birational: bool = True
    description: str = ""

    def __post_init__(self):
        if self.labeling_order < 1:
            raise ConfigError(f"{self.id}: labeling_order must be at least 1")
        if self.aut_index < 1:
            raise ConfigError(f"{self.id}: aut_index must be at least 1")
        if self.expected_degree < 1:
            raise ConfigError(f"{self.id}: expected_degree must be at least 1")
        if self.lattice_role not in ("plus", "minus"):
            raise ConfigError(f"{self.id}: lattice_role must be 'plus' or 'minus'")
        parse_surface(self.surface)

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "LedgerEntry":
        try:
            inv = d.get("expected_invariant")
            return cls(
                id=str(d["id"]),
                surface=str(d["surface"]),
                systems=tuple((str(s["class"]), int(s.get("codim", 0))) for s in d["systems"]),
                labeling_order=int(d["labeling_order"]),
                aut_index=int(d.get("aut_index", 1)),
                lattice_expr=str(d["lattice_expr"]),
                expected_order=int(d["expected_order"]),
                expected_degree=int(d.get("expected_degree", 1)),
                expected_r=int(d["expected_r"]),
                lattice_role=str(d.get("lattice_role", "plus")),
                expected_invariant=tuple(inv) if inv is not None else None,
                birational=bool(d.get("birational", int(d.get("expected_degree", 1)) == 1)),
                description=str(d.get("description", "")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"malformed manifest entry: {exc}") from exc


def moduli_dim(entry: LedgerEntry) -> int:
    dims = sum(linear_system_dim(entry.surface, c) for c, _ in entry.systems)
    codims = sum(k for _, k in entry.systems)
    return dims - codims - aut_dim(entry.surface)


def load_manifest(path: str | Path | None = None) -> list[LedgerEntry]:
    if path is None:
        text = resources.files("latlab").joinpath("data/manifest.json").read_text()
    else:
        text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid manifest JSON: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("entries", [])
    entries = [LedgerEntry.from_dict(d) for d in data]
    ids = [e.id for e in entries]
    if len(set(ids)) != len(ids):
        raise ConfigError("manifest ids are not unique")
    return entries


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("LATLAB_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Map in input order, using up to LATLAB_THREADS worker threads."""
    items = list(items)
    n = _workers()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def check_entry(entry: LedgerEntry) -> dict[str, Any]:
    """Run the dimension, order, degree and invariant checks for one entry."""
    out: dict[str, Any] = {"id": entry.id, "surface": entry.surface, "lattice": entry.lattice_expr,
                           "role": entry.lattice_role}
    failures: list[str] = []
    dim = moduli_dim(entry)
    out["moduli_dim"] = dim
    out["expected_dim"] = 20 - entry.expected_r
    if dim != 20 - entry.expected_r:
        failures.append(f"dimension {dim} != {20 - entry.expected_r}")
    try:
        L = expr.lattice(entry.lattice_expr)
        go = discforms.isometry_group_order(L.discriminant_form)
        out["order"] = go.value
        out["derivation"] = go.derivation
        if go.value != entry.expected_order:
            failures.append(f"order {go.value} != {entry.expected_order}")
        degree = Fraction(go.value, entry.labeling_order * entry.aut_index)
        out["degree"] = str(degree)
        if degree.denominator != 1:
            failures.append(f"degree {degree} is not an integer")
        elif degree != entry.expected_degree:
            failures.append(f"degree {degree} != {entry.expected_degree}")
        if entry.birational and degree != 1:
            failures.append("entry marked birational but degree != 1")
        inv = lattices.main_invariant(L)
        r_lat = inv.r if entry.lattice_role == "plus" else 22 - inv.r
        triple = (r_lat, inv.a, inv.delta)
        out["invariant"] = list(triple)
        if r_lat != entry.expected_r:
            failures.append(f"lattice gives r = {r_lat}, expected {entry.expected_r}")
        if entry.expected_invariant is not None and triple != tuple(entry.expected_invariant):
            failures.append(f"invariant {triple} != {tuple(entry.expected_invariant)}")
        want_sig = (1, inv.r - 1) if entry.lattice_role == "plus" else (2, inv.r - 2)
        if L.signature != want_sig:
            failures.append(f"signature {L.signature} != {want_sig}")
    except LatticeError as exc:
        failures.append(f"{type(exc).__name__}: {exc}")
    out["passed"] = not failures
    out["failures"] = failures
    return out


def run_manifest(entries: Sequence[LedgerEntry]) -> dict[str, Any]:
    start = time.perf_counter()
    results = parallel_map(check_entry, sorted(entries, key=lambda e: e.id))
    return {
        "command": "ledger run",
        "entries": results,
        "passed": all(r["passed"] for r in results),
        "count": len(results),
        "failures": sum(not r["passed"] for r in results),
        "timing": round(time.perf_counter() - start, 3),
    }


# ---------------------------------------------------------------- census


@dataclass(frozen=True)
class Block:
    name: str          # expression text
    p: int
    n: int
    a: int
    delta: int


# (1, 1) blocks first so certificates read naturally
BLOCK_CATALOG: tuple[str, ...] = (
    "U", "U(2)", "I(1,1)(2)", "<2>", "A1", "D4", "D6", "D8", "E7", "E8", "E8(2)", "D4(2)",
)


def catalog_blocks(names: Sequence[str] = BLOCK_CATALOG) -> tuple[list[Block], list[str]]:
    """Blocks usable in the census and the rejected names (not even 2-elementary)."""
    usable, rejected = [], []
    for name in names:
        L = expr.lattice(name)
        q = L.discriminant_form
        if not L.is_even or not discforms.is_two_elementary(q):
            rejected.append(name)
            continue
        p, n = L.signature
        usable.append(Block(name, p, n, discforms.length(q), discforms.parity(q)))
    return usable, rejected


def _expression(counts: Mapping[str, int], order: Sequence[str]) -> str:
    parts = []
    for name in order:
        c = counts.get(name, 0)
        if c == 1:
            parts.append(name)
        elif c > 1:
            parts.append(f"{name}^{c}" if not name.endswith(")") or name.startswith("<") else f"({name})^{c}")
    return " + ".join(parts)


def realizable_states(blocks: Sequence[Block], max_p: int = 2, max_n: int = 19,
                      max_a: int = 22) -> dict[tuple[int, int, int, int], str]:
    """(p, n, a, delta) reachable as direct sums, each with a fewest-block expression."""
    order = [b.name for b in blocks]
    start: tuple[int, int, int, int] = (0, 0, 0, 0)
    best: dict[tuple[int, int, int, int], dict[str, int]] = {start: {}}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        counts = best[s]
        for b in blocks:
            t = (s[0] + b.p, s[1] + b.n, s[2] + b.a, max(s[3], b.delta))
            if t[0] > max_p or t[1] > max_n or t[2] > max_a or t in best:
                continue
            c = dict(counts)
            c[b.name] = c.get(b.name, 0) + 1
            best[t] = c
            queue.append(t)
    del best[start]
    return {s: _expression(c, order) for s, c in best.items()}


@dataclass
class CensusResult:
    invariants: list[tuple[int, int, int]]
    certificates: dict[tuple[int, int, int], tuple[str, str]]
    rejected_blocks: list[str] = field(default_factory=list)
    verification_failures: list[str] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.invariants)


def _verify_certificate(item) -> str | None:
    (r, a, delta), (plus, minus) = item
    try:
        Lp, Lm = expr.lattice(plus), expr.lattice(minus)
        ip, im = lattices.main_invariant(Lp), lattices.main_invariant(Lm)
        if ip.triple() != (r, a, delta) or Lp.signature != (1, r - 1):
            return f"{(r, a, delta)}: plus certificate {plus} gives {ip.triple()} {Lp.signature}"
        if (im.a, im.delta) != (a, delta) or Lm.signature != (2, 20 - r):
            return f"{(r, a, delta)}: minus certificate {minus} gives {im.triple()} {Lm.signature}"
        # complementary forms: Gauss signatures add to (p - n) total = -16 = 0 mod 8
        sp = discforms.gauss_signature(Lp.discriminant_form)
        sm = discforms.gauss_signature(Lm.discriminant_form)
        if (sp + sm) % 8:
            return f"{(r, a, delta)}: Gauss signatures {sp} + {sm} are not complementary"
    except LatticeError as exc:
        return f"{(r, a, delta)}: {exc}"
    return None


def nikulin_census(max_r: int = 20, blocks: Sequence[str] = BLOCK_CATALOG,
                   verify: bool = True) -> CensusResult:
    """Triples (r, a, delta) with even 2-elementary lattices of signatures
    (1, r-1) and (2, 20-r) sharing a and delta, found by direct-sum search."""
    usable, rejected = catalog_blocks(blocks)
    states = realizable_states(usable, max_n=max(19, max_r))
    certs: dict[tuple[int, int, int], tuple[str, str]] = {}
    for r in range(1, max_r + 1):
        for a in range(0, 23):
            for delta in (0, 1):
                plus = states.get((1, r - 1, a, delta))
                minus = states.get((2, 20 - r, a, delta))
                if plus and minus:
                    certs[(r, a, delta)] = (plus, minus)
    result = CensusResult(sorted(certs), certs, rejected)
    if verify:
        errs = parallel_map(_verify_certificate, sorted(certs.items()))
        result.verification_failures = [e for e in errs if e]
    return result


def named_triples() -> list[tuple[int, int, int]]:
    """Main invariants from the bundled named-triples table."""
    data = json.loads(resources.files("latlab").joinpath("data/named_triples.json").read_text())
    return [tuple(t) for t in data["triples"]]


def two_elementary_exists(t_plus: int, t_minus: int, a: int, delta: int) -> bool:
    """Arithmetic existence test for an even 2-elementary lattice of signature
    (t_plus, t_minus) with discriminant length a and parity delta."""
    n, s = t_plus + t_minus, (t_plus - t_minus) % 8
    if a < 0 or a > n or (n - a) % 2:
        return False
    if delta == 0 and s % 4:
        return False
    if a == 0 and (delta != 0 or s != 0):
        return False
    if a == 1 and s not in (1, 7):
        return False
    if a == 2 and s == 4 and delta != 0:
        return False
    if delta == 0 and a == n and s != 0:
        return False
    return True


def criterion_triples(max_r: int = 20) -> list[tuple[int, int, int]]:
    """Triples (r,a,delta) for which both the (1,r-1) lattice and its (2,20-r)
    complement pass the existence test. Independent of the block search."""
    return [(r, a, d) for r in range(1, max_r + 1) for a in range(0, 23 - r) for d in (0, 1)
            if two_elementary_exists(1, r - 1, a, d) and two_elementary_exists(2, 20 - r, a, d)]


def census_report(result: CensusResult, expected_count: int | None = 75, max_r: int = 20) -> dict[str, Any]:
    """Summarise a census. A truncated run (max_r < 20) is compared with the
    named triples in range only, since the full count does not apply."""
    if max_r < 20:
        expected_count = None
    members = set(result.invariants)
    named = [t for t in named_triples() if t[0] <= max_r]
    missing_named = [list(t) for t in named if t not in members]
    parity_violators = [list(t) for t in result.invariants if (t[0] - t[1]) % 2]
    reference = set(criterion_triples(max_r))
    only_search = sorted(members - reference)
    only_criterion = sorted(reference - members)
    passed = ((expected_count is None or result.count == expected_count) and not missing_named
              and not parity_violators and not result.verification_failures
              and not only_search and not only_criterion)
    return {
        "command": "census",
        "count": result.count,
        "expected_count": expected_count,
        "invariants": [list(t) for t in result.invariants],
        "certificates": {f"{r},{a},{d}": {"plus": p, "minus": m}
                         for (r, a, d), (p, m) in sorted(result.certificates.items())},
        "rejected_blocks": result.rejected_blocks,
        "named_missing": missing_named,
        "parity_violators": parity_violators,
        "verification_failures": result.verification_failures,
        "criterion_count": len(reference),
        "symmetric_difference": {"search_only": [list(t) for t in only_search],
                                 "criterion_only": [list(t) for t in only_criterion]},
        "passed": passed,
    }


# ---------------------------------------------------------------- identities


def weyl_identities() -> list[dict[str, Any]]:
    """Group-order coincidences between Weyl groups, classical groups over F2
    and discriminant form groups."""
    W = discforms.WEYL_ORDERS

    def order(text: str) -> int:
        return discforms.isometry_group_order(expr.lattice(text).discriminant_form).value

    checks = [
        ("|W6| = |O-(6,2)|", W[6], discforms.orthogonal_order(6, -1)),
        ("|W7| = 2|Sp(6,2)|", W[7], 2 * discforms.sp_order(6)),
        ("|W8| = 2|O+(8,2)|", W[8], 2 * discforms.orthogonal_order(8, 1)),
        ("|W5| = 2^4 * 5!", W[5], 16 * 120),
        ("|W5| = 2^4 |O-(4,2)|", W[5], 16 * discforms.orthogonal_order(4, -1)),
        ("|O(D(<2>^2 + A1^5))| = |W6|", order("<2>^2 + A1^5"), W[6]),
        ("|O(D(U + U(2) + A1^5))| = |W6|", order("U + U(2) + A1^5"), W[6]),
        ("|O(D(U + U(2) + A1^6))| = |W7|", order("U + U(2) + A1^6"), W[7]),
        ("|O(D(U + U(2) + A1^4))| = |W5|", order("U + U(2) + A1^4"), W[5]),
        ("|O(D(U + E8(2)))| = |O+(8,2)|", order("U + E8(2)"), discforms.orthogonal_order(8, 1)),
    ]
    return [{"identity": name, "lhs": lhs, "rhs": rhs, "passed": lhs == rhs} for name, lhs, rhs in checks]


__all__ = [
    "Surface", "parse_surface", "parse_class", "linear_system_dim", "curve_genus", "aut_dim",
    "LedgerEntry", "moduli_dim", "load_manifest", "check_entry", "run_manifest",
    "BLOCK_CATALOG", "catalog_blocks", "realizable_states", "CensusResult", "nikulin_census",
    "named_triples", "two_elementary_exists", "criterion_triples", "census_report", "weyl_identities", "parallel_map",
]
