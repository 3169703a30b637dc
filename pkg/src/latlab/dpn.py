"""Main invariant of the 2-elementary K3 surface attached to a DPN pair.

A DPN pair (Y, B) is a smooth rational surface with a curve B in |-2K_Y|
having only A-D-E singularities.  The double cover branched over B,
resolved, is a K3 surface with a non-symplectic involution; its invariant
lattice has rank r and the fixed curve has k + 1 components, both read off
from the singularity counts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from . import discforms
from .errors import ConfigError, LatticeError
from .lattices import Lattice

# adjacency rules forcing an odd discriminant form
DELTA_RULES = {
    1: "three nodes pairwise joined by components (triangle of nodes)",
    2: "a node and a D4 point on the same pair of components",
    3: "a node and a D_2n point whose branches share a tangent",
    4: "a component with a node of its own",
}


@dataclass(frozen=True)
class DpnConfig:
    rho_y: int
    components: int
    a: Mapping[int, int] = field(default_factory=dict)
    d: Mapping[int, int] = field(default_factory=dict)
    e: Mapping[int, int] = field(default_factory=dict)
    adjacency_flags: tuple[int, ...] = ()
    delta_certificate: int | None = None
    name: str = ""
    expected: Mapping[str, Any] | None = None
    main_curve: Mapping[str, Any] | None = None

    def __post_init__(self):
        if self.rho_y < 1:
            raise ConfigError("rho_y must be positive")
        if self.components < 1:
            raise ConfigError("the branch curve needs at least one component")
        for label, table, ok in (("A", self.a, lambda n: n >= 1),
                                 ("D", self.d, lambda n: n >= 4),
                                 ("E", self.e, lambda n: n in (6, 7, 8))):
            for n, c in table.items():
                if not ok(n):
                    raise ConfigError(f"unsupported singularity {label}{n}")
                if c < 0:
                    raise ConfigError(f"negative count for {label}{n}")
        for f in self.adjacency_flags:
            if f not in DELTA_RULES:
                raise ConfigError(f"unknown adjacency rule {f}")
        if self.delta_certificate not in (None, 0, 1):
            raise ConfigError("delta_certificate must be 0, 1 or absent")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "DpnConfig":
        try:
            a: dict[int, int] = {}
            d: dict[int, int] = {}
            e: dict[int, int] = {}
            for s in data.get("singularities", []):
                kind = s["type"]
                table = {"A": a, "D": d, "E": e}.get(kind)
                if table is None:
                    raise ConfigError(f"singularity type {kind!r} is not A, D or E")
                n = int(s["index"])
                table[n] = table.get(n, 0) + int(s.get("count", 1))
            return cls(
                rho_y=int(data["rho_y"]),
                components=int(data["components"]),
                a=a, d=d, e=e,
                adjacency_flags=tuple(int(x) for x in data.get("adjacency_flags", [])),
                delta_certificate=data.get("delta_certificate"),
                name=str(data.get("id", data.get("name", ""))),
                expected=data.get("expected"),
                main_curve=data.get("main_curve"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"malformed DPN configuration: {exc}") from exc

    def singularity_label(self) -> str:
        parts = []
        for label, table in (("A", self.a), ("D", self.d), ("E", self.e)):
            for n in sorted(table):
                if table[n]:
                    parts.append(f"{table[n]}{label}{n}" if table[n] > 1 else f"{label}{n}")
        return " + ".join(parts) if parts else "smooth"


def load_configs(path: str | Path) -> list[DpnConfig]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if isinstance(data, dict):
        data = data.get("configs", [data])
    return [DpnConfig.from_dict(item) for item in data]


def invariant_r(c: DpnConfig) -> int:
    r = c.rho_y
    for n, cnt in c.a.items():
        r += ((n + 1) // 2) * cnt          # l for n = 2l - 1 and n = 2l
    for n, cnt in c.d.items():
        r += 2 * (n // 2) * cnt            # 2m for n = 2m and n = 2m + 1
    r += 4 * c.e.get(6, 0) + 7 * c.e.get(7, 0) + 8 * c.e.get(8, 0)
    return r


def components_k(c: DpnConfig) -> int:
    total = c.components
    for n, cnt in c.d.items():
        total += (n // 2 - 1) * cnt
    total += c.e.get(6, 0) + 3 * c.e.get(7, 0) + 4 * c.e.get(8, 0)
    k = total - 1
    if k < 0:
        raise ConfigError("configuration gives a negative number of extra fixed components")
    return k


@dataclass(frozen=True)
class DpnInvariant:
    r: int
    a: int
    delta: int | None
    g: int
    k: int
    delta_source: str

    def triple(self) -> tuple[int, int, int | None]:
        return (self.r, self.a, self.delta)

    def as_dict(self) -> dict[str, Any]:
        return {"r": self.r, "a": self.a, "delta": self.delta, "g": self.g, "k": self.k,
                "delta_source": self.delta_source}


def full_invariant(c: DpnConfig) -> DpnInvariant:
    r = invariant_r(c)
    k = components_k(c)
    a = r - 2 * k
    if a < 0:
        raise ConfigError(f"configuration gives a = {a} < 0")
    g = 11 - (r + a) // 2
    if g < 0:
        raise ConfigError(f"configuration gives g = {g} < 0")
    if c.adjacency_flags:
        rule = min(c.adjacency_flags)
        delta, source = 1, f"rule {rule}"
    elif a % 2 or r % 4 != 2:
        # an integer-valued form splits into u and v blocks: a even, r = 2 mod 4
        delta, source = 1, "lattice parity"
    elif c.delta_certificate is not None:
        delta, source = c.delta_certificate, "certificate"
    else:
        delta, source = None, "undecided"
    if c.delta_certificate is not None and delta != c.delta_certificate:
        raise ConfigError(f"delta certificate {c.delta_certificate} contradicts {source}")
    return DpnInvariant(r, a, delta, g, k, source)


def degree_check(L: Lattice, cover_degree: int) -> Fraction:
    """|O(D_L)| divided by the degree of the labelling cover."""
    if cover_degree < 1:
        raise LatticeError("cover degree must be positive")
    order = discforms.isometry_group_order(L.discriminant_form).value
    return Fraction(order, cover_degree)
