"""Overlattice constructions described by JSON fixtures.

A fixture names a base lattice expression, labels its basis vectors, may
define further named vectors as integer combinations, and lists rational glue
vectors written as linear combinations of those names::

    {"id": ..., "base": "U(2) + A1^6", "basis": ["u", "v", "e1", ...],
     "define": [["name", "combination"], ...],
     "glue": [["f1", "1/2*(3*u + 3*v - e1 - ...)"], ...],
     "expected_invariant": [r, a, delta], "isometric_to": "U + A1^6"}
"""

from __future__ import annotations

import ast
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Mapping, Sequence

from . import expr, lattices
from .errors import ConfigError, LatticeError
from .lattices import Lattice

Vector = tuple[Fraction, ...]


def _combination(text: str, names: Mapping[str, Vector], dim: int) -> Vector:
    """Evaluate a linear combination such as ``1/2*(3*u - e1)`` over named vectors."""
    try:
        tree = ast.parse(text.replace("−", "-"), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"bad combination {text!r}: {exc.msg}") from exc

    def scalar(v):
        return isinstance(v, Fraction)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise ConfigError(f"unknown vector {node.id!r} in {text!r}")
            return names[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            if isinstance(node.op, ast.UAdd):
                return v
            return -v if scalar(v) else tuple(-x for x in v)
        if isinstance(node, ast.BinOp):
            lhs, rhs = ev(node.left), ev(node.right)
            if isinstance(node.op, (ast.Add, ast.Sub)):
                if scalar(lhs) != scalar(rhs):
                    raise ConfigError(f"cannot add a scalar and a vector in {text!r}")
                sign = 1 if isinstance(node.op, ast.Add) else -1
                if scalar(lhs):
                    return lhs + sign * rhs
                return tuple(x + sign * y for x, y in zip(lhs, rhs))
            if isinstance(node.op, ast.Mult):
                if scalar(lhs) and scalar(rhs):
                    return lhs * rhs
                if scalar(lhs):
                    return tuple(lhs * y for y in rhs)
                if scalar(rhs):
                    return tuple(x * rhs for x in lhs)
                raise ConfigError(f"cannot multiply two vectors in {text!r}")
            if isinstance(node.op, ast.Div):
                if not scalar(rhs) or rhs == 0:
                    raise ConfigError(f"division must be by a nonzero scalar in {text!r}")
                return lhs / rhs if scalar(lhs) else tuple(x / rhs for x in lhs)
        raise ConfigError(f"unsupported syntax in {text!r}")

    v = ev(tree)
    if scalar(v):
        raise ConfigError(f"{text!r} is a scalar, not a vector")
    return v


@dataclass(frozen=True)
class Construction:
    id: str
    base: str
    basis: tuple[str, ...]
    define: tuple[tuple[str, str], ...] = ()
    glue: tuple[tuple[str, str], ...] = ()
    description: str = ""
    expected_invariant: tuple[int, int, int] | None = None
    isometric_to: str | None = None
    extra: Mapping[str, Any] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Construction":
        try:
            exp = data.get("expected_invariant")
            return cls(
                id=str(data["id"]),
                base=str(data["base"]),
                basis=tuple(data["basis"]),
                define=tuple((str(a), str(b)) for a, b in data.get("define", [])),
                glue=tuple((str(a), str(b)) for a, b in data.get("glue", [])),
                description=str(data.get("description", "")),
                expected_invariant=tuple(exp) if exp is not None else None,
                isometric_to=data.get("isometric_to"),
                extra={k: v for k, v in data.items() if k not in {
                    "id", "base", "basis", "define", "glue", "description",
                    "expected_invariant", "isometric_to"}},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed construction: {exc}") from exc

    def base_lattice(self) -> Lattice:
        return expr.lattice(self.base)

    def vectors(self) -> dict[str, Vector]:
        n = self.base_lattice().rank
        if len(self.basis) != n:
            raise ConfigError(f"{self.id}: {len(self.basis)} basis labels for rank {n}")
        if len(set(self.basis)) != n:
            raise ConfigError(f"{self.id}: repeated basis label")
        names: dict[str, Vector] = {}
        for i, label in enumerate(self.basis):
            names[label] = tuple(Fraction(int(i == j)) for j in range(n))
        for label, text in self.define:
            v = _combination(text, names, n)
            if any(x.denominator != 1 for x in v):
                raise ConfigError(f"{self.id}: defined vector {label} is not integral")
            names[label] = v
        for label, text in self.glue:
            names[label] = _combination(text, names, n)
        return names

    def glue_vectors(self) -> list[Vector]:
        names = self.vectors()
        return [names[label] for label, _ in self.glue]

    def build(self) -> Lattice:
        L = lattices.overlattice(self.base_lattice(), self.glue_vectors(), require_even=True)
        return L.named(self.id)


def load_construction(path: str | Path) -> Construction:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return Construction.from_dict(data)


def builtin_constructions() -> list[Construction]:
    """The packaged glue fixtures, sorted by id."""
    folder = resources.files("latlab").joinpath("data/fixtures")
    out = []
    for entry in folder.iterdir():
        if entry.name.endswith(".json"):
            out.append(Construction.from_dict(json.loads(entry.read_text())))
    return sorted(out, key=lambda c: c.id)


def builtin(id_: str) -> Construction:
    for c in builtin_constructions():
        if c.id == id_:
            return c
    raise LatticeError(f"no packaged construction named {id_!r}")


def check(c: Construction) -> dict[str, Any]:
    """Build a construction and compare with its recorded expectations."""
    L = c.build()
    inv = lattices.main_invariant(L)
    out: dict[str, Any] = {"id": c.id, "rank": L.rank, "signature": list(L.signature),
                           "invariant": list(inv.triple())}
    if c.expected_invariant is not None:
        out["invariant_ok"] = inv.triple() == tuple(c.expected_invariant)
    if c.isometric_to:
        M = expr.lattice(c.isometric_to)
        out["isometric_to"] = c.isometric_to
        out["isometric"] = lattices.indefinite_isometric(L, M) if L.is_indefinite \
            else lattices.definite_isometric(L, M)
    return out


__all__ = ["Construction", "load_construction", "builtin_constructions", "builtin", "check"]
