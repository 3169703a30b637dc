"""Lattice expression language.

Grammar (``^`` binds tighter than ``+``, postfix scaling tighter than ``^``)::

    expr    := term ('+' term)*
    term    := postfix ('^' INT)?
    postfix := primary ('(' INT ')')*
    primary := 'U' | '<' INT '>' | 'A' INT | 'D' INT | 'E' INT | 'I' '(' INT ',' INT ')'
             | 'dual2' '(' expr ')' | 'evenpart' '(' expr ')'
             | 'glue' '(' expr (';' vector)+ ')' | '(' expr ')'
    vector  := rational (',' rational)*

Examples: ``U + A1^6``, ``U(2)^2 + E8``, ``I(1,1)(2)``, ``<2>^2 + <-2>^5``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from . import lattices as lat
from .errors import LatticeError, ParseError
from .lattices import MAX_RANK, Lattice


@dataclass(frozen=True)
class Atom:
    kind: str                   # 'U', '<>', 'A', 'D', 'E', 'I'
    params: tuple[int, ...] = ()


@dataclass(frozen=True)
class Sum:
    terms: tuple["Node", ...]


@dataclass(frozen=True)
class Repeat:
    base: "Node"
    count: int


@dataclass(frozen=True)
class Scale:
    base: "Node"
    factor: int


@dataclass(frozen=True)
class Dual2:
    arg: "Node"


@dataclass(frozen=True)
class EvenPart:
    arg: "Node"


@dataclass(frozen=True)
class Glue:
    arg: "Node"
    vectors: tuple[tuple[Fraction, ...], ...]


Node = Union[Atom, Sum, Repeat, Scale, Dual2, EvenPart, Glue]

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<int>\d+)|(?P<sym>[-+^()<>,;/]))")
_ALIASES = {"⊕": "+", "⟨": "<", "⟩": ">", "−": "-"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    for a, b in _ALIASES.items():
        text = text.replace(a, b)
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}",
                             pos + len(text[pos:]) - len(text[pos:].lstrip()))
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, v, pos = self.take()
        if v != value:
            raise ParseError(f"expected {value!r}, found {v or 'end of input'!r}", pos)

    def integer(self, signed: bool = False) -> int:
        sign = 1
        if signed and self.peek()[1] in "+-" and self.peek()[0] == "sym":
            sign = -1 if self.take()[1] == "-" else 1
        kind, v, pos = self.take()
        if kind != "int":
            raise ParseError(f"expected an integer, found {v or 'end of input'!r}", pos)
        return sign * int(v)

    def rational(self) -> Fraction:
        num = self.integer(signed=True)
        if self.peek()[1] == "/":
            self.take()
            pos = self.peek()[2]
            den = self.integer()
            if den == 0:
                raise ParseError("zero denominator", pos)
            return Fraction(num, den)
        return Fraction(num)

    def parse(self) -> Node:
        node = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {v!r}", pos)
        return node

    def expr(self) -> Node:
        terms = [self.term()]
        while self.peek()[1] == "+":
            self.take()
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def term(self) -> Node:
        node = self.postfix()
        if self.peek()[1] == "^":
            self.take()
            pos = self.peek()[2]
            n = self.integer()
            if n < 1:
                raise ParseError("repetition count must be at least 1", pos)
            node = Repeat(node, n)
        return node

    def postfix(self) -> Node:
        node = self.primary()
        while self.peek()[1] == "(":
            save = self.i
            self.take()
            if self.peek()[0] not in ("int",) and self.peek()[1] != "-":
                self.i = save
                break
            pos = self.peek()[2]
            k = self.integer(signed=True)
            if k == 0:
                raise ParseError("scaling factor must be nonzero", pos)
            self.expect(")")
            node = Scale(node, k)
        return node

    def primary(self) -> Node:
        kind, v, pos = self.take()
        if v == "(":
            node = self.expr()
            self.expect(")")
            return node
        if v == "<":
            k = self.integer(signed=True)
            if k == 0:
                raise ParseError("<0> is degenerate", pos)
            self.expect(">")
            return Atom("<>", (k,))
        if kind != "name":
            raise ParseError(f"expected a lattice, found {v or 'end of input'!r}", pos)
        low = v.lower()
        if low in ("dual2", "evenpart"):
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Dual2(arg) if low == "dual2" else EvenPart(arg)
        if low == "glue":
            self.expect("(")
            arg = self.expr()
            vectors = []
            while self.peek()[1] == ";":
                self.take()
                vec = [self.rational()]
                while self.peek()[1] == ",":
                    self.take()
                    vec.append(self.rational())
                vectors.append(tuple(vec))
            if not vectors:
                raise ParseError("glue needs at least one vector", self.peek()[2])
            self.expect(")")
            return Glue(arg, tuple(vectors))
        if v == "U":
            return Atom("U")
        if v == "I":
            self.expect("(")
            m = self.integer()
            self.expect(",")
            n = self.integer()
            self.expect(")")
            if m + n == 0:
                raise ParseError("I(0,0) is empty", pos)
            return Atom("I", (m, n))
        m = re.fullmatch(r"([ADE])_?(\d+)", v)
        if m is None:
            if v in ("A", "D", "E") and self.peek()[0] == "int":
                n = self.integer()
                letter = v
            else:
                raise ParseError(f"unknown lattice {v!r}", pos)
        else:
            letter, n = m.group(1), int(m.group(2))
        if letter == "A" and n < 1:
            raise ParseError("A_n needs n >= 1", pos)
        if letter == "D" and n < 2:
            raise ParseError("D_n needs n >= 2", pos)
        if letter == "E" and n not in (6, 7, 8):
            raise ParseError("E_n needs n in 6, 7, 8", pos)
        return Atom(letter, (n,))


def rank_of(node: Node) -> int:
    if isinstance(node, Atom):
        if node.kind == "U":
            return 2
        if node.kind == "<>":
            return 1
        if node.kind == "I":
            return node.params[0] + node.params[1]
        return node.params[0]
    if isinstance(node, Sum):
        return sum(rank_of(t) for t in node.terms)
    if isinstance(node, Repeat):
        return rank_of(node.base) * node.count
    if isinstance(node, (Scale, Dual2, EvenPart, Glue)):
        return rank_of(node.base if isinstance(node, Scale) else node.arg)
    raise TypeError(node)


def parse(text: str) -> Node:
    node = _Parser(text).parse()
    r = rank_of(node)
    if r > MAX_RANK:
        raise ParseError(f"rank {r} exceeds the supported maximum {MAX_RANK}")
    return node


def _fmt_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_string(node: Node) -> str:
    """Canonical text of an expression; ``parse(to_string(n)) == n``."""
    if isinstance(node, Atom):
        if node.kind == "U":
            return "U"
        if node.kind == "<>":
            return f"<{node.params[0]}>"
        if node.kind == "I":
            return f"I({node.params[0]},{node.params[1]})"
        return f"{node.kind}{node.params[0]}"
    if isinstance(node, Sum):
        return " + ".join(f"({to_string(t)})" if isinstance(t, Sum) else to_string(t) for t in node.terms)
    if isinstance(node, Repeat):
        inner = to_string(node.base)
        if isinstance(node.base, (Sum, Repeat)):
            inner = f"({inner})"
        return f"{inner}^{node.count}"
    if isinstance(node, Scale):
        inner = to_string(node.base)
        if isinstance(node.base, (Sum, Repeat)):
            inner = f"({inner})"
        return f"{inner}({node.factor})"
    if isinstance(node, Dual2):
        return f"dual2({to_string(node.arg)})"
    if isinstance(node, EvenPart):
        return f"evenpart({to_string(node.arg)})"
    if isinstance(node, Glue):
        vecs = "; ".join(",".join(_fmt_rational(x) for x in v) for v in node.vectors)
        return f"glue({to_string(node.arg)}; {vecs})"
    raise TypeError(node)


def evaluate(node: Node) -> Lattice:
    if isinstance(node, Atom):
        if node.kind == "U":
            return lat.hyperbolic()
        if node.kind == "<>":
            return lat.rank_one(node.params[0])
        if node.kind == "I":
            return lat.odd_unimodular(*node.params)
        return {"A": lat.root_a, "D": lat.root_d, "E": lat.root_e}[node.kind](node.params[0])
    if isinstance(node, Sum):
        L = lat.direct_sum(*(evaluate(t) for t in node.terms))
    elif isinstance(node, Repeat):
        base = evaluate(node.base)
        L = lat.direct_sum(*([base] * node.count))
    elif isinstance(node, Scale):
        L = lat.rescale(evaluate(node.base), node.factor)
    elif isinstance(node, Dual2):
        L = lat.dual_rescale(evaluate(node.arg), 2)
    elif isinstance(node, EvenPart):
        L = lat.even_part(evaluate(node.arg))[0]
    elif isinstance(node, Glue):
        base = evaluate(node.arg)
        L = lat.overlattice(base, node.vectors, require_even=False)
    else:
        raise TypeError(node)
    return L.named(to_string(node))


def lattice(text: str) -> Lattice:
    """Parse and evaluate an expression."""
    return evaluate(parse(text))


def basis_labels(node: Node) -> list[str]:
    """Labels for the basis vectors of an evaluated expression, in order."""
    if isinstance(node, Atom):
        name = to_string(node)
        n = rank_of(node)
        if node.kind == "U":
            return ["U.e", "U.f"]
        return [name] if n == 1 else [f"{name}.{i + 1}" for i in range(n)]
    if isinstance(node, Sum):
        out: list[str] = []
        for t in node.terms:
            out.extend(basis_labels(t))
        return out
    if isinstance(node, Repeat):
        inner = basis_labels(node.base)
        return [f"{x}#{c + 1}" for c in range(node.count) for x in inner]
    if isinstance(node, Scale):
        return [f"{x}({node.factor})" for x in basis_labels(node.base)]
    return [f"b{i + 1}" for i in range(rank_of(node))]


__all__ = [
    "Atom", "Sum", "Repeat", "Scale", "Dual2", "EvenPart", "Glue", "Node",
    "parse", "to_string", "evaluate", "lattice", "rank_of", "basis_labels", "LatticeError",
]
