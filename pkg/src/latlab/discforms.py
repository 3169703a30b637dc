"""Finite quadratic forms, discriminant forms and their isometry groups.

A :class:`FiniteQuadraticForm` is presented by generator orders and a
symmetric rational matrix ``gram`` whose diagonal holds q(g_i) (mod 2, or
mod 1 for forms coming from odd lattices) and whose off-diagonal entries
hold b(g_i, g_j) mod 1.  Elements are encoded as integers in mixed radix
over the generator orders; index 0 is the zero element.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from . import linalg
from .errors import (
    ConsistencyError,
    DegenerateLatticeError,
    LatticeError,
    NotEvenError,
    NotTwoElementaryError,
    OutOfScopeError,
)

BRUTE_FORCE_LIMIT = 2 ** 8


def _mod(x: Fraction, m: int) -> Fraction:
    return x - m * math.floor(x / m)


@dataclass(frozen=True, eq=False)
class FiniteQuadraticForm:
    orders: tuple[int, ...]
    gram: tuple[tuple[Fraction, ...], ...]
    even: bool = True
    # lattice link: SNF rows mapping G*w to group coordinates
    lift: tuple[tuple[int, ...], ...] | None = field(default=None, repr=False)
    lattice_gram: tuple[tuple[int, ...], ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        k = len(self.orders)
        if any(n < 1 for n in self.orders):
            raise LatticeError("generator orders must be positive")
        if len(self.gram) != k or any(len(row) != k for row in self.gram):
            raise LatticeError("gram must be square of size len(orders)")
        qmod = 2 if self.even else 1
        g = []
        for i in range(k):
            row = []
            for j in range(k):
                x = Fraction(self.gram[i][j])
                if i != j and _mod(x - Fraction(self.gram[j][i]), 1):
                    raise LatticeError("gram must be symmetric")
                row.append(_mod(x, qmod) if i == j else _mod(x, 1))
            g.append(tuple(row))
        object.__setattr__(self, "gram", tuple(g))
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders))
        for i, n in enumerate(self.orders):
            for j in range(k):
                if (n * self.gram[i][j]).denominator != 1:
                    raise LatticeError("pairing is not well defined on the given orders")
            if self.even and (n * n * self.gram[i][i]) % 2:
                raise LatticeError("quadratic values are not well defined on the given orders")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_values(cls, orders: Sequence[int], gram: Sequence[Sequence], even: bool = True):
        return cls(tuple(orders), tuple(tuple(Fraction(x) for x in row) for row in gram), even)

    @classmethod
    def cyclic(cls, n: int, q) -> "FiniteQuadraticForm":
        return cls.from_values((n,), [[Fraction(q)]])

    @classmethod
    def trivial(cls) -> "FiniteQuadraticForm":
        return cls((), ())

    # -- basic structure ---------------------------------------------------

    @property
    def ngens(self) -> int:
        return len(self.orders)

    @cached_property
    def size(self) -> int:
        return math.prod(self.orders)

    @cached_property
    def scale(self) -> int:
        """Common denominator of all entries of ``gram``."""
        return linalg.common_denominator(x for row in self.gram for x in row)

    @property
    def qmod(self) -> int:
        return 2 if self.even else 1

    def coords(self, x: int) -> tuple[int, ...]:
        return self._coords[x]

    def index(self, coords: Sequence[int]) -> int:
        idx = 0
        mult = 1
        for c, n in zip(coords, self.orders):
            idx += (c % n) * mult
            mult *= n
        return idx

    @cached_property
    def _coords(self) -> list[tuple[int, ...]]:
        # first generator varies fastest
        return [tuple(reversed(c)) for c in product(*(range(n) for n in reversed(self.orders)))]

    def elements(self) -> range:
        return range(self.size)

    def generator(self, i: int) -> int:
        return self.index([1 if j == i else 0 for j in range(self.ngens)])

    def add(self, x: int, y: int) -> int:
        return self.index([a + b for a, b in zip(self._coords[x], self._coords[y])])

    def neg(self, x: int) -> int:
        return self.index([-a for a in self._coords[x]])

    def mul(self, m: int, x: int) -> int:
        return self.index([m * a for a in self._coords[x]])

    def order_of(self, x: int) -> int:
        c = self._coords[x]
        out = 1
        for a, n in zip(c, self.orders):
            o = n // math.gcd(a, n)
            out = out * o // math.gcd(out, o)
        return out

    # -- integer value tables ---------------------------------------------

    @cached_property
    def _int_gram(self) -> list[list[int]]:
        s = self.scale
        return [[int(x * s) for x in row] for row in self.gram]

    @cached_property
    def qtable(self) -> list[int]:
        """q(x) * scale, reduced mod qmod * scale."""
        s, k, g = self.scale, self.ngens, self._int_gram
        mod = self.qmod * s
        out = []
        for c in self._coords:
            v = sum(c[i] * c[i] * g[i][i] for i in range(k))
            v += 2 * sum(c[i] * c[j] * g[i][j] for i in range(k) for j in range(i + 1, k))
            out.append(v % mod)
        return out

    @cached_property
    def ptable(self) -> list[tuple[int, ...]]:
        """ptable[y][i] = b(g_i, y) * scale mod scale."""
        s, k, g = self.scale, self.ngens, self._int_gram
        return [tuple(sum(g[i][j] * c[j] for j in range(k)) % s for i in range(k))
                for c in self._coords]

    def _bint(self, x: int, y: int) -> int:
        p = self.ptable[y]
        return sum(a * b for a, b in zip(self._coords[x], p)) % self.scale

    def q(self, x: int) -> Fraction:
        return Fraction(self.qtable[x], self.scale)

    def b(self, x: int, y: int) -> Fraction:
        return Fraction(self._bint(x, y), self.scale)

    @cached_property
    def is_nondegenerate(self) -> bool:
        zero = (0,) * self.ngens
        return sum(1 for p in self.ptable if p == zero) == 1

    def negated(self) -> "FiniteQuadraticForm":
        return FiniteQuadraticForm(self.orders, tuple(tuple(-x for x in row) for row in self.gram), self.even)

    def value_multiset(self) -> dict[Fraction, int]:
        out: dict[Fraction, int] = {}
        for x in self.elements():
            v = self.q(x)
            out[v] = out.get(v, 0) + 1
        return dict(sorted(out.items()))

    def class_of(self, w: Sequence) -> int:
        """Element of the discriminant group represented by a dual vector.

        ``w`` holds rational coordinates in the lattice basis; only available
        for forms produced by :func:`discriminant_form`.
        """
        if self.lift is None or self.lattice_gram is None:
            raise LatticeError("form is not attached to a lattice")
        y = linalg.matvec(self.lattice_gram, [Fraction(x) for x in w])
        if any(Fraction(v).denominator != 1 for v in y):
            raise LatticeError("vector does not lie in the dual lattice")
        y = [int(v) for v in y]
        return self.index(linalg.matvec(self.lift, y))

    def __repr__(self) -> str:
        return f"FiniteQuadraticForm(orders={self.orders}, gram={[[str(x) for x in r] for r in self.gram]})"


def direct_sum(*forms: FiniteQuadraticForm) -> FiniteQuadraticForm:
    orders: list[int] = []
    blocks = []
    for f in forms:
        orders.extend(f.orders)
        blocks.append(f.gram)
    k = len(orders)
    gram = [[Fraction(0)] * k for _ in range(k)]
    off = 0
    for blk in blocks:
        for i, row in enumerate(blk):
            for j, x in enumerate(row):
                gram[off + i][off + j] = x
        off += len(blk)
    even = all(f.even for f in forms)
    return FiniteQuadraticForm.from_values(orders, gram, even)


# ---------------------------------------------------------------------------
# Discriminant forms of lattices


def _gram_of(lattice) -> list[list[int]]:
    g = getattr(lattice, "gram", lattice)
    return [[int(x) for x in row] for row in g]


def discriminant_form(lattice) -> FiniteQuadraticForm:
    """Discriminant form of an integral nondegenerate lattice.

    Accepts a :class:`latlab.lattices.Lattice` or a raw Gram matrix.  For
    odd lattices the quadratic values are only defined mod 1 and the
    returned form has ``even=False``.
    """
    g = _gram_of(lattice)
    n = len(g)
    if n == 0:
        return FiniteQuadraticForm.trivial()
    u, d, v = linalg.smith_normal_form(g)
    diag = [d[i][i] for i in range(n)]
    if any(x == 0 for x in diag):
        raise DegenerateLatticeError("lattice is degenerate")
    even = all(g[i][i] % 2 == 0 for i in range(n))
    idx = [i for i in range(n) if diag[i] > 1]
    gens = [[Fraction(v[r][i], diag[i]) for r in range(n)] for i in idx]
    gram = [[linalg.bilinear(a, g, b) for b in gens] for a in gens]
    lift = tuple(tuple(u[i]) for i in idx)
    form = FiniteQuadraticForm(
        tuple(diag[i] for i in idx),
        tuple(tuple(Fraction(x) for x in row) for row in gram),
        even,
        lift=lift,
        lattice_gram=tuple(tuple(row) for row in g),
    )
    return form


def generator_vectors(lattice) -> list[list[Fraction]]:
    """Dual-lattice representatives of the generators of the discriminant form."""
    g = _gram_of(lattice)
    n = len(g)
    _, d, v = linalg.smith_normal_form(g)
    return [[Fraction(v[r][i], d[i][i]) for r in range(n)] for i in range(n) if d[i][i] > 1]


def is_two_elementary(q: FiniteQuadraticForm) -> bool:
    return all(n == 2 for n in q.orders)


def _abelian_invariants(orders: Iterable[int]) -> list[int]:
    orders = [n for n in orders if n > 1]
    if not orders:
        return []
    diag = [[n if i == j else 0 for j in range(len(orders))] for i, n in enumerate(orders)]
    return [x for x in linalg.invariant_factors(diag) if x > 1]


def length(q: FiniteQuadraticForm) -> int:
    """Minimal number of generators of the group."""
    return len(_abelian_invariants(q.orders))


def parity(q: FiniteQuadraticForm) -> int:
    """0 when q takes only integer values, 1 otherwise (2-elementary forms)."""
    if not is_two_elementary(q):
        raise NotTwoElementaryError("parity is defined for 2-elementary forms")
    if not q.even:
        raise NotEvenError("parity needs quadratic values mod 2")
    k = q.ngens
    integral = all(q.gram[i][i].denominator == 1 for i in range(k)) and all(
        (2 * q.gram[i][j]).denominator == 1 for i in range(k) for j in range(k)
    )
    return 0 if integral else 1


def gauss_sum(q: FiniteQuadraticForm) -> complex:
    if not q.even:
        raise NotEvenError("Gauss sums need quadratic values mod 2")
    s = q.scale
    return sum(cmath.exp(1j * math.pi * v / s) for v in q.qtable)


def gauss_signature(q: FiniteQuadraticForm, tol: float = 1e-6, snap: float = 1e-3) -> int:
    """The value sigma mod 8 with sum_x exp(pi i q(x)) = sqrt|D| exp(2 pi i sigma / 8).

    This is the only floating-point computation in latlab: the modulus must
    match sqrt|D| to relative tolerance ``tol`` and the phase must lie
    within ``snap`` of an eighth of a turn.
    """
    if not q.is_nondegenerate:
        raise DegenerateLatticeError("form is degenerate")
    if q.size > 2 ** 12:
        raise OutOfScopeError("Gauss sums are evaluated for groups of order at most 2^12")
    total = gauss_sum(q)
    expected = math.sqrt(q.size)
    if abs(abs(total) - expected) > tol * expected:
        raise ConsistencyError(f"Gauss sum has modulus {abs(total)}, expected {expected}")
    angle = cmath.phase(total) / (2 * math.pi) * 8
    sigma = round(angle)
    if abs(angle - sigma) > snap:
        raise ConsistencyError(f"Gauss sum phase {angle} is not a multiple of pi/4")
    return sigma % 8


def norm_elements(q: FiniteQuadraticForm, value) -> list[int]:
    target = Fraction(value) % q.qmod
    return [x for x in q.elements() if q.q(x) == target]


def norm_one_elements(q: FiniteQuadraticForm) -> list[int]:
    return norm_elements(q, 1)


def characteristic_element(q: FiniteQuadraticForm) -> int:
    """The element c with b(x, x) = b(x, c) for all x (2-elementary forms)."""
    if not is_two_elementary(q):
        raise NotTwoElementaryError("characteristic element needs a 2-elementary form")
    k, s = q.ngens, q.scale
    want = tuple(q._int_gram[i][i] % s for i in range(k))
    hits = [c for c in q.elements() if q.ptable[c] == want]
    if len(hits) != 1:
        raise DegenerateLatticeError("form is degenerate")
    return hits[0]


# ---------------------------------------------------------------------------
# Block decomposition of 2-elementary forms

BLOCK_SIGNATURE = {"u": 0, "v": 4, "w+": 1, "w-": 7}


def block_form(name: str) -> FiniteQuadraticForm:
    h = Fraction(1, 2)
    if name == "u":
        return FiniteQuadraticForm.from_values((2, 2), [[0, h], [h, 0]])
    if name == "v":
        return FiniteQuadraticForm.from_values((2, 2), [[1, h], [h, 1]])
    if name == "w+":
        return FiniteQuadraticForm.cyclic(2, h)
    if name == "w-":
        return FiniteQuadraticForm.cyclic(2, Fraction(3, 2))
    raise LatticeError(f"unknown block {name!r}")


def form_from_blocks(names: Iterable[str]) -> FiniteQuadraticForm:
    names = list(names)
    if not names:
        return FiniteQuadraticForm.trivial()
    return direct_sum(*(block_form(n) for n in names))


def block_decomposition(q: FiniteQuadraticForm) -> list[tuple[str, tuple[int, ...]]]:
    """Split a nondegenerate 2-elementary form into u, v, w+ and w- blocks.

    Returns (block name, element indices of the block's generators); the
    blocks are mutually orthogonal and together generate the group.
    """
    if not is_two_elementary(q):
        raise NotTwoElementaryError("block decomposition needs a 2-elementary form")
    if not q.even:
        raise NotEvenError("block decomposition needs quadratic values mod 2")
    if not q.is_nondegenerate:
        raise DegenerateLatticeError("form is degenerate")
    s = q.scale
    half = s // 2
    blocks: list[tuple[str, tuple[int, ...]]] = []
    # current subspace, spanned over F_2 by `basis`
    basis = [q.generator(i) for i in range(q.ngens)]

    def span(vectors):
        out = [0]
        for v in vectors:
            out = out + [q.add(x, v) for x in out]
        return out

    def perp(vectors, inside):
        # basis of the orthogonal complement of `vectors` inside span(inside)
        keep = []
        elems = span(inside)
        members = [x for x in elems if all(q._bint(x, v) == 0 for v in vectors)]
        # extract an F_2 basis greedily
        current = {0}
        for x in members:
            if x not in current:
                keep.append(x)
                current |= {q.add(x, y) for y in current}
        return keep

    while basis:
        elems = span(basis)[1:]
        odd = next((x for x in elems if q._bint(x, x) == half), None)
        if odd is not None:
            name = "w+" if q.qtable[odd] == half else "w-"
            blocks.append((name, (odd,)))
            basis = perp([odd], basis)
            continue
        x = elems[0]
        y = next(z for z in elems if q._bint(x, z) == half)
        vals = sorted(q.qtable[t] for t in (x, y, q.add(x, y)))
        name = "u" if vals[0] == 0 else "v"
        if name == "u":
            # normalise so that both generators are isotropic
            iso = [t for t in (x, y, q.add(x, y)) if q.qtable[t] == 0]
            x, y = iso[0], iso[1]
        blocks.append((name, (x, y)))
        basis = perp([x, y], basis)
    return blocks


def block_counts(q: FiniteQuadraticForm) -> dict[str, int]:
    counts = {"u": 0, "v": 0, "w+": 0, "w-": 0}
    for name, _ in block_decomposition(q):
        counts[name] += 1
    return counts


# ---------------------------------------------------------------------------
# Classical group orders


def sp_order(dim: int, field_size: int = 2) -> int:
    if dim % 2:
        raise LatticeError("symplectic groups need even dimension")
    n = dim // 2
    p = field_size
    out = p ** (n * n)
    for i in range(1, n + 1):
        out *= p ** (2 * i) - 1
    return out


def orthogonal_order(dim: int, eps: int, field_size: int = 2) -> int:
    """|O^eps(dim, p)| for even dim (eps = +1 split, -1 non-split)."""
    if dim % 2:
        raise LatticeError("only even-dimensional orthogonal groups are used here")
    if eps not in (1, -1):
        raise LatticeError("eps must be +1 or -1")
    n = dim // 2
    p = field_size
    if n == 0:
        if eps != 1:
            raise LatticeError("no non-split form in dimension 0")
        return 1
    out = 2 * p ** (n * (n - 1)) * (p ** n - eps)
    for i in range(1, n):
        out *= p ** (2 * i) - 1
    return out


WEYL_ORDERS = {5: 1920, 6: 51840, 7: 2903040, 8: 696729600}


def classical_order(kind: str, dim: int) -> int:
    """Orders of the classical groups used for identities.

    kind is one of 'Sp', 'O+', 'O-', 'W(E)'.
    """
    if kind == "Sp":
        return sp_order(dim)
    if kind == "O+":
        return orthogonal_order(dim, 1)
    if kind == "O-":
        return orthogonal_order(dim, -1)
    if kind == "W(E)":
        if dim not in WEYL_ORDERS:
            raise LatticeError(f"no Weyl group order stored for E{dim}")
        return WEYL_ORDERS[dim]
    raise LatticeError(f"unknown group kind {kind!r}")


def _type_from_signature(sigma: int) -> int:
    if sigma % 8 == 0:
        return 1
    if sigma % 8 == 4:
        return -1
    raise ConsistencyError(f"signature {sigma} does not give an orthogonal type")


def closed_form_order(q: FiniteQuadraticForm) -> int:
    """|O(q)| for a nondegenerate 2-elementary form from its invariants."""
    if not is_two_elementary(q):
        raise NotTwoElementaryError("closed form needs a 2-elementary form")
    a = length(q)
    sigma = gauss_signature(q)
    if a == 0:
        return 1
    if parity(q) == 0:
        return orthogonal_order(a, _type_from_signature(sigma))
    c = characteristic_element(q)
    qc = q.q(c)
    if a % 2:
        s_c = 1 if qc == Fraction(1, 2) else -1
        return orthogonal_order(a - 1, _type_from_signature(sigma - s_c))
    if qc == 0:
        return 2 ** (a - 2) * orthogonal_order(a - 2, _type_from_signature(sigma))
    return 2 * sp_order(a - 2)


# ---------------------------------------------------------------------------
# Exhaustive isometry search


class _Search:
    """Backtracking over images of the generators of ``src`` inside ``dst``."""

    def __init__(self, src: FiniteQuadraticForm, dst: FiniteQuadraticForm):
        if src.even != dst.even:
            raise LatticeError("cannot compare forms of different parity conventions")
        self.src, self.dst = src, dst
        m = src.scale * dst.scale // math.gcd(src.scale, dst.scale)
        self.m = m
        fs, fd = m // src.scale, m // dst.scale
        k = src.ngens
        self.k = k
        self.gens = [src.generator(i) for i in range(k)]
        self.target = [[(src._int_gram[i][j] * fs) % m for j in range(k)] for i in range(k)]
        dq = [v * fd for v in dst.qtable]
        self.dcoords = dst._coords
        self.dptab = [tuple(p * fd for p in row) for row in dst.ptable]
        self.cand = []
        for i in range(k):
            want = src.qtable[self.gens[i]] * fs
            self.cand.append([y for y in dst.elements()
                              if dq[y] == want and dst.order_of(y) == src.orders[i]])

    def pair(self, y: int, z: int) -> int:
        return sum(a * b for a, b in zip(self.dcoords[y], self.dptab[z])) % self.m

    def consistent(self, level: int, y: int, assigned: Sequence[int]) -> bool:
        t = self.target[level]
        return all(self.pair(y, assigned[j]) == t[j] for j in range(len(assigned)))

    def complete(self, assigned: list[int]) -> list[int] | None:
        level = len(assigned)
        if level == self.k:
            return list(assigned)
        for y in self.cand[level]:
            if self.consistent(level, y, assigned):
                assigned.append(y)
                found = self.complete(assigned)
                assigned.pop()
                if found is not None:
                    return found
        return None

    def count(self, assigned: list[int] | None = None) -> int:
        assigned = [] if assigned is None else assigned
        level = len(assigned)
        if level == self.k:
            return 1
        total = 0
        for y in self.cand[level]:
            if self.consistent(level, y, assigned):
                assigned.append(y)
                total += self.count(assigned)
                assigned.pop()
        return total


@dataclass(frozen=True)
class AutomorphismData:
    order: int
    orbit_sizes: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...]   # images of the form's generators


def _check_searchable(q: FiniteQuadraticForm, limit: int):
    if not q.even:
        raise NotEvenError("isometries are computed for forms with values mod 2")
    if not q.is_nondegenerate:
        raise DegenerateLatticeError("form is degenerate")
    if q.size > limit:
        raise OutOfScopeError(f"group of order {q.size} exceeds the brute-force limit {limit}")


def automorphism_data(q: FiniteQuadraticForm, limit: int = 2 ** 12) -> AutomorphismData:
    """Order and a generating set of O(q) through a stabiliser chain.

    |O(q)| is the product over i of the orbit size of g_i under the
    pointwise stabiliser of g_1..g_{i-1}; each orbit point is certified by
    an explicit extension to a full isometry, and these extensions
    generate the group.
    """
    cached = q.__dict__.get("_autdata")
    if cached is not None:
        return cached
    _check_searchable(q, limit)
    search = _Search(q, q)
    order = 1
    sizes = []
    gens: list[tuple[int, ...]] = []
    for level in range(search.k):
        prefix = search.gens[:level]
        orbit = 0
        for y in search.cand[level]:
            if not search.consistent(level, y, prefix):
                continue
            sol = search.complete(prefix + [y])
            if sol is None:
                continue
            orbit += 1
            if y != search.gens[level]:
                gens.append(tuple(sol))
        sizes.append(orbit)
        order *= orbit
    data = AutomorphismData(order, tuple(sizes), tuple(gens))
    q.__dict__["_autdata"] = data
    return data


def count_isometries_exhaustive(q: FiniteQuadraticForm, limit: int = BRUTE_FORCE_LIMIT) -> int:
    """Count every generator assignment (slow reference path)."""
    _check_searchable(q, limit)
    return _Search(q, q).count()


def find_isometry(src: FiniteQuadraticForm, dst: FiniteQuadraticForm,
                  limit: int = 2 ** 12) -> list[int] | None:
    """Images of the generators of ``src`` under an isometry onto ``dst``."""
    if _abelian_invariants(src.orders) != _abelian_invariants(dst.orders):
        return None
    _check_searchable(src, limit)
    _check_searchable(dst, limit)
    if src.size == 1:
        return []
    return _Search(src, dst).complete([])


def are_isometric(a: FiniteQuadraticForm, b: FiniteQuadraticForm) -> bool:
    return find_isometry(a, b) is not None


def apply_map(q: FiniteQuadraticForm, images: Sequence[int], x: int) -> int:
    out = [0] * q.ngens
    for c, y in zip(q.coords(x), images):
        if c:
            yc = q.coords(y)
            out = [a + c * b for a, b in zip(out, yc)]
    return q.index(out)


def _permutations(q: FiniteQuadraticForm, limit: int) -> list[list[int]]:
    data = automorphism_data(q, limit)
    return [[apply_map(q, g, x) for x in q.elements()] for g in data.generators]


@dataclass(frozen=True)
class GroupOrder:
    value: int
    derivation: str   # 'brute_force', 'closed_form' or 'both_agree'


def isometry_group_order(q: FiniteQuadraticForm, brute_force_limit: int = BRUTE_FORCE_LIMIT) -> GroupOrder:
    """|O(q)|, cross-checking the exhaustive and closed-form routes when both apply."""
    if not q.even:
        raise NotEvenError("isometry groups are computed for forms with values mod 2")
    if not q.is_nondegenerate:
        raise DegenerateLatticeError("form is degenerate")
    brute = automorphism_data(q).order if q.size <= brute_force_limit else None
    closed = closed_form_order(q) if is_two_elementary(q) else None
    if brute is None and closed is None:
        raise OutOfScopeError(
            f"group of order {q.size} is above the brute-force limit and is not 2-elementary")
    if brute is not None and closed is not None:
        if brute != closed:
            raise ConsistencyError(f"exhaustive count {brute} disagrees with closed form {closed}")
        return GroupOrder(brute, "both_agree")
    if brute is not None:
        return GroupOrder(brute, "brute_force")
    return GroupOrder(closed, "closed_form")


def orbits(q: FiniteQuadraticForm, elements: Iterable[int] | None = None,
           limit: int = 2 ** 12) -> list[list[int]]:
    """O(q)-orbits meeting ``elements`` (all elements by default)."""
    perms = _permutations(q, limit)
    todo = list(q.elements()) if elements is None else list(dict.fromkeys(elements))
    seen: dict[int, int] = {}
    out: list[list[int]] = []
    for x in todo:
        if x in seen:
            continue
        orbit = [x]
        seen[x] = len(out)
        i = 0
        while i < len(orbit):
            y = orbit[i]
            for p in perms:
                z = p[y]
                if z not in seen:
                    seen[z] = len(out)
                    orbit.append(z)
            i += 1
        out.append(sorted(orbit))
    return out


def orbit_of(q: FiniteQuadraticForm, x: int, limit: int = 2 ** 12) -> list[int]:
    return orbits(q, [x], limit)[0]


def stabilizer_order(q: FiniteQuadraticForm, x: int, limit: int = 2 ** 12) -> int:
    data = automorphism_data(q, limit)
    return data.order // len(orbit_of(q, x, limit))
