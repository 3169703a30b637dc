"""Integral lattices given by Gram matrices, with the standard constructions.

Sign conventions: the root lattices A_n, D_n, E_n are negative definite,
U is the hyperbolic plane [[0, 1], [1, 0]], <k> is the rank-one lattice
with Gram [k], and I(m, n) is diag(1^m, (-1)^n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterator, Sequence

from . import discforms, linalg
from .discforms import FiniteQuadraticForm
from .errors import (
    DegenerateLatticeError,
    LatticeError,
    NotEvenError,
    NotTwoElementaryError,
    OutOfScopeError,
)

MAX_RANK = 26


@dataclass(frozen=True, eq=False)
class Lattice:
    gram: tuple[tuple[int, ...], ...]
    name: str = ""
    # rational coordinates of the basis in the lattice this one was built from
    embedding: tuple[tuple[Fraction, ...], ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        if any(Fraction(x).denominator != 1 for row in self.gram for x in row):
            raise LatticeError("Gram matrix must be integral")
        if not linalg.is_symmetric(g):
            raise LatticeError("Gram matrix must be symmetric")
        if len(g) > MAX_RANK:
            raise LatticeError(f"rank {len(g)} exceeds the supported maximum {MAX_RANK}")
        object.__setattr__(self, "gram", g)

    @classmethod
    def from_gram(cls, gram: Sequence[Sequence[int]], name: str = "") -> "Lattice":
        return cls(tuple(tuple(row) for row in gram), name)

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice) and self.gram == other.gram

    def __hash__(self) -> int:
        return hash(self.gram)

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<Lattice{label} rank={self.rank} sig={self.signature}>"

    @property
    def rank(self) -> int:
        return len(self.gram)

    def matrix(self) -> list[list[int]]:
        return [list(row) for row in self.gram]

    @cached_property
    def det(self) -> int:
        return int(linalg.determinant(self.gram))

    @cached_property
    def signature(self) -> tuple[int, int]:
        p, z, n = linalg.signature(self.gram)
        if z:
            raise DegenerateLatticeError("lattice is degenerate")
        return p, n

    @property
    def is_nondegenerate(self) -> bool:
        return self.det != 0

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @property
    def is_definite(self) -> bool:
        p, n = self.signature
        return p == 0 or n == 0

    @property
    def is_indefinite(self) -> bool:
        return not self.is_definite

    @cached_property
    def discriminant_form(self) -> FiniteQuadraticForm:
        return discforms.discriminant_form(self)

    def inner(self, x: Sequence, y: Sequence):
        return linalg.bilinear(x, self.gram, y)

    def norm(self, x: Sequence):
        return self.inner(x, x)

    def in_dual(self, w: Sequence) -> bool:
        return all(Fraction(v).denominator == 1 for v in linalg.matvec(self.gram, w))

    def named(self, name: str) -> "Lattice":
        return Lattice(self.gram, name, self.embedding)


# ---------------------------------------------------------------------------
# Named lattices


def hyperbolic(k: int = 1) -> Lattice:
    if k == 0:
        raise LatticeError("scaling factor must be nonzero")
    return Lattice(((0, k), (k, 0)), "U" if k == 1 else f"U({k})")


def rank_one(k: int) -> Lattice:
    if k == 0:
        raise LatticeError("<0> is degenerate")
    return Lattice(((k,),), f"<{k}>")


def odd_unimodular(m: int, n: int) -> Lattice:
    if m < 0 or n < 0 or m + n == 0:
        raise LatticeError("I(m,n) needs m, n >= 0 and m + n > 0")
    size = m + n
    return Lattice(tuple(tuple((1 if i < m else -1) if i == j else 0 for j in range(size))
                         for i in range(size)), f"I({m},{n})")


def _from_dynkin(n: int, edges: Sequence[tuple[int, int]], name: str) -> Lattice:
    g = [[-2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in edges:
        g[i][j] = g[j][i] = 1
    return Lattice.from_gram(g, name)


def root_a(n: int) -> Lattice:
    if n < 1:
        raise LatticeError("A_n needs n >= 1")
    return _from_dynkin(n, [(i, i + 1) for i in range(n - 1)], f"A{n}")


def d_basis(n: int) -> list[list[int]]:
    """Root basis of D_n inside I(0, n): e1+e2, -e1+e2, -e_{i-1}+e_i."""
    rows = []
    for i in range(n):
        v = [0] * n
        if i == 0:
            v[0], v[1] = 1, 1
        elif i == 1:
            v[0], v[1] = -1, 1
        else:
            v[i - 1], v[i] = -1, 1
        rows.append(v)
    return rows


def root_d(n: int) -> Lattice:
    if n < 2:
        raise LatticeError("D_n needs n >= 2")
    basis = d_basis(n)
    ambient = [[-1 if i == j else 0 for j in range(n)] for i in range(n)]
    return Lattice.from_gram(linalg.congruent(basis, ambient), f"D{n}")


def root_e(n: int) -> Lattice:
    if n not in (6, 7, 8):
        raise LatticeError("E_n is available for n = 6, 7, 8")
    # chain 0..n-2, extra node n-1 attached to node 2
    edges = [(i, i + 1) for i in range(n - 2)] + [(2, n - 1)]
    return _from_dynkin(n, edges, f"E{n}")


# ---------------------------------------------------------------------------
# Constructions


def make_named(name: str, *params: int) -> Lattice:
    """Named lattice: U, U(k), <k>, A_n, D_n, E_n or I(m,n)."""
    key = name.strip().upper()
    try:
        if key == "U":
            return hyperbolic(*params) if params else hyperbolic()
        if key in ("<>", "<K>", "K"):
            return rank_one(*params)
        if key == "A":
            return root_a(*params)
        if key == "D":
            return root_d(*params)
        if key == "E":
            return root_e(*params)
        if key == "I":
            return odd_unimodular(*params)
    except TypeError as exc:
        raise LatticeError(f"wrong parameters for {name}: {params}") from exc
    raise LatticeError(f"unknown lattice name {name!r}")


def direct_sum(*lattices: Lattice) -> Lattice:
    n = sum(L.rank for L in lattices)
    if n > MAX_RANK:
        raise LatticeError(f"rank {n} exceeds the supported maximum {MAX_RANK}")
    g = [[0] * n for _ in range(n)]
    off = 0
    for L in lattices:
        for i, row in enumerate(L.gram):
            for j, x in enumerate(row):
                g[off + i][off + j] = x
        off += L.rank
    return Lattice.from_gram(g, " + ".join(L.name or "?" for L in lattices))


def rescale(L: Lattice, k: int) -> Lattice:
    if k == 0:
        raise LatticeError("scaling factor must be nonzero")
    return Lattice.from_gram([[k * x for x in row] for row in L.gram], f"({L.name})({k})" if L.name else "")


def dual_rescale(L: Lattice, k: int) -> Lattice:
    """The dual lattice with its form multiplied by k, (L^vee)(k)."""
    if not L.is_nondegenerate:
        raise DegenerateLatticeError("lattice is degenerate")
    inv = linalg.inverse(L.gram)
    g = [[k * x for x in row] for row in inv]
    if any(x.denominator != 1 for row in g for x in row):
        raise LatticeError(f"the dual rescaled by {k} is not integral")
    return Lattice.from_gram([[int(x) for x in row] for row in g])


def overlattice(L: Lattice, glue: Sequence[Sequence], require_even: bool = True) -> Lattice:
    """Lattice generated by L and rational glue vectors (coordinates in L's basis)."""
    glue = [[Fraction(x) for x in v] for v in glue]
    for v in glue:
        if len(v) != L.rank:
            raise LatticeError("glue vector has the wrong length")
        if not L.in_dual(v):
            raise LatticeError("glue vector is not in the dual lattice")
    rows = [[Fraction(int(i == j)) for j in range(L.rank)] for i in range(L.rank)] + glue
    basis = linalg.rational_basis_hnf(rows)
    g = linalg.congruent(basis, L.gram)
    if any(Fraction(x).denominator != 1 for row in g for x in row):
        raise LatticeError("glue does not give an integral overlattice")
    M = Lattice(tuple(tuple(int(x) for x in row) for row in g), "", tuple(tuple(r) for r in basis))
    if require_even and not M.is_even:
        raise NotEvenError("overlattice is not even")
    return M


def even_part(L: Lattice) -> tuple[Lattice, tuple[Fraction, ...]]:
    """Even sublattice L0 of an odd lattice and the glue vector x with L = L0 + Zx.

    x is given in L0's basis (it lies in L0^vee); its class in D(L0) is
    ``L0.discriminant_form.class_of(x)``.
    """
    n = L.rank
    parity = [L.gram[i][i] % 2 for i in range(n)]
    if not any(parity):
        raise LatticeError("lattice is already even")
    p = parity.index(1)
    gens = []
    for i in range(n):
        v = [0] * n
        if i == p:
            v[p] = 2
        elif parity[i]:
            v[i], v[p] = 1, -1
        else:
            v[i] = 1
        gens.append(v)
    basis = linalg.hermite_normal_form(gens)
    g = linalg.congruent(basis, L.gram)
    L0 = Lattice(tuple(tuple(row) for row in g), "", tuple(tuple(Fraction(x) for x in r) for r in basis))
    # coordinates of the odd vector e_p in the basis of L0
    inv = linalg.inverse(basis)
    x = tuple(inv[p][j] for j in range(n))
    return L0, x


def orthogonal_complement(L: Lattice, v: Sequence[int]) -> Lattice:
    v = [int(x) for x in v]
    if len(v) != L.rank:
        raise LatticeError("vector has the wrong length")
    if not any(v):
        raise LatticeError("vector is zero")
    if linalg.vector_gcd(v) != 1:
        raise LatticeError("vector is not primitive")
    if L.norm(v) == 0:
        raise LatticeError("vector is isotropic")
    col = [[x] for x in linalg.matvec(L.gram, v)]
    basis = linalg.integer_kernel(col)
    g = linalg.congruent(basis, L.gram)
    return Lattice(tuple(tuple(row) for row in g), "", tuple(tuple(Fraction(x) for x in r) for r in basis))


def sublattice(L: Lattice, rows: Sequence[Sequence[int]]) -> Lattice:
    g = linalg.congruent(rows, L.gram)
    return Lattice(tuple(tuple(row) for row in g), "", tuple(tuple(Fraction(x) for x in r) for r in rows))


@dataclass(frozen=True)
class GlueData:
    sub: Lattice
    perp: Lattice
    sub_form: FiniteQuadraticForm
    perp_form: FiniteQuadraticForm
    glue_sub: tuple[int, ...]      # subgroup of D(sub), element indices
    glue_perp: tuple[int, ...]     # subgroup of D(perp)
    gluing: dict                   # element of glue_sub -> element of glue_perp

    @property
    def index(self) -> int:
        return len(self.glue_sub)


def _span(form: FiniteQuadraticForm, pairs, other: FiniteQuadraticForm):
    seen = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        nxt = []
        for a, b in frontier:
            for x, y in pairs:
                c = (form.add(a, x), other.add(b, y))
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return seen


def glue_data(L: Lattice, S_rows: Sequence[Sequence[int]]) -> GlueData:
    """Gluing between a primitive nondegenerate sublattice S and its complement."""
    S_rows = [[int(x) for x in r] for r in S_rows]
    if any(x != 1 for x in linalg.invariant_factors(S_rows)):
        raise LatticeError("sublattice is not primitive")
    S = sublattice(L, S_rows)
    if not S.is_nondegenerate:
        raise DegenerateLatticeError("sublattice is degenerate")
    gst = linalg.matmul(L.gram, linalg.transpose(S_rows))      # n x k, entries (e_i, s_j)
    perp_rows = linalg.integer_kernel(gst)
    P = sublattice(L, perp_rows)
    if not P.is_nondegenerate:
        raise DegenerateLatticeError("orthogonal complement is degenerate")
    gpt = linalg.matmul(L.gram, linalg.transpose(perp_rows))
    fs, fp = S.discriminant_form, P.discriminant_form
    inv_s = linalg.inverse(S.gram) if S.rank else []
    inv_p = linalg.inverse(P.gram) if P.rank else []
    pairs = []
    for i in range(L.rank):
        ws = linalg.matvec(inv_s, gst[i]) if S.rank else []
        wp = linalg.matvec(inv_p, gpt[i]) if P.rank else []
        xs = fs.class_of(ws) if fs.size > 1 else 0
        xp = fp.class_of(wp) if fp.size > 1 else 0
        pairs.append((xs, xp))
    graph = _span(fs, pairs, fp)
    gluing: dict[int, int] = {}
    for a, b in graph:
        if gluing.setdefault(a, b) != b:
            raise LatticeError("gluing is not a function; lattice data inconsistent")
    sub = tuple(sorted(gluing))
    return GlueData(S, P, fs, fp, sub, tuple(sorted(gluing[a] for a in sub)), gluing)


# ---------------------------------------------------------------------------
# 2-elementary invariants and isometry tests


@dataclass(frozen=True)
class MainInvariant:
    r: int
    a: int
    delta: int
    signature: tuple[int, int]

    @property
    def hyperbolic(self) -> bool:
        return self.signature == (1, self.r - 1)

    @property
    def g(self) -> int | None:
        return 11 - (self.r + self.a) // 2 if self.hyperbolic else None

    @property
    def k(self) -> int | None:
        return (self.r - self.a) // 2 if self.hyperbolic else None

    def triple(self) -> tuple[int, int, int]:
        return (self.r, self.a, self.delta)


def _require_even_2el(L: Lattice) -> FiniteQuadraticForm:
    if not L.is_nondegenerate:
        raise DegenerateLatticeError("lattice is degenerate")
    if not L.is_even:
        raise NotEvenError("lattice is odd")
    D = L.discriminant_form
    if not discforms.is_two_elementary(D):
        raise NotTwoElementaryError(f"discriminant group has orders {D.orders}")
    return D


def main_invariant(L: Lattice) -> MainInvariant:
    D = _require_even_2el(L)
    return MainInvariant(L.rank, discforms.length(D), discforms.parity(D), L.signature)


def two_elementary_isometric(L1: Lattice, L2: Lattice) -> bool:
    """Isometry test for even indefinite 2-elementary lattices via (signature, a, delta)."""
    for L in (L1, L2):
        _require_even_2el(L)
        if L.is_definite:
            raise OutOfScopeError("invariants only classify indefinite lattices")
    m1, m2 = main_invariant(L1), main_invariant(L2)
    return (m1.signature, m1.a, m1.delta) == (m2.signature, m2.a, m2.delta)


def _unique_in_genus(L: Lattice) -> bool:
    return L.is_indefinite and L.rank >= discforms.length(L.discriminant_form) + 2


def indefinite_isometric(L1: Lattice, L2: Lattice) -> bool:
    """Isometry test for even indefinite lattices that are unique in their genus.

    Such a lattice is determined by its signature and discriminant form;
    the forms are compared by an explicit isometry search.
    """
    for L in (L1, L2):
        if not L.is_nondegenerate:
            raise DegenerateLatticeError("lattice is degenerate")
        if not L.is_even:
            raise NotEvenError("lattice is odd")
        if not _unique_in_genus(L):
            raise OutOfScopeError("lattice is not certified unique in its genus")
    if L1.signature != L2.signature:
        return False
    return discforms.are_isometric(L1.discriminant_form, L2.discriminant_form)


def odd_isometric(L1: Lattice, L2: Lattice) -> bool:
    """Isometry test for odd indefinite lattices through their even parts.

    L = L0 + Zx, so L1 and L2 are isometric exactly when an isometry of the
    even parts carries the class of x1 to that of x2; for even parts unique
    in their genus every isometry of discriminant forms lifts, which turns
    this into an orbit question on D(L0).
    """
    if L1.is_even or L2.is_even:
        raise LatticeError("both lattices must be odd")
    if L1.signature != L2.signature or abs(L1.det) != abs(L2.det):
        return False
    (A, xa), (B, xb) = even_part(L1), even_part(L2)
    for L0 in (A, B):
        if not _unique_in_genus(L0):
            raise OutOfScopeError("even part is not certified unique in its genus")
    qa, qb = A.discriminant_form, B.discriminant_form
    phi = discforms.find_isometry(qa, qb)
    if phi is None:
        return False
    ca = discforms.apply_map(qa, phi, qa.class_of(xa))
    return ca in discforms.orbit_of(qb, qb.class_of(xb))


# ---------------------------------------------------------------------------
# Definite lattices


def _positive_gram(L: Lattice) -> list[list[int]]:
    p, n = L.signature
    if n == 0:
        return L.matrix()
    if p == 0:
        return [[-x for x in row] for row in L.gram]
    raise LatticeError("lattice is indefinite")


def short_vectors(L: Lattice, bound: int) -> list[tuple[int, ...]]:
    """Vectors with 0 < |x.x| <= bound in a definite lattice, one per pair +-x."""
    if L.rank > 12:
        raise OutOfScopeError("short vector enumeration is limited to rank 12")
    return linalg.short_vectors(_positive_gram(L), bound)


def definite_isometric(L1: Lattice, L2: Lattice) -> bool:
    """Backtracking isometry test for definite lattices of rank <= 12."""
    if L1.rank != L2.rank:
        return False
    if L1.rank > 12:
        raise OutOfScopeError("definite isometry is limited to rank 12")
    if L1.signature != L2.signature or L1.det != L2.det:
        return False
    g1 = _positive_gram(L1)
    g2 = _positive_gram(L2)
    t = linalg.lll_reduce(g1)
    b = linalg.congruent(t, g1)
    n = len(b)
    top = max(b[i][i] for i in range(n))
    vecs = linalg.short_vectors(g2, top)
    vecs = vecs + [tuple(-x for x in v) for v in vecs]
    by_norm: dict[int, list[tuple[int, ...]]] = {}
    gv = {v: linalg.matvec(g2, v) for v in vecs}
    for v in vecs:
        by_norm.setdefault(linalg.bilinear(v, g2, v), []).append(v)
    chosen: list[tuple[int, ...]] = []

    def rec(i):
        if i == n:
            return True
        for v in by_norm.get(b[i][i], []):
            gvv = gv[v]
            if all(sum(a * c for a, c in zip(chosen[j], gvv)) == b[j][i] for j in range(i)):
                chosen.append(v)
                if rec(i + 1):
                    return True
                chosen.pop()
        return False

    return rec(0)


_ROOT_COUNTS = {"E6": 72, "E7": 126, "E8": 240}


def root_type(L: Lattice) -> list[str]:
    """ADE type of the root system (norm +-2 vectors) of a definite lattice."""
    roots = short_vectors(L, 2)
    roots = [v for v in roots if abs(L.norm(v)) == 2]
    parent = list(range(len(roots)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if L.inner(roots[i], roots[j]) != 0:
                parent[find(i)] = find(j)
    comps: dict[int, list] = {}
    for i, v in enumerate(roots):
        comps.setdefault(find(i), []).append(v)
    out = []
    for vs in comps.values():
        count = 2 * len(vs)
        rk = linalg.rank(vs)
        label = None
        if count == rk * (rk + 1):
            label = f"A{rk}"
        elif rk >= 4 and count == 2 * rk * (rk - 1):
            label = f"D{rk}"
        elif _ROOT_COUNTS.get(f"E{rk}") == count:
            label = f"E{rk}"
        if label is None:
            raise LatticeError(f"root component with {count} roots in rank {rk} is not of ADE type")
        out.append(label)
    return sorted(out, key=lambda s: (s[0], int(s[1:])))


# ---------------------------------------------------------------------------
# Heegner vectors


def _kernel_mod2(gram: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(gram)
    rows = [[x % 2 for x in row] for row in gram]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(n):
            if i != r and rows[i][c]:
                rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for i, c in enumerate(pivots):
            if rows[i][f]:
                v[c] = 1
        basis.append(v)
    return basis


def heegner_vectors(L: Lattice, norm: int, half_in_dual: bool = True, box: int = 4,
                    limit: int | None = None) -> Iterator[tuple[int, ...]]:
    """Primitive l with (l, l) = norm (and l/2 in the dual lattice when asked).

    Searches coefficient vectors with entries in [-box, box], in order of
    increasing sup-norm, and stops after ``limit`` hits.
    """
    if box < 1:
        raise LatticeError("search box must be at least 1")
    n = L.rank
    if half_in_dual:
        kb = _kernel_mod2(L.gram)
        patterns = []
        for bits in product((0, 1), repeat=len(kb)):
            v = [0] * n
            for bit, row in zip(bits, kb):
                if bit:
                    v = [(a + b) % 2 for a, b in zip(v, row)]
            if any(v):
                patterns.append(v)
    else:
        patterns = [None]
    found = 0
    for k in range(1, box + 1):
        for pat in patterns:
            if pat is None:
                choices = [range(-k, k + 1)] * n
            else:
                choices = [[x for x in range(-k, k + 1) if x % 2 == p] for p in pat]
            for v in product(*choices):
                if max(abs(x) for x in v) != k:
                    continue
                if L.norm(v) != norm:
                    continue
                if linalg.vector_gcd(v) != 1:
                    continue
                if half_in_dual and any(x % 2 for x in linalg.matvec(L.gram, v)):
                    continue
                yield tuple(v)
                found += 1
                if limit is not None and found >= limit:
                    return


def isometry_route(L1: Lattice, L2: Lattice) -> tuple[bool, str]:
    """Isometry decision together with the name of the test that certified it."""
    if L1.rank != L2.rank or L1.signature != L2.signature or L1.det != L2.det:
        return False, "invariants"
    if L1.is_even != L2.is_even:
        return False, "parity"
    if L1.is_definite:
        return definite_isometric(L1, L2), "definite_isometric"
    if L1.is_even and discforms.is_two_elementary(L1.discriminant_form) \
            and discforms.is_two_elementary(L2.discriminant_form):
        return two_elementary_isometric(L1, L2), "two_elementary_isometric"
    if L1.is_even:
        return indefinite_isometric(L1, L2), "indefinite_isometric"
    return odd_isometric(L1, L2), "odd_isometric"


def isometric(L1: Lattice, L2: Lattice) -> bool:
    """Isometry test dispatching on definiteness and parity."""
    return isometry_route(L1, L2)[0]
