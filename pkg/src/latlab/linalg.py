"""Exact integer and rational linear algebra.

Every routine works on plain nested lists of ``int`` or ``Fraction`` and
never touches floating point.  Matrices are lists of rows.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def copy_matrix(m: Sequence[Sequence]) -> list[list]:
    return [list(row) for row in m]


def transpose(m: Sequence[Sequence]) -> list[list]:
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(m: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def vecmat(v: Sequence, m: Sequence[Sequence]) -> list:
    n = len(m[0]) if m else 0
    out = [0] * n
    for coef, row in zip(v, m):
        if coef:
            for j in range(n):
                out[j] += coef * row[j]
    return out


def bilinear(x: Sequence, gram: Sequence[Sequence], y: Sequence):
    """Return x^T G y."""
    return sum(xi * gy for xi, gy in zip(x, matvec(gram, y)))


def congruent(basis: Sequence[Sequence], gram: Sequence[Sequence]) -> list[list]:
    """Return B G B^T."""
    return matmul(matmul(basis, gram), transpose(basis))


def is_symmetric(m: Sequence[Sequence]) -> bool:
    n = len(m)
    return all(len(row) == n for row in m) and all(
        m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n)
    )


def determinant(m: Sequence[Sequence]) -> int | Fraction:
    """Determinant by fraction-free Bareiss elimination (exact)."""
    n = len(m)
    if n == 0:
        return 1
    if any(isinstance(x, Fraction) for row in m for x in row):
        return _rational_det(m)
    a = copy_matrix(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _rational_det(m: Sequence[Sequence]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


def inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact rational inverse; raises ValueError when singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [row[n:] for row in a]


def rank(m: Sequence[Sequence]) -> int:
    if not m:
        return 0
    a = [[Fraction(x) for x in row] for row in m]
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, rows):
            if a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r


def common_denominator(values) -> int:
    d = 1
    for v in values:
        den = Fraction(v).denominator
        d = d * den // gcd(d, den)
    return d


def vector_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U*M*V = D, U and V unimodular.

    D is diagonal (rectangular allowed) with non-negative entries and
    d_1 | d_2 | ... ; zero entries come last.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [[int(x) for x in row] for row in m]
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        # row_dst += f * row_src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    t = 0
    while t < min(rows, cols):
        # smallest nonzero entry of the remaining block becomes the pivot
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        done = False
            if done:
                # pivot must divide the rest of the block
                bad = None
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if a[i][j] % a[t][t]:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, 1)
                continue
            # move the smallest remaining entry of row/column t to the pivot
            best = (abs(a[t][t]), t, t)
            for i in range(t + 1, rows):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, cols):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            swap_rows(t, best[1])
            swap_cols(t, best[2])
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, a, v


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    _, d, _ = smith_normal_form(m)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


# ---------------------------------------------------------------------------
# Hermite normal form and kernels


def _echelon_with_transform(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, list[int]]:
    """Row-reduce over Z: returns (H, U, pivots) with U*M = H.

    H is in Hermite normal form (positive pivots, entries above each pivot
    reduced into [0, pivot)); zero rows sit at the bottom.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    h = [[int(x) for x in row] for row in m]
    u = identity(rows)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if h[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(h[i][c]))
            h[r], h[piv] = h[piv], h[r]
            u[r], u[piv] = u[piv], u[r]
            clean = True
            for i in range(r + 1, rows):
                if h[i][c]:
                    q = h[i][c] // h[r][c]
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    if h[i][c]:
                        clean = False
            if clean:
                break
        if r < rows and h[r][c] != 0:
            if h[r][c] < 0:
                h[r] = [-x for x in h[r]]
                u[r] = [-x for x in u[r]]
            for i in range(r):
                q = h[i][c] // h[r][c]
                if q:
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
            pivots.append(c)
            r += 1
    return h, u, pivots


def hermite_normal_form(m: Sequence[Sequence[int]]) -> Matrix:
    """Row-style HNF of the row span, zero rows removed."""
    h, _, pivots = _echelon_with_transform(m)
    return h[: len(pivots)]


def integer_kernel(m: Sequence[Sequence[int]]) -> Matrix:
    """Saturated basis (rows, in HNF) of {x in Z^rows : x*M = 0}."""
    rows = len(m)
    if rows == 0:
        return []
    _, u, pivots = _echelon_with_transform(m)
    kernel = u[len(pivots):]
    if not kernel:
        return []
    return hermite_normal_form(kernel)


def rational_basis_hnf(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """HNF basis of the Z-span of rational row vectors."""
    den = common_denominator(x for row in rows for x in row)
    scaled = [[int(Fraction(x) * den) for x in row] for row in rows]
    return [[Fraction(x, den) for x in row] for row in hermite_normal_form(scaled)]


# ---------------------------------------------------------------------------
# Signature


def signature(gram: Sequence[Sequence]) -> tuple[int, int, int]:
    """Return (n_plus, n_zero, n_minus) by exact congruence diagonalisation."""
    a = [[Fraction(x) for x in row] for row in gram]
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        k = next((i for i in active if a[i][i] != 0), None)
        if k is None:
            pair = next(((i, j) for i in active for j in active if i < j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # replace e_i by e_i + e_j, making the diagonal entry 2*a_ij
            for c in range(n):
                a[i][c] += a[j][c]
            for r in range(n):
                a[r][i] += a[r][j]
            k = i
        piv = a[k][k]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        active.remove(k)
        for i in active:
            f = a[i][k] / piv
            if f:
                for c in range(n):
                    a[i][c] -= f * a[k][c]
                for r in range(n):
                    a[r][i] -= f * a[r][k]
    return pos, n - pos - neg, neg


# ---------------------------------------------------------------------------
# Positive definite helpers: LLL reduction and short vector enumeration


def lll_reduce(gram: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4)) -> Matrix:
    """LLL-reduce a positive definite Gram matrix.

    Returns a unimodular T such that T*G*T^T is LLL-reduced.
    """
    n = len(gram)
    t = identity(n)
    g = [[Fraction(x) for x in row] for row in gram]

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        bstar = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                s = g[i][j] - sum(mu[j][k] * mu[i][k] * bstar[k] for k in range(j))
                mu[i][j] = s / bstar[j]
            bstar[i] = g[i][i] - sum(mu[i][k] ** 2 * bstar[k] for k in range(i))
        return mu, bstar

    def size_reduce(k, j, q):
        t[k] = [x - q * y for x, y in zip(t[k], t[j])]
        for c in range(n):
            g[k][c] -= q * g[j][c]
        for r in range(n):
            g[r][k] -= q * g[r][j]

    k = 1
    mu, bstar = gso()
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                size_reduce(k, j, q)
                mu, bstar = gso()
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            t[k], t[k - 1] = t[k - 1], t[k]
            g[k], g[k - 1] = g[k - 1], g[k]
            for row in g:
                row[k], row[k - 1] = row[k - 1], row[k]
            mu, bstar = gso()
            k = max(k - 1, 1)
    return t


def short_vectors(gram: Sequence[Sequence[int]], bound) -> list[tuple[int, ...]]:
    """All nonzero x with 0 < x^T G x <= bound, G positive definite.

    Fincke-Pohst enumeration with exact rational arithmetic.  Only one of
    each pair {x, -x} is returned (the one whose last nonzero coordinate is
    positive).
    """
    n = len(gram)
    bound = Fraction(bound)
    # q_ii (x_i + sum_{j>i} q_ij x_j)^2 decomposition
    a = [[Fraction(x) for x in row] for row in gram]
    q = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            q[i][j] = a[i][j]
    for i in range(n):
        if q[i][i] <= 0:
            raise ValueError("Gram matrix is not positive definite")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    out: list[tuple[int, ...]] = []
    x = [0] * n

    def rec(i, remaining):
        center = -sum(q[i][j] * x[j] for j in range(i + 1, n))
        lim = remaining / q[i][i]
        r = isqrt(lim.numerator * lim.denominator) // lim.denominator + 1
        lo = int(center) - r - 1
        hi = int(center) + r + 1
        for v in range(lo, hi + 1):
            d = v - center
            used = q[i][i] * d * d
            if used > remaining:
                continue
            x[i] = v
            if i == 0:
                if any(x):
                    out.append(tuple(x))
            else:
                rec(i - 1, remaining - used)
        x[i] = 0

    if n:
        rec(n - 1, bound)
    result = []
    for v in out:
        last = next(c for c in reversed(v) if c)
        if last > 0:
            result.append(v)
    result.sort(key=lambda v: (bilinear(v, gram, v), v))
    return result
