"""Exact integer linear algebra: Hermite and Smith forms, kernels, linear solving.

Matrices are plain lists of lists of Python ints (rows); everything is
arbitrary precision and every decomposition is verified exactly before it
is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

Matrix = list  # list[list[int]], row major
Vector = tuple  # tuple[int, ...]


def identity_matrix(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zero_matrix(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def copy_matrix(a: Matrix) -> Matrix:
    return [list(row) for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a: Matrix, x) -> Vector:
    return tuple(sum(c * v for c, v in zip(row, x)) for row in a)


def vec_mat(x, a: Matrix) -> Vector:
    return tuple(sum(x[i] * a[i][j] for i in range(len(a))) for j in range(len(a[0])))


def dot(x, y) -> int:
    return sum(a * b for a, b in zip(x, y))


def vec_gcd(x) -> int:
    g = 0
    for v in x:
        g = gcd(g, abs(v))
    return g


def primitive(x) -> Vector:
    """Divide an integer vector by the gcd of its entries (zero vector unchanged)."""
    g = vec_gcd(x)
    if g <= 1:
        return tuple(x)
    return tuple(v // g for v in x)


def det(a: Matrix) -> int:
    """Determinant of a square integer matrix by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = copy_matrix(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rank(a: Matrix) -> int:
    """Rank over the rationals, by fraction-free elimination."""
    if not a or not a[0]:
        return 0
    m = copy_matrix(a)
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, rows):
            if m[i][c] != 0:
                f1, f2 = m[i][c], m[r][c]
                m[i] = [f2 * x - f1 * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def is_unimodular(a: Matrix) -> bool:
    return len(a) > 0 and len(a) == len(a[0]) and abs(det(a)) == 1


def hermite_form(a: Matrix) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns (H, U) with U unimodular, U*a = H, H in row echelon form with
    positive pivots and entries above each pivot reduced into [0, pivot).
    """
    m = copy_matrix(a)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    u = identity_matrix(rows)
    r = 0
    pivots = []
    for c in range(cols):
        # Euclidean elimination below row r in column c.
        while True:
            nz = [i for i in range(r, rows) if m[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: (abs(m[i][c]), i))
            if piv != r:
                m[r], m[piv] = m[piv], m[r]
                u[r], u[piv] = u[piv], u[r]
            done = True
            for i in range(r + 1, rows):
                if m[i][c] != 0:
                    q = m[i][c] // m[r][c]
                    if q:
                        m[i] = [x - q * y for x, y in zip(m[i], m[r])]
                        u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    if m[i][c] != 0:
                        done = False
            if done:
                break
        if r < rows and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-x for x in m[r]]
                u[r] = [-x for x in u[r]]
            pivots.append((r, c))
            r += 1
            if r == rows:
                break
    # Reduce entries above each pivot.
    for r, c in pivots:
        for i in range(r):
            q = m[i][c] // m[r][c]
            if q:
                m[i] = [x - q * y for x, y in zip(m[i], m[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
    assert mat_mul(u, a) == m
    return m, u


@dataclass(frozen=True)
class SmithDecomposition:
    """U * A * V = S with S diagonal, d_i | d_{i+1}, U and V unimodular."""

    s: tuple
    u: tuple
    v: tuple

    @property
    def diagonal(self) -> tuple:
        return tuple(self.s[i][i] for i in range(min(len(self.s), len(self.s[0]) if self.s else 0)))

    @property
    def invariant_factors(self) -> tuple:
        return tuple(d for d in self.diagonal if d != 0)


def smith_form(a: Matrix) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivot rule: smallest absolute value among nonzero entries, ties broken by
    lowest (row, col); this makes the decomposition deterministic.
    """
    m = copy_matrix(a)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    u = identity_matrix(rows)
    v = identity_matrix(cols)

    def row_op(i, j, q):  # row_i -= q * row_j
        m[i] = [x - q * y for x, y in zip(m[i], m[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for row in m:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    limit = min(rows, cols)

    def diagonalize(start):
        for t in range(start, limit):
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    e = m[i][j]
                    if e != 0 and (best is None or abs(e) < abs(m[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            while True:
                # Clear column t, then row t; restart if clearing reintroduces entries.
                for i in range(t + 1, rows):
                    if m[i][t] != 0:
                        q = m[i][t] // m[t][t]
                        row_op(i, t, q)
                        if m[i][t] != 0:  # remainder is a smaller pivot
                            swap_rows(t, i)
                if any(m[i][t] != 0 for i in range(t + 1, rows)):
                    continue
                for j in range(t + 1, cols):
                    if m[t][j] != 0:
                        q = m[t][j] // m[t][t]
                        col_op(j, t, q)
                        if m[t][j] != 0:
                            swap_cols(t, j)
                if any(m[t][j] != 0 for j in range(t + 1, cols)) or any(
                    m[i][t] != 0 for i in range(t + 1, rows)
                ):
                    continue
                break

    diagonalize(0)
    # Enforce the divisibility chain d_i | d_{i+1}: a column add exposes the
    # pair to a gcd step, then the block is re-diagonalized.
    while True:
        bad = None
        for i in range(limit - 1):
            a_, b_ = m[i][i], m[i + 1][i + 1]
            if a_ != 0 and b_ != 0 and b_ % a_ != 0:
                bad = i
                break
        if bad is None:
            break
        col_op(bad, bad + 1, -1)  # col_bad += col_{bad+1}
        diagonalize(bad)

    # Positive diagonal.
    for i in range(limit):
        if m[i][i] < 0:
            m[i] = [-x for x in m[i]]
            u[i] = [-x for x in u[i]]
    assert mat_mul(mat_mul(u, a), v) == m
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    sd = SmithDecomposition(
        s=tuple(tuple(r) for r in m),
        u=tuple(tuple(r) for r in u),
        v=tuple(tuple(r) for r in v),
    )
    diag = sd.invariant_factors
    assert all(diag[i + 1] % diag[i] == 0 for i in range(len(diag) - 1))
    return sd


def integer_kernel(a: Matrix) -> list:
    """Basis of the lattice {x in Z^cols : a x = 0}.

    The kernel of an integer matrix is saturated, so the returned vectors are
    a genuine lattice basis of span(kernel) intersected with Z^cols.
    """
    if not a:
        return []
    cols = len(a[0])
    h, u = hermite_form(transpose(a))
    basis = [tuple(u[i]) for i in range(cols) if all(x == 0 for x in h[i])]
    for b in basis:
        assert all(dot(row, b) == 0 for row in a)
    return basis


def solve_diophantine(a: Matrix, b) -> Vector | None:
    """One integer solution x of a x = b, or None when none exists."""
    rows = len(a)
    if rows == 0:
        return ()
    cols = len(a[0])
    h, u = hermite_form(transpose(a))  # u * a^T = h, so a = h^T u^{-T}
    residual = list(b)
    z = [0] * cols
    for i in range(cols):
        lead = next((j for j in range(rows) if h[i][j] != 0), None)
        if lead is None:
            continue
        if residual[lead] % h[i][lead] != 0:
            return None
        q = residual[lead] // h[i][lead]
        z[i] = q
        residual = [r - q * hij for r, hij in zip(residual, h[i])]
    if any(r != 0 for r in residual):
        return None
    x = vec_mat(z, u)
    assert mat_vec(a, x) == tuple(b)
    return x


def solve_rational(a: Matrix, b) -> tuple | None:
    """One rational solution of a x = b (exact), or None when inconsistent."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [[Fraction(x) for x in row] + [Fraction(v)] for row, v in zip(a, b)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    for i in range(r, rows):
        if m[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = m[i][cols]
    return tuple(x)


def invert_unimodular(a: Matrix) -> Matrix:
    """Exact inverse of a unimodular integer matrix (again integer)."""
    n = len(a)
    h, u = hermite_form(a)
    assert h == identity_matrix(n), "matrix is not unimodular"
    return u
