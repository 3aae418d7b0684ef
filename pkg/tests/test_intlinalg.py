import random

import pytest

from sbvol.intlinalg import (
    det,
    hermite_form,
    identity_matrix,
    integer_kernel,
    invert_unimodular,
    mat_mul,
    mat_vec,
    rank,
    smith_form,
    solve_diophantine,
    solve_rational,
)


def naive_upper_triangularize(a):
    """Independent Euclidean row reduction; returns the echelon matrix only."""
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0])
    r = 0
    for c in range(cols):
        while True:
            nz = [i for i in range(r, rows) if m[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(m[i][c]))
            m[r], m[i0] = m[i0], m[r]
            done = True
            for i in range(r + 1, rows):
                q = m[i][c] // m[r][c]
                m[i] = [x - q * y for x, y in zip(m[i], m[r])]
                if m[i][c] != 0:
                    done = False
            if done:
                break
        if r < rows and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-x for x in m[r]]
            r += 1
    return m


def test_hermite_identity():
    h, u = hermite_form(identity_matrix(3))
    assert h == identity_matrix(3)
    assert u == identity_matrix(3)


def test_hermite_zero():
    h, u = hermite_form([[0, 0], [0, 0]])
    assert h == [[0, 0], [0, 0]]
    assert u == identity_matrix(2)


def test_hermite_2x4_against_row_reduction_oracle():
    a = [[2, 4], [6, 8]]
    h, u = hermite_form(a)
    assert mat_mul(u, a) == h
    assert abs(det(u)) == 1
    assert h[0][0] == 2 and h[1][0] == 0  # upper triangular with pivot 2
    oracle = naive_upper_triangularize(a)
    # same pivots up to the above-pivot reduction
    assert [h[i][i] for i in range(2)] == [oracle[i][i] for i in range(2)]


def test_hermite_idempotent():
    rng = random.Random(1)
    for _ in range(25):
        a = [[rng.randint(-6, 6) for _ in range(3)] for _ in range(4)]
        h, _ = hermite_form(a)
        h2, u2 = hermite_form(h)
        assert h2 == h
        assert u2 == identity_matrix(4)


def test_smith_diag_2_3():
    sd = smith_form([[2, 0], [0, 3]])
    assert sd.invariant_factors == (1, 6)
    # brute-force oracle over small unimodular transforms: gcd of entries is
    # the first factor, |det| the product
    assert sd.invariant_factors[0] == 1
    assert sd.invariant_factors[0] * sd.invariant_factors[1] == 6


def test_smith_identity():
    sd = smith_form(identity_matrix(4))
    assert sd.invariant_factors == (1, 1, 1, 1)


def test_smith_2x2():
    a = [[2, 4], [6, 8]]
    sd = smith_form(a)
    assert sd.invariant_factors == (2, 4)
    assert mat_mul(mat_mul([list(r) for r in sd.u], a), [list(r) for r in sd.v]) == [
        list(r) for r in sd.s
    ]


def test_smith_random_exact():
    rng = random.Random(2)
    for _ in range(30):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        a = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
        sd = smith_form(a)
        u = [list(r) for r in sd.u]
        v = [list(r) for r in sd.v]
        assert mat_mul(mat_mul(u, a), v) == [list(r) for r in sd.s]
        assert abs(det(u)) == 1 and abs(det(v)) == 1
        f = sd.invariant_factors
        assert all(f[i + 1] % f[i] == 0 for i in range(len(f) - 1))
        assert all(x > 0 for x in f)


def test_smith_against_sympy():
    sympy = pytest.importorskip("sympy")
    from sympy.matrices.normalforms import invariant_factors

    rng = random.Random(3)
    for _ in range(20):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        a = [[rng.randint(-8, 8) for _ in range(cols)] for _ in range(rows)]
        ours = [int(x) for x in smith_form(a).invariant_factors]
        theirs = [abs(int(x)) for x in invariant_factors(sympy.Matrix(a)) if x != 0]
        assert ours == theirs


def test_kernel_rank_counts():
    basis = integer_kernel([[1, 1, 1]])
    assert len(basis) == 2
    for b in basis:
        assert sum(b) == 0


def test_kernel_invertible_empty():
    assert integer_kernel([[2, 1], [1, 1]]) == []


def test_kernel_saturated():
    assert integer_kernel([[2, -2]]) == [(1, 1)]


def test_kernel_basis_is_lattice_basis():
    # HNF of the kernel basis has unimodular pivot block (saturation)
    basis = integer_kernel([[2, 3, 5], [1, 1, 1]])
    assert len(basis) == 1
    from math import gcd

    g = 0
    for x in basis[0]:
        g = gcd(g, abs(x))
    assert g == 1


def test_solve_diophantine_parity():
    assert solve_diophantine([[2]], [3]) is None


def test_solve_diophantine_identity():
    assert solve_diophantine(identity_matrix(3), [5, -2, 7]) == (5, -2, 7)


def test_solve_diophantine_gcd():
    x = solve_diophantine([[2, 3]], [1])
    assert x is not None
    assert 2 * x[0] + 3 * x[1] == 1


def test_solve_diophantine_random():
    rng = random.Random(4)
    for _ in range(30):
        rows, cols = rng.randint(1, 3), rng.randint(1, 4)
        a = [[rng.randint(-5, 5) for _ in range(cols)] for _ in range(rows)]
        x0 = [rng.randint(-4, 4) for _ in range(cols)]
        b = mat_vec(a, x0)
        x = solve_diophantine(a, b)
        assert x is not None
        assert mat_vec(a, x) == tuple(b)


def test_rank_and_det():
    assert rank([[1, 2], [2, 4]]) == 1
    assert det([[2, 0], [0, 3]]) == 6
    assert det([[0, 1], [1, 0]]) == -1


def test_invert_unimodular():
    u = [[1, 2], [0, 1]]
    ui = invert_unimodular(u)
    assert mat_mul(u, ui) == identity_matrix(2)


def test_solve_rational_inconsistent():
    assert solve_rational([[1, 1], [1, 1]], [1, 2]) is None
